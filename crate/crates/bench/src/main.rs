use std::process::ExitCode;

fn main() -> ExitCode {
    match pivot_bench::cli::run(std::env::args().collect()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
