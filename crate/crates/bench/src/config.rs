//! `key = value` option files.
//!
//! Each non-comment line names a long flag without its dashes. The pairs
//! become command-line arguments placed ahead of the real ones, so an
//! explicit flag wins over the file.

use crate::BenchError;

pub fn parse_config(text: &str) -> Result<Vec<String>, BenchError> {
    let mut args = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| BenchError::Config(format!("line {}: expected key=value", i + 1)))?;
        let key = key.trim().trim_start_matches('-').replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(BenchError::Config(format!("line {}: invalid key", i + 1)));
        }
        args.push(format!("--{key}"));
        args.push(value.trim().to_string());
    }
    Ok(args)
}

/// Locates `--config PATH` or `--config=PATH` in raw arguments.
pub fn find_config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Splices file arguments right after the subcommand name.
pub fn merge_config_args(args: Vec<String>) -> Result<Vec<String>, BenchError> {
    let Some(path) = find_config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| BenchError::Config(format!("cannot read config {path}: {e}")))?;
    let extra = parse_config(&text)?;
    let sub = args
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map(|i| i + 2)
        .unwrap_or(args.len());
    let mut merged = args[..sub].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&args[sub..]);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs() {
        let args = parse_config("# sweep\ntrials = 10\np_in=0.5\n\n--seed=3\n").unwrap();
        assert_eq!(args, vec!["--trials", "10", "--p-in", "0.5", "--seed", "3"]);
        assert!(parse_config("trials 10").is_err());
        assert!(parse_config("config = x").is_err());
    }

    #[test]
    fn finds_path() {
        let a: Vec<String> = ["bin", "experiment", "--config=c.txt"]
            .map(String::from)
            .to_vec();
        assert_eq!(find_config_path(&a).as_deref(), Some("c.txt"));
        let b: Vec<String> = ["bin", "experiment", "--config", "d"]
            .map(String::from)
            .to_vec();
        assert_eq!(find_config_path(&b).as_deref(), Some("d"));
    }
}
