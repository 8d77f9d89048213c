//! Experiment harness and command-line front end for the `pruned_pivot`
//! engines.

pub mod cli;
pub mod config;
pub mod experiment;
pub mod paths;
pub mod sbm;
pub mod stream;

pub use experiment::{run_experiment, Algorithm, ExperimentConfig, ExperimentResult};
pub use sbm::{sbm_generate, SbmConfig};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] pruned_pivot::Error),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
