//! Benchmark harness for the `subsel` command-line tool: experiment
//! configuration, sweeps with CSV output, and bound verification.

pub mod algorithm;
pub mod config;
pub mod error;
pub mod runner;
pub mod verify;

pub use algorithm::{parse_algorithms, Algorithm, AlgorithmRun, Engine};
pub use config::{ConfigOverrides, ExperimentConfig, GeneratorKind};
pub use error::RunError;
pub use runner::{read_csv, run_experiment, summarize, write_csv, TrialResult, CSV_HEADER};
