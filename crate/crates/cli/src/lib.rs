//! Seeded experiment runner for the teleportation fidelity benchmarks.
//!
//! Every run is fully described by an [`config::ExperimentConfig`], which is
//! embedded in the output so a file can be re-run and compared byte for byte.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{Command, ExperimentConfig, Format};
pub use error::CliError;
pub use output::{read_config, render};
pub use run::{run, run_with_workers, Cell, Table};
