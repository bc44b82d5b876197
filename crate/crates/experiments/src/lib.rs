//! Simulation studies for `haarinv`, each written as one deterministic CSV.
//!
//! Every replicate draws from its own stream keyed by (grid index, rep), so
//! the files are byte-identical across runs and thread counts.

pub mod config;
pub mod csv;
pub mod error;
mod runners;

use std::path::PathBuf;

pub use config::{ExperimentConfig, ExperimentKind, Grids, Overrides};
pub use error::{ExperimentError, Result};

/// Runs one experiment and returns the CSV paths written under `out_dir`.
pub fn run(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    config.validate()?;
    let table = runners::build_table(config)?;
    let path = table.write(&config.out_dir, &format!("{}.csv", config.kind))?;
    Ok(vec![path])
}

/// Same as [`run`] but returns the table instead of writing it.
pub fn run_to_table(config: &ExperimentConfig) -> Result<csv::Table> {
    config.validate()?;
    runners::build_table(config)
}
