use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("numeric failure: {0}")]
    Numeric(#[from] haarinv::Error),
}

impl ExperimentError {
    /// Process exit code: 2 usage/config, 3 I/O, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Usage(_) | ExperimentError::Config(_) => 2,
            ExperimentError::Io { .. } => 3,
            ExperimentError::Numeric(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

pub(crate) fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(ExperimentError::Config(msg.into()))
}
