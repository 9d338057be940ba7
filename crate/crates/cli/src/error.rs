use std::path::Path;

use cpo_slm_core::Error as CoreError;
use thiserror::Error;

/// Failures surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("{0}")]
    Convergence(CoreError),

    #[error("{0}")]
    Sampling(CoreError),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Compute(CoreError),
}

impl CliError {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Convergence(_) => 3,
            CliError::Sampling(_) => 4,
            CliError::Io { .. } => 5,
            CliError::Compute(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { name, reason } => CliError::config(name, reason),
            CoreError::Convergence { .. }
            | CoreError::Stability { .. }
            | CoreError::Leakage { .. } => CliError::Convergence(e),
            CoreError::Sampling { .. } | CoreError::Geometry(_) => CliError::Sampling(e),
            other => CliError::Compute(other),
        }
    }
}
