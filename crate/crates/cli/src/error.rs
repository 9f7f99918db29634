use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Bound(#[from] fbbounds_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    /// 2 for bad arguments or inputs, 3 for violated internal invariants.
    pub fn exit_code(&self) -> i32 {
        use fbbounds_core::Error as E;
        match self {
            CliError::Bound(E::NonMonotone { .. } | E::NotAProbability(_)) => 3,
            CliError::Validation(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
