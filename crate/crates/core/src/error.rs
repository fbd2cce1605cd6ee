use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid config: `{field}` {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("distribution fit failed: {0}")]
    FitFailure(String),

    #[error("cell {0} not found in grid")]
    CellNotFound(usize),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl SimError {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        SimError::InvalidConfig {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::InvalidConfig { .. } | SimError::ConfigParse(_) | SimError::FitFailure(_) => 1,
            SimError::Io { .. } => 2,
            SimError::InvalidGeometry(_) | SimError::CellNotFound(_) | SimError::Invariant(_) => 3,
        }
    }
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
