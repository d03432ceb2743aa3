//! Error types shared across the crate.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Hilbert-space dimension beyond what dense exact diagonalization supports.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An input violates a documented contract (e.g. a non-symmetric matrix
    /// passed to the symmetric eigensolver).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("optimization failed: {0}")]
    OptimizationFailure(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("no runs found in store at {0}")]
    NoRuns(PathBuf),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 0 success, 2 config, 3 capacity,
    /// 4 optimization failure, 5 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::Config(_) => 2,
            Error::Capacity(_) => 3,
            Error::OptimizationFailure(_) => 4,
            Error::Io { .. } | Error::NoRuns(_) => 5,
            Error::ContractViolation(_) | Error::InsufficientData(_) => 1,
        }
    }
}
