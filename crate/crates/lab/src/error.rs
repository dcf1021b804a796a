use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] unitdist_core::Error),
    #[error("a scaling series needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("count at n = {0} is not positive")]
    NonPositiveCount(u64),
    #[error("series sizes must be strictly increasing")]
    NotIncreasing,
    #[error("config error at {pointer:?}: {message}")]
    Config { pointer: String, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: bad input at {pointer:?}: {message}")]
    Input { path: PathBuf, pointer: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl LabError {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Core(_) => "core",
            LabError::TooFewPoints(_) | LabError::NonPositiveCount(_) | LabError::NotIncreasing => "series",
            LabError::Config { .. } => "config",
            LabError::Io { .. } => "io",
            LabError::Input { .. } => "input",
            LabError::Usage(_) => "usage",
        }
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
