//! File formats, report rendering and parallel drivers around [`capillum_core`].

pub mod io;
pub mod parallel;
pub mod report;

pub use capillum_core as core;

/// Errors surfaced by the command line tool.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] capillum_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

pub type AppResult<T> = Result<T, AppError>;
