use std::path::PathBuf;

use thiserror::Error;
use trilat_core::Error as CoreError;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitCode {
    Ok = 0,
    /// A comparison found a z-score above the limit.
    CompareFailed = 1,
    /// The body violates the fit condition.
    FitFailure = 2,
    Numerical = 3,
    BadInput = 4,
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("simulation disagrees with the analytic values (max |z| = {max_z:.3})")]
    CompareFailed { max_z: f64 },
}

impl AppError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            AppError::Core(e) => match e {
                CoreError::BodyTooLarge { .. } | CoreError::NeedleTooLong { .. } => ExitCode::FitFailure,
                CoreError::QuadratureFailure { .. } | CoreError::NonConvergence { .. } | CoreError::HitBound { .. } => {
                    ExitCode::Numerical
                }
                _ => ExitCode::BadInput,
            },
            AppError::Parse { .. } | AppError::Usage(_) => ExitCode::BadInput,
            AppError::Io { .. } | AppError::Json(_) => ExitCode::BadInput,
            AppError::CompareFailed { .. } => ExitCode::CompareFailed,
        }
    }
}
