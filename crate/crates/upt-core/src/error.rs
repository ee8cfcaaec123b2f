use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("state is not normalized: norm^2 = {0}")]
    NotNormalized(f64),
    #[error("basis is not orthonormal: max deviation {0}")]
    NotOrthonormal(f64),
    #[error("matrix is not unitary: max deviation {0}")]
    NotUnitary(f64),
    #[error("unknown experiment: {0}")]
    UnknownExperiment(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
