use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GirgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "ball of radius {eps} needs about {expected_attempts:.0} rejection attempts per sample \
         (budget {budget}); use a larger radius"
    )]
    BallTooSmall {
        eps: f64,
        expected_attempts: f64,
        budget: usize,
    },

    #[error("rejection budget of {budget} attempts exhausted while sampling in a ball of radius {eps}")]
    RejectionBudgetExhausted { eps: f64, budget: usize },

    #[error("tail fit needs at least {required} values at or above the cutoff, found {found}")]
    InsufficientTail { found: usize, required: usize },

    #[error("tail fit is degenerate: all values at or above the cutoff are equal")]
    DegenerateTail,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("exact cut oracle is limited to {limit} vertices, got {size}")]
    OracleTooLarge { size: usize, limit: usize },

    #[error("vertex {vertex} has no coordinate on axis {axis}")]
    MissingCoordinate { vertex: u32, axis: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = GirgError> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> GirgError {
    GirgError::InvalidParameter(msg.into())
}
