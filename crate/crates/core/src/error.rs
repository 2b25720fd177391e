use thiserror::Error;

use crate::center::CenterCertificate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("point {index} ({point:?}) is not in the interior of the domain")]
    PointOutsideInterior { index: usize, point: Vec<f64> },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported query: {0}")]
    Unsupported(String),

    /// The solver ran out of iterations; the best certificate found is attached.
    #[error("solver did not converge (membership gap {:.3e})", .0.membership_gap)]
    NonConvergence(Box<CenterCertificate>),
}
