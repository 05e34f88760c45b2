use dist_core::DistError;
use thiserror::Error;

/// Errors raised when a joint does not have the shape a measure needs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("this measure needs a latent axis")]
    MissingLatent,
    #[error("this measure is defined on visible joints; marginalize the latent axis first")]
    UnexpectedLatent,
}

pub type Result<T> = std::result::Result<T, MeasureError>;
