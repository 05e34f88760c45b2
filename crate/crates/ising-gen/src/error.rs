use dist_core::DistError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IsingError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("bad weight matrix: {0}")]
    BadWeights(String),
    #[error("coupling strength must be finite and nonnegative, got {0}")]
    BadBeta(f64),
    #[error("no preset named {0:?}")]
    UnknownPreset(String),
    #[error("fixed-point iteration stopped after {iterations} steps at residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, IsingError>;
