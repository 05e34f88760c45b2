use dist_core::DistError;
use info_measures::MeasureError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("invalid split family: {0}")]
    BadFamily(String),
    #[error("joint does not fit the family: {0}")]
    FamilyMismatch(String),
}

pub type Result<T> = std::result::Result<T, EmError>;
