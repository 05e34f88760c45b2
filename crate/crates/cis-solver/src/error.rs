use dist_core::DistError;
use info_measures::MeasureError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CisError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("bad penalty schedule: {0}")]
    BadSchedule(String),
}

pub type Result<T> = std::result::Result<T, CisError>;
