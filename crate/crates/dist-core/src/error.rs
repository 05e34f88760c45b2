use thiserror::Error;

/// Errors produced by space construction and distribution arithmetic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error("axis set is empty")]
    EmptyAxisSet,
    #[error("axis index {0} out of range")]
    AxisOutOfRange(usize),
    #[error("axis index {0} appears more than once")]
    DuplicateAxis(usize),
    #[error("axis sets overlap at index {0}")]
    AxisOverlap(usize),
    #[error("axis label `{0}` appears more than once")]
    DuplicateLabel(String),
    #[error("cardinality {card} is invalid for axis `{label}`")]
    InvalidCardinality { label: String, card: usize },
    #[error("product space exceeds the addressable index range")]
    SpaceTooLarge,
    #[error("probability vector has {got} entries, the space has {want} states")]
    LengthMismatch { got: usize, want: usize },
    #[error("probabilities sum to {sum:?}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("nonpositive probability {value:?} at state {index}")]
    NonPositiveEntry { index: usize, value: f64 },
    #[error("negative probability {value:?} at state {index}")]
    NegativeEntry { index: usize, value: f64 },
    #[error("distributions live on different spaces")]
    SpaceMismatch,
    #[error("kernel row {row} sums to {sum:?}, expected 1")]
    RowNotNormalized { row: usize, sum: f64 },
    #[error("zero marginal probability at given-state {0}")]
    ZeroMarginal(usize),
    #[error("not a canonical system layout: {0}")]
    NotSystemLayout(String),
    #[error("factor does not match the space: {0}")]
    FactorMismatch(String),
    #[error("axis `{axis}` is produced by {count} factors, expected exactly one")]
    BadFactorCover { axis: String, count: usize },
    #[error("invalid state permutation for axis of cardinality {0}")]
    BadPermutation(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, DistError>;
