use thiserror::Error;

/// Errors raised by constructors and checked operations across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample space must contain at least one outcome")]
    EmptySpace,
    #[error("duplicate outcome label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown outcome label {0:?}")]
    UnknownLabel(String),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{context}: value for {label:?} must be finite")]
    NonFinite { context: &'static str, label: String },
    #[error("weight for {label:?} is {value}, outside [0, 1]")]
    WeightOutOfRange { label: String, value: f64 },
    #[error("largest weight is {max_weight}, expected exactly 1 (enable renormalization to rescale)")]
    NotNormalized { max_weight: f64 },
    #[error("cannot renormalize: every weight is zero")]
    ZeroWeights,
    #[error("operands live on different sample spaces")]
    SpaceMismatch,
    #[error("{0} must not be empty")]
    EmptyInput(&'static str),
    #[error("prefix length {n} outside 1..={available}")]
    PrefixOutOfRange { n: usize, available: usize },
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("exponent delta must lie in (0, 2), got {value}")]
    DeltaOutOfRange { value: f64 },
    #[error("step index must be at least 1")]
    ZeroIndex,
    #[error("explicit table has {rows} rows, step {index} requested")]
    TableExhausted { index: usize, rows: usize },
    #[error("invalid growth function: {0}")]
    InvalidPsi(String),
    #[error("horizon must be at least {min}, got {got}")]
    HorizonTooSmall { min: usize, got: usize },
    #[error("scenario declares no [{0}] section")]
    MissingSection(&'static str),
    #[error("hypothesis check returned {status}; rerun with an explicit override to proceed anyway")]
    HypothesisNotSatisfied { status: String },
    #[error("scenario parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
