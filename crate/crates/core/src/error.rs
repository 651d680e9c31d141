use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error("zero element has no unit normalization")]
    ZeroElement,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element {0} does not lie in the base field")]
    NotInField(String),
    #[error("spanning vectors are linearly dependent")]
    DegenerateSpan,
    #[error("resource limit exceeded: {needed} candidates requested, ceiling is {limit}")]
    ResourceLimit { needed: u128, limit: u64 },
    #[error("integer overflow in enumeration kernel: {0}")]
    Overflow(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("hypothesis not satisfied: {0}")]
    HypothesisFails(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
