use thiserror::Error;

pub type Result<T, E = AdeleError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdeleError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index {index} out of range for level {level}")]
    IndexOutOfRange { index: usize, level: usize },
    #[error("level {0} is not supported")]
    UnsupportedLevel(i64),
    #[error("{0} is not an upper bound of the chain")]
    NotUpperBound(String),
    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),
    /// The element is indistinguishable from zero at the represented precision.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no significant digits: requested precision {prec} but valuation is {valuation}")]
    NoSignificantDigits { prec: i64, valuation: i64 },
    #[error("point mismatch: {0} vs {1}")]
    PointMismatch(String, String),
    #[error("open set is empty")]
    EmptyOpen,
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("restricted product violated: {0}")]
    NotRestricted(String),
    #[error("window mismatch: {0}")]
    WindowMismatch(String),
    #[error("cohomology did not stabilize within {rounds} rounds")]
    NotStabilized { rounds: usize },
    #[error("default tail is not a unit: {0}")]
    NonUnitTail(String),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("twist profile not realizable by a split bundle: {0}")]
    ProfileNotRealizable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
