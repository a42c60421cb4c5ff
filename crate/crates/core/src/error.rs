use thiserror::Error;

/// Errors raised by the bounds engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,
    #[error("square root of an interval with negative lower endpoint")]
    NegativeRadicand,
    #[error("fractional power of an interval reaching below zero")]
    NegativeBaseFractionalExponent,
    #[error("negative power of an interval containing zero")]
    ZeroToNegativePower,
    #[error("invalid interval: lower endpoint exceeds upper endpoint")]
    InvalidInterval,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameter error: {0}")]
    Param(String),
    #[error("unsupported case: n = {n}, (d, j) = ({d}, {j}) has no explicit bound")]
    UnsupportedCase { d: u32, n: u32, j: u32 },
    #[error("pole: {0}")]
    Pole(String),
    #[error("degenerate case: {0}")]
    DegenerateCase(String),
    #[error("no sign change: {0}")]
    NoSignChange(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unsupported field: d = {0} has no critical exponent gap; the vanishing statements only cover d = 4 and d = 8 (they are false for real hyperbolic lattices)")]
    UnsupportedField(u32),
    #[error("no admissible n found below the search cap {cap}")]
    NotFoundWithinCap { cap: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not positive semidefinite: {0}")]
    NotPsd(String),
    #[error("comparison still inconclusive at {prec} bits")]
    Inconclusive { prec: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
