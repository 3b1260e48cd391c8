use thiserror::Error;

/// Errors produced while building, analysing or serializing coefficient sequences.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient a_{index} is zero")]
    ZeroCoefficient { index: usize },

    #[error("coefficient a_{index} is not finite")]
    NonFiniteCoefficient { index: usize },

    #[error("index {index} is past the end of a table of length {len}")]
    PastEnd { index: usize, len: usize },

    #[error("coefficient list is empty")]
    EmptyPeriod,

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("term t_{index} is not strictly positive")]
    NonPositiveTerm { index: usize },

    #[error("balance ratio requires K > 1, got {0}")]
    BadK(f64),

    #[error("reciprocal product series does not converge (estimated rate {rate})")]
    TailNotConvergent { rate: f64 },

    #[error("horizon {got} is too small (need at least {need})")]
    HorizonTooSmall { got: usize, need: usize },

    #[error("coefficient spec is not periodic")]
    NotPeriodic,

    #[error("verdict is not Stable")]
    NotStable,

    #[error("criterion `{0}` does not certify instability")]
    NotUnstable(String),

    #[error("perturbation r_{index} has modulus {modulus} above budget {epsilon}")]
    BudgetExceeded {
        index: usize,
        modulus: f64,
        epsilon: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed spec document: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
