use thiserror::Error;

/// Errors raised by the algebra kernels.
///
/// Several variants are internal tripwires: two independently computed
/// quantities that must agree did not. They indicate a bug, never bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different rings")]
    AmbientMismatch,

    #[error("polynomial `{0}` is not homogeneous")]
    NotHomogeneous(String),

    #[error("the ideal is the unit ideal")]
    UnitIdeal,

    #[error("characteristic {0} is not supported")]
    UnsupportedCharacteristic(u32),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("characteristic {p} is too small for homological bound {bound}")]
    CharacteristicTooSmall { p: u32, bound: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("map does not respect the relations of its source: {0}")]
    IllFormedMap(String),

    #[error("induced map of theta disagrees with -ad(z): {0}")]
    MismatchWithBracket(String),

    #[error("Ext dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("conormal routes disagree: {0}")]
    RouteDisagreement(String),

    #[error("complete intersection criteria disagree: {0}")]
    CriteriaDisagree(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
