use thiserror::Error;

use crate::homalg::CheckReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("no primitive {n}th root of unity in F_{p}: {n} does not divide {p} - 1")]
    NoRootExists { p: u64, n: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: crate::FieldSpec, found: crate::FieldSpec },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("exponent {0} is not congruent to 1 modulo the arity parameter")]
    BadExponent(u64),

    #[error("exhaustive mode needs a finite basis")]
    UnsupportedMode,

    #[error("twisting maps are not all equal")]
    UnequalTwists,

    #[error("arity {found} is too small (need at least {min})")]
    ArityTooSmall { found: usize, min: usize },

    #[error("algebra is not multiplicative")]
    NotMultiplicative(Box<CheckReport>),

    #[error("precondition check failed: {}", .0.summary())]
    CheckFailed(Box<CheckReport>),

    #[error("reduction conditions fail at stage {stage}: {}", .report.summary())]
    ConditionsFailed { stage: usize, report: Box<CheckReport> },

    #[error("cancellation matching left {0} term(s) unpaired")]
    MatchingFailed(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
