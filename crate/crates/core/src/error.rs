use thiserror::Error;

/// Errors raised by constructors and operations of the kit.
///
/// Identity violations (a failing Jacobi identity, a nonzero square) are not
/// errors; they are reported as residuals. Errors mean the input itself is
/// malformed or the request cannot be served within the configured caps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("block sizes must be positive, got {0:?}")]
    InvalidBlocks(Vec<i64>),

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("degree mismatch: {0}")]
    Degree(String),

    #[error("element is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("weight cap mismatch: {0} vs {1}")]
    CapMismatch(usize, usize),

    #[error("weight {weight} exceeds the cap {cap}")]
    WeightOverflow { weight: usize, cap: usize },

    #[error("arity {arity} exceeds the cap {cap}")]
    ArityOverflow { arity: usize, cap: usize },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("map is not unipotent: {0}")]
    NotUnipotent(String),

    #[error("base differential mismatch: {0}")]
    BaseMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("division by zero")]
    DivisionByZero,
}

pub type Result<T> = std::result::Result<T, Error>;
