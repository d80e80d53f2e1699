use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("inputs do not commute")]
    NotCommuting,
    #[error("lambda must be nonzero; use commuting constructors")]
    ZeroLambda,
    #[error("scalar commutator requires a nonzero lambda on both pairs")]
    RequiresNonzeroLambda,
    #[error("size guard: {0}")]
    Guard(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pair invariant violated: {0}")]
    Invariant(String),
    #[error("resampling budget exhausted: {0}")]
    Exhausted(String),
    /// A claimed structural property failed on an exactly verified example.
    #[error("falsification event: {0}")]
    Falsification(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
