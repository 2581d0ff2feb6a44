use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate multi-index: {0}")]
    DegenerateIndex(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot contract a vector field into a 0-form")]
    ContractDegreeZero,

    #[error("Lagrangian is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("order mismatch: {0}")]
    OrderMismatch(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("polynomial division left a nonzero remainder: {0}")]
    NonDivisible(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
