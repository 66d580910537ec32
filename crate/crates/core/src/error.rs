use thiserror::Error;

/// Why a vertex sequence is not a tour of the instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TourError {
    #[error("tour has {got} vertices, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("vertex {0} appears more than once")]
    DuplicateVertex(usize),
    #[error("vertex {0} is missing from the tour")]
    MissingVertex(usize),
    #[error("vertex {vertex} is out of range for n = {n}")]
    OutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid tour: {0}")]
    Tour(#[from] TourError),
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("instance has {n} vertices, exceeding the exact-solver limit of {limit}; supply a reference tour instead")]
    SizeExceeded { n: usize, limit: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
