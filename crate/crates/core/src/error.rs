use thiserror::Error;

/// Errors raised by the algebra toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input data does not fit the expected shape (lengths, fields, syntax).
    #[error("malformed input: {0}")]
    Malformed(String),
    /// A degree precondition failed.
    #[error("degree error: {0}")]
    Degree(String),
    /// The generators do not form a valid presentation.
    #[error("presentation error: {0}")]
    Presentation(String),
    /// Operation is not available for this algebra or backend.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Subspaces or vectors live in different ambient spaces.
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    /// Field specification is invalid for the requested instance.
    #[error("invalid field: {0}")]
    Field(String),
}

pub type Result<T> = std::result::Result<T, Error>;
