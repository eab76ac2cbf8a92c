use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Reasons a field file could not be decoded.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("not a field file")]
    BadMagic,
    #[error("unsupported field file version {0}")]
    UnsupportedVersion(u32),
    #[error("invalid field header: {0}")]
    BadHeader(String),
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("trailing bytes after payload")]
    TrailingBytes,
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("operation requires d = 2, got d = {0}")]
    UnsupportedDimension(usize),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// A requested shape does not fit on the torus.
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("root bracketing failed: {0}")]
    Bracket(String),
    #[error("constraint projection failed after {iterations} Newton iterations (residual {residual:e})")]
    ProjectionFailed { iterations: usize, residual: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
