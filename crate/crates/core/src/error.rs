use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {index} has zero norm")]
    ZeroNorm { index: usize },

    #[error("norm {norm} exceeds the unit ball")]
    OutsideBall { norm: f64 },

    #[error("non-finite coordinate in point {index}")]
    NonFinite { index: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("hash code mismatch: {0}")]
    CodeMismatch(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("solver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
