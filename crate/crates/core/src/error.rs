use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("ill-formed: {0}")]
    IllFormed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("mono violation: {0}")]
    MonoViolation(String),
    #[error("shape is not filtered: {0}")]
    NotFiltered(String),
    #[error("ill-formed zig-zag: {0}")]
    IllFormedZigZag(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
