use thiserror::Error;

/// Errors raised by semiring arithmetic and weight literals.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("carrier mismatch: expected a {expected} value, got {found}")]
    CarrierMismatch { expected: &'static str, found: &'static str },
    #[error("`{literal}` is not in the carrier of {semiring}")]
    BadLiteral { semiring: &'static str, literal: String },
    #[error("unknown semiring `{0}`")]
    UnknownSemiring(String),
}

/// A lexical or syntactic error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum WnkError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("topology error at {path}: {message}")]
    Topology { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl WnkError {
    /// Process exit code used by the `wnk` binary for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            WnkError::Resource(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = WnkError> = std::result::Result<T, E>;
