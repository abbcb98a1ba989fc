use thiserror::Error;

/// Errors reported by this crate.
///
/// The variants map onto the CLI exit codes: `InvalidInput` and `Domain`
/// are validation errors (exit 1), `Decode` and `VerifyFailed` are
/// decode/verify failures (exit 2), and `Resource` / `Numeric` indicate
/// that a configured budget was exhausted (exit 3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("decode failure: {0}")]
    Decode(String),

    #[error("verification failed: {0}")]
    VerifyFailed(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
