//! Library error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid root datum: {0}")]
    InvalidDatum(String),

    #[error("root datum is not of finite type: {0}")]
    NotFiniteType(String),

    #[error("datum mismatch: expected `{expected}`, found `{found}`")]
    DatumMismatch { expected: String, found: String },

    #[error("support violation: {0}")]
    SupportViolation(String),

    #[error("invalid input: {0}")]
    Parse(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
