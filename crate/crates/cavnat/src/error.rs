use thiserror::Error;

#[derive(Debug, Error)]
pub enum CavnatError {
    /// Malformed input document (JSON syntax).
    #[error("parse error: {0}")]
    Parse(String),
    /// Structurally valid input violating a schema rule; names the offending field.
    #[error("invalid specification: {0}")]
    Validation(String),
    /// Numerical solver failure (singular system, step underflow, non-ergodic network).
    #[error("solver error: {0}")]
    Solver(String),
    /// Basis dimension above the configured guard.
    #[error("dimension guard: d^2 = {actual} exceeds limit {limit}")]
    DimensionGuard { actual: usize, limit: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CavnatError>;
