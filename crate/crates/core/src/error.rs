use thiserror::Error;

/// Errors raised by the transform, operator, and filter routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OlctError {
    #[error("parameters are not unimodular: ad - bc = {det}")]
    UnimodularityViolation { det: f64 },

    #[error("degenerate parameter case: {0}")]
    DegenerateCase(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid grid: {0}")]
    GridInvalid(String),

    #[error("filter edge out of range: {0}")]
    EdgeOutOfRange(String),

    #[error("invalid filter specification: {0}")]
    InvalidFilter(String),

    #[error("operator norms left the floating-point range after {completed} iterations")]
    NumericalOverflow { completed: usize },

    #[error("operator norms underflowed after {completed} iterations")]
    NumericalUnderflow { completed: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

pub type Result<T> = std::result::Result<T, OlctError>;
