//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by validation, contracts, and lookups in the core crate.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// Input matrix failed a structural validation check.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Operands have incompatible dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A caller broke an API contract (wrong source kind, misaligned lists, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A label was not found where one was required.
    #[error("lookup failed: {0}")]
    Lookup(String),

    /// Device constraints are unsatisfiable as stated.
    #[error("infeasible constraints: {0}")]
    Infeasible(String),

    /// A numeric computation produced a non-finite value.
    #[error("numeric abort: {0}")]
    NumericAbort(String),
}

/// Convenience alias.
pub type Result<T> = std::result::Result<T, CoreError>;
