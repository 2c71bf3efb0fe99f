use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A guarded denominator fell below the singularity threshold.
    #[error(
        "singular argument: {what} (|denominator| = {magnitude:e}, threshold = {threshold:e})"
    )]
    SingularArgument {
        what: &'static str,
        magnitude: f64,
        threshold: f64,
    },

    #[error("index {index} out of range 0..={max}")]
    IndexError { index: usize, max: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("size {size} exceeds the limit {limit} for {what}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("domain error: {0}")]
    DomainError(&'static str),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
