//! Error types shared across the library.

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// Adaptive quadrature failed to reach the requested tolerance. The
    /// partial value and its error estimate are carried for diagnostics.
    #[error("quadrature did not converge in {op}: value ~ {partial_value:e}, est. error {error_estimate:e} after {evaluations} evaluations")]
    QuadratureNonConvergence {
        op: &'static str,
        partial_value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// A matrix passed to the symmetric eigensolver was not symmetric.
    #[error("matrix is not symmetric: max asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    Asymmetry { asymmetry: f64, tolerance: f64 },

    /// The root bracket could not be grown until all eigenvalue branches
    /// turned positive.
    #[error("bracket growth failed in {op}: {msg}")]
    BracketGrowthFailure { op: &'static str, msg: String },

    /// Sorted eigenvalue branches failed to be monotone along a grid.
    #[error("monotonicity violation on branch {branch} between grid points {index} and {}: {delta:e} < -{tolerance:e}", index + 1)]
    MonotonicityViolation {
        branch: usize,
        index: usize,
        delta: f64,
        tolerance: f64,
    },

    /// An internal consistency check failed (two routes disagree, a
    /// positivity requirement broke, ...). Always a bug, never bad input.
    #[error("internal error in {op}: {msg}")]
    Internal { op: &'static str, msg: String },

    /// The configuration failed validation.
    #[error("invalid configuration: {0:?}")]
    InvalidConfiguration(Vec<crate::geometry::Violation>),
}

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub fn internal(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Internal { op, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
