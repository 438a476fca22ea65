//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A Hilbert-space dimension is zero or otherwise unusable.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// Operator/state or state/state dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An operation required a normalized state.
    #[error("state is not normalized: |norm^2 - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    /// A parameter lies outside its allowed range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The truncated basis is too small for the requested operation.
    #[error(
        "truncated basis too small: top-level occupation {leakage:.3e} exceeds {tolerance:.3e}; \
         a dimension of at least {required_dim} is needed"
    )]
    Truncation {
        leakage: f64,
        tolerance: f64,
        required_dim: usize,
    },

    /// Conditioning on a detector click has (numerically) zero probability.
    #[error(
        "heralding impossible: outcome probability {probability:.3e} is below {threshold:.3e}"
    )]
    HeraldingImpossible { probability: f64, threshold: f64 },

    /// A linear system or protocol step has no solution for the given inputs.
    #[error("no solution: {0}")]
    Unsolvable(String),

    /// An iterative solver failed to converge.
    #[error("solver did not converge after {iterations} iterations (last delta {last_delta:.3e})")]
    NonConvergence { iterations: usize, last_delta: f64 },

    /// A self-check on a computed quantity failed (e.g. imaginary residue).
    #[error("numerical integrity: {0}")]
    NumericalIntegrity(String),
}

impl Error {
    /// Process exit code used by the command-line front end:
    /// 2 for validation errors, 3 for numerical errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidDimension(_)
            | Error::DimensionMismatch(_)
            | Error::NotNormalized { .. }
            | Error::InvalidParameter(_)
            | Error::Unsolvable(_) => 2,
            Error::Truncation { .. }
            | Error::HeraldingImpossible { .. }
            | Error::NonConvergence { .. }
            | Error::NumericalIntegrity(_) => 3,
        }
    }
}
