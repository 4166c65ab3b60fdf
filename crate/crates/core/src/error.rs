//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CsfError>;

#[derive(Debug, Error)]
pub enum CsfError {
    /// A physical or geometric precondition was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A level set value too close to +/-1 cannot be mapped back to a
    /// signed distance.
    #[error("level set value {0} is saturated; |phi| must stay below 1")]
    SaturatedLevelSet(f64),

    /// The iterative linear solver did not reach its residual target.
    #[error("linear solver stalled: relative residual {residual:.3e} after {iterations} iterations")]
    LinearSolve { residual: f64, iterations: usize },

    /// Fixed-point iteration on temperature-dependent sources stalled.
    #[error("picard iteration stalled: max temperature change {change:.3e} K after {iterations} iterations")]
    PicardStalled { change: f64, iterations: usize },

    /// A NaN or infinity showed up where only finite values are allowed.
    #[error("non-finite {what} in {context}")]
    NonFinite {
        what: &'static str,
        context: &'static str,
    },

    /// The solution left the physically meaningful range during a solve.
    #[error("solution left the physical range: {0}")]
    Unphysical(String),

    #[error("reference cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CsfError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CsfError::InvalidInput(msg.into())
    }

    /// True for errors that indicate a failed solve rather than bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            CsfError::LinearSolve { .. }
                | CsfError::PicardStalled { .. }
                | CsfError::NonFinite { .. }
                | CsfError::Unphysical(_)
        )
    }
}
