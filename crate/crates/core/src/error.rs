use thiserror::Error;

/// Errors raised across the workbench.
///
/// Validation and domain errors describe bad inputs; `Invariant` is reserved
/// for results that violate a proven bound and therefore indicate a bug.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("matrix is not Hermitian: max asymmetry {max_asymmetry:e} exceeds {tolerance:e}")]
    NotHermitian { max_asymmetry: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not doubly stochastic: worst {axis} {index} sums to {sum} (tolerance {tolerance:e})")]
    NotDoublyStochastic {
        axis: &'static str,
        index: usize,
        sum: f64,
        tolerance: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// D(rho||sigma) = +inf: rho has weight outside the support of sigma.
    #[error("relative entropy is +inf: weight {weight:e} of rho lies outside the support of sigma")]
    InfiniteRelativeEntropy { weight: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for errors that signal a violated mathematical guarantee.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
