use thiserror::Error;

/// Errors raised by every computation in the crate.
///
/// The CLI maps [`Error::Parameter`], [`Error::Domain`] and [`Error::Resource`]
/// to exit code 2 and the numerical variants to exit code 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit: {what} exceeds cap {cap}")]
    Resource { what: String, cap: usize },

    #[error("pole of the gamma function at {0}")]
    Pole(String),

    #[error("unvalidated domain: {0}")]
    UnvalidatedDomain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl Error {
    /// Whether the error stems from bad input rather than from the numerics.
    pub fn is_parameter_class(&self) -> bool {
        matches!(
            self,
            Error::Parameter(_) | Error::Domain(_) | Error::Resource { .. } | Error::Pole(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("theta must be positive, got {theta}")))
    }
}
