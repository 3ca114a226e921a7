use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on the inputs was violated; the message names it.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{what} did not converge within {limit} terms")]
    NonConvergence { what: &'static str, limit: usize },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("certificate overflow: {0}")]
    CertificateOverflow(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("growth budget violated: {0}")]
    GrowthViolation(String),

    #[error("extrapolation diverged: {0}")]
    ExtrapolationDivergence(String),

    #[error("singular time t = {0}")]
    SingularTime(f64),

    #[error("grid margin violated: {0}")]
    MarginViolation(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by bad inputs rather than by a numerical breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Invalid(_)
                | Error::Domain(_)
                | Error::MarginViolation(_)
                | Error::SingularTime(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
