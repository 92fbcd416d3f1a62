use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is undefined for the degenerate subordinator (alpha = 1).
    #[error("unsupported for degenerate subordinator: {0}")]
    Degenerate(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error {abs_err:e} after {subdivisions} subdivisions")]
    Quadrature {
        estimate: f64,
        abs_err: f64,
        subdivisions: usize,
    },

    /// The integrand produced a NaN or infinity.
    #[error("non-finite integrand value at {at:e}")]
    NonFinite { at: f64 },

    /// A series or integral that the caller required to converge does not.
    #[error("not convergent: {0}")]
    NotConvergent(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. } | Error::NonFinite { .. } | Error::NotConvergent(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
