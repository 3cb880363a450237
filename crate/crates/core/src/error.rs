use thiserror::Error;

use crate::exactmath::ExactError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("momentum profile failed the positivity certificate: {0}")]
    PositivityFailure(String),
    #[error("the constant system is inconsistent: {0}")]
    InconsistentSystem(String),
    #[error("endpoint identities fail: {0}")]
    EndpointMismatch(String),
    #[error("closed form undefined: denominator vanishes ({0})")]
    DegenerateDenominator(String),
    #[error("quadrature did not converge: estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
