//! Exact rational arithmetic, univariate polynomials over the rationals, the
//! [`PoleSum`] function class and Sturm-sequence root isolation.
//!
//! Nothing in this module touches floating point. Every quantity is an exact
//! [`Rational`], and equality of functions is equality of canonical forms.

mod polesum;
mod poly;
mod sturm;

pub use polesum::{PoleSum, PoleTerm};
pub use poly::Poly;
pub use sturm::{sturm_root_count, RootIsolation, SturmChain};

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("antiderivative of (1 + {x}*z)^-1 requires a logarithm")]
    LogarithmRequired { x: Rational },
    #[error("the zero polynomial has no Sturm chain")]
    ZeroPolynomial,
    #[error("pole parameter {0} must satisfy 0 < |x| < 1")]
    InvalidPole(Rational),
    #[error("evaluation at z = {0} hits a pole")]
    EvaluationAtPole(Rational),
    #[error("empty interval ({}, {}]", .0.0, .0.1)]
    EmptyInterval(Box<(Rational, Rational)>),
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
}

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"-p/q"` or a plain integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let err = || ExactError::Parse(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// `"p/q"` or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub(crate) fn check_pole_parameter(x: &Rational) -> Result<(), ExactError> {
    if x.is_zero() || x.abs() >= Rational::one() {
        Err(ExactError::InvalidPole(x.clone()))
    } else {
        Ok(())
    }
}

/// Binary64 approximation of an exact rational. Only used by callers that
/// leave the exact world on purpose (quadrature, CSV output).
pub fn to_f64(q: &Rational) -> f64 {
    use num::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}
