//! Exact positivity certificates for momentum profiles on `(-1, 1)`.

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::exactmath::{int, sturm_root_count, PoleSum, Poly, Rational, RootIsolation};

/// Sign behaviour of `P = F'`: positive at `-1`, negative at `1`, and the
/// number of distinct roots of its numerator strictly inside `(-1, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeDiagnostic {
    pub positive_at_minus_one: bool,
    pub negative_at_one: bool,
    pub interior_roots: usize,
}

impl SlopeDiagnostic {
    /// Exactly one interior sign change, in the expected direction.
    pub fn single_sign_change(&self) -> bool {
        self.positive_at_minus_one && self.negative_at_one && self.interior_roots == 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityCertificate {
    pub positive: bool,
    /// Multiplicity of `z = -1` as a root of the numerator of `F`.
    pub multiplicity_at_minus_one: u32,
    /// Multiplicity of `z = 1` as a root of the numerator of `F`.
    pub multiplicity_at_one: u32,
    /// Sturm count of the numerator with the endpoint roots divided out.
    pub reduced: RootIsolation,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub value_at_zero: Rational,
    pub slope: Option<SlopeDiagnostic>,
}

fn strip_root(mut p: Poly, root: &Rational) -> (Poly, u32) {
    let factor = Poly::linear(-root.clone(), Rational::one());
    let mut m = 0;
    while !p.is_zero() {
        match p.exact_div(&factor) {
            Some(q) => {
                p = q;
                m += 1;
            }
            None => break,
        }
    }
    (p, m)
}

/// Certifies `F > 0` on `(-1, 1)`.
///
/// `F` is written as `num / den` with `den > 0` on `[-1, 1]`. The endpoint
/// roots of `num` are divided out and the quotient must have no root on the
/// closed interval `[-1, 1]`; together with `F(0) > 0` this fixes the sign.
pub fn certify_positivity(f: &PoleSum) -> PositivityCertificate {
    let (num, _den) = f.to_rational();
    let (reduced, m_plus) = strip_root(num, &int(1));
    let (reduced, m_minus) = strip_root(reduced, &int(-1));
    let value_at_zero = f.eval(&Rational::zero()).expect("z = 0 is never a pole");
    let (lo, hi) = (int(-1), int(1));
    let reduced_iso = if reduced.is_zero() {
        RootIsolation {
            polynomial: reduced,
            interval: (lo, hi),
            root_count: 0,
            root_at_lo: true,
            isolating_intervals: Vec::new(),
        }
    } else {
        sturm_root_count(&reduced, &lo, &hi).expect("nonzero polynomial on a nonempty interval")
    };
    let positive = !reduced_iso.polynomial.is_zero()
        && reduced_iso.closed_count() == 0
        && value_at_zero.is_positive();
    PositivityCertificate {
        positive,
        multiplicity_at_minus_one: m_minus,
        multiplicity_at_one: m_plus,
        reduced: reduced_iso,
        value_at_zero,
        slope: slope_diagnostic(&f.derivative()),
    }
}

/// Sign-change diagnostic for the first derivative of a profile. `None` if
/// the numerator vanishes identically.
pub fn slope_diagnostic(p: &PoleSum) -> Option<SlopeDiagnostic> {
    let (num, _) = p.to_rational();
    if num.is_zero() {
        return None;
    }
    let iso = sturm_root_count(&num, &int(-1), &int(1)).ok()?;
    Some(SlopeDiagnostic {
        positive_at_minus_one: p.eval(&int(-1)).ok()?.is_positive(),
        negative_at_one: p.eval(&int(1)).ok()?.is_negative(),
        interior_roots: iso.open_count(),
    })
}
