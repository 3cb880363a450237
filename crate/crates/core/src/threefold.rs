//! Admissible solutions on `P(O ⊕ L1 ⊗ L2) → Σ1 × Σ2`.
//!
//! The two unknown constants `(κ1, κ2)` solve a 2×2 linear system; `P = F'`
//! is then an explicit integral and `F = ∫ P` from `z = -1`.

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::cohomology::{
    threefold_alpha_class, threefold_gamma_class, threefold_omega_class, ThreefoldClass,
};
use crate::contraction::Contractions;
use crate::error::{invalid, Error, Result};
use crate::exactmath::{int, PoleSum, Poly, Rational};
use crate::positivity::{certify_positivity, PositivityCertificate};

/// Parameters of a threefold solution.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ThreefoldConfig {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub x1: Rational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub x2: Rational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub s1: Rational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub s2: Rational,
    /// Curvature-form parameters; the constants and the profile do not
    /// depend on them, only the ratios and the gauge class do.
    #[serde(serialize_with = "crate::serde_util::opt_rational")]
    pub a: Option<Rational>,
    #[serde(serialize_with = "crate::serde_util::opt_rational")]
    pub b: Option<Rational>,
    pub k1: i64,
    pub k2: i64,
}

/// Smallest `|k|` with the sign of `x` such that `h = 1 - s k/2` is a
/// nonnegative integer.
pub fn infer_degree(x: &Rational, s: &Rational) -> Result<i64> {
    let half = s / int(2);
    let sign: i64 = if x.is_positive() { 1 } else { -1 };
    let q: i64 = half
        .denom()
        .try_into()
        .map_err(|_| invalid(format!("s = {s} has an oversized denominator")))?;
    // k must be a multiple of q; larger multiples only lower h when p·sign > 0
    let k = sign * q;
    genus_for(s, k).map(|_| k)
}

fn genus_for(s: &Rational, k: i64) -> Result<i64> {
    let h = int(1) - s * int(k) / int(2);
    if !h.is_integer() || h.is_negative() {
        return Err(invalid(format!(
            "s = {s} is not 2(1-h)/k for k = {k} and an integer genus h >= 0"
        )));
    }
    i64::try_from(h.to_integer()).map_err(|_| invalid("genus out of range"))
}

impl ThreefoldConfig {
    /// Builds a configuration, inferring the degrees `k1`, `k2`.
    pub fn new(
        x1: Rational,
        x2: Rational,
        s1: Rational,
        s2: Rational,
        a: Option<Rational>,
        b: Option<Rational>,
    ) -> Result<Self> {
        check_x(&x1)?;
        check_x(&x2)?;
        let k1 = infer_degree(&x1, &s1)?;
        let k2 = infer_degree(&x2, &s2)?;
        Self::with_degrees(x1, x2, s1, s2, a, b, k1, k2)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_degrees(
        x1: Rational,
        x2: Rational,
        s1: Rational,
        s2: Rational,
        a: Option<Rational>,
        b: Option<Rational>,
        k1: i64,
        k2: i64,
    ) -> Result<Self> {
        let cfg = ThreefoldConfig { x1, x2, s1, s2, a, b, k1, k2 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_x(&self.x1)?;
        check_x(&self.x2)?;
        if self.x1 == self.x2 {
            return Err(invalid("x1 and x2 must differ"));
        }
        for (x, s, k) in [(&self.x1, &self.s1, self.k1), (&self.x2, &self.s2, self.k2)] {
            if s * x >= int(2) {
                return Err(invalid(format!("need s x < 2, got s = {s}, x = {x}")));
            }
            if k == 0 || (k > 0) != x.is_positive() {
                return Err(invalid(format!("degree {k} must be nonzero with the sign of x = {x}")));
            }
            genus_for(s, k)?;
        }
        match (&self.a, &self.b) {
            (None, None) => {}
            (Some(_), Some(b)) if !b.is_zero() => {}
            (Some(_), Some(_)) => return Err(invalid("b must be nonzero")),
            _ => return Err(invalid("a and b must be given together")),
        }
        Ok(())
    }

    pub fn genera(&self) -> (i64, i64) {
        (
            genus_for(&self.s1, self.k1).expect("validated"),
            genus_for(&self.s2, self.k2).expect("validated"),
        )
    }

    pub fn curvature(&self) -> Option<(&Rational, &Rational)> {
        self.a.as_ref().zip(self.b.as_ref())
    }
}

fn check_x(x: &Rational) -> Result<()> {
    if x.is_zero() || x.abs() >= Rational::one() {
        return Err(invalid(format!("need 0 < |x| < 1, got {x}")));
    }
    Ok(())
}

/// The linear system `A (κ1, κ2)ᵀ = rhs` coming from `P(1) = -2(1+x1)(1+x2)`
/// and `∫ P = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaSystem {
    pub matrix: [[Rational; 2]; 2],
    pub rhs: [Rational; 2],
}

pub fn kappa_system(x1: &Rational, x2: &Rational, s1: &Rational, s2: &Rational) -> KappaSystem {
    let one = Rational::one();
    let third = Rational::new(1.into(), 3.into());
    let p = x1 * x2;
    let sum = x1 + x2;
    let d = num::pow(&one - x1 * x1, 2) * num::pow(&one - x2 * x2, 2);
    let (x1sq, x2sq) = (x1 * x1, x2 * x2);
    let base = &p * &p * &p + int(2) * &p * &p - &x1sq - &p - &x2sq;
    let extra = &sum * (int(2) * &p * &p - &x1sq - &x2sq);
    let a11 = &one + &p * &third;
    let a21 = &a11 - &sum * &third;
    let a12 = &base / &d;
    let a22 = (&base + &extra) / &d;
    let sx = s1 * x1 + s2 * x2;
    let r1 = int(-2) * (&one + &p) - int(2) * &sx;
    let r2 = int(-2) * (&one + &p - &sum) - int(2) * &sx
        + Rational::new(2.into(), 3.into()) * (s1 + s2) * &p;
    KappaSystem {
        matrix: [[a11, a12], [a21, a22]],
        rhs: [r1, r2],
    }
}

/// Classification of the κ-system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KappaSolution {
    Unique {
        #[serde(serialize_with = "crate::serde_util::rational")]
        kappa1: Rational,
        #[serde(serialize_with = "crate::serde_util::rational")]
        kappa2: Rational,
    },
    Inconsistent,
    /// `κ1 = intercept + slope·κ2`, with `κ2` free.
    OneParameterFamily {
        #[serde(serialize_with = "crate::serde_util::rational")]
        intercept: Rational,
        #[serde(serialize_with = "crate::serde_util::rational")]
        slope: Rational,
    },
}

impl KappaSolution {
    /// `κ1` for a member of the family.
    pub fn family_kappa1(&self, kappa2: &Rational) -> Option<Rational> {
        match self {
            KappaSolution::OneParameterFamily { intercept, slope } => Some(intercept + slope * kappa2),
            _ => None,
        }
    }
}

impl KappaSystem {
    pub fn determinant(&self) -> Rational {
        let [[a11, a12], [a21, a22]] = &self.matrix;
        a11 * a22 - a12 * a21
    }

    pub fn rank(&self) -> usize {
        if !self.determinant().is_zero() {
            2
        } else if self.matrix.iter().flatten().all(Zero::is_zero) {
            0
        } else {
            1
        }
    }

    pub fn augmented_rank(&self) -> usize {
        let [[a11, a12], [a21, a22]] = &self.matrix;
        let [r1, r2] = &self.rhs;
        let minors = [a11 * a22 - a12 * a21, a11 * r2 - a21 * r1, a12 * r2 - a22 * r1];
        if minors.iter().any(|m| !m.is_zero()) {
            2
        } else if self.matrix.iter().flatten().chain(self.rhs.iter()).all(Zero::is_zero) {
            0
        } else {
            1
        }
    }

    pub fn solve(&self) -> KappaSolution {
        let [[a11, a12], [a21, a22]] = &self.matrix;
        let [r1, r2] = &self.rhs;
        let det = self.determinant();
        if !det.is_zero() {
            return KappaSolution::Unique {
                kappa1: (r1 * a22 - a12 * r2) / &det,
                kappa2: (a11 * r2 - a21 * r1) / &det,
            };
        }
        if self.augmented_rank() > self.rank() {
            return KappaSolution::Inconsistent;
        }
        // a11 = 1 + x1x2/3 > 0 whenever |x1 x2| < 1, so row one pins κ1.
        let (pivot, off, r) = if !a11.is_zero() { (a11, a12, r1) } else { (a21, a22, r2) };
        KappaSolution::OneParameterFamily {
            intercept: r / pivot,
            slope: -(off / pivot),
        }
    }
}

/// Solves the κ-system exactly, classifying rank degeneracies.
pub fn solve_kappa_system(x1: &Rational, x2: &Rational, s1: &Rational, s2: &Rational) -> Result<KappaSolution> {
    check_x(x1)?;
    check_x(x2)?;
    Ok(kappa_system(x1, x2, s1, s2).solve())
}

/// `-4x1² - x1x2 - x1³x2 - 4x2² + 8x1²x2² - x1x2³ + 3x1³x2³`.
pub fn kappa2_denominator_poly(x1: &Rational, x2: &Rational) -> Rational {
    let p = x1 * x2;
    let (x1sq, x2sq) = (x1 * x1, x2 * x2);
    int(-4) * &x1sq - &p - &x1sq * &p - int(4) * &x2sq + int(8) * &p * &p - &p * &x2sq
        + int(3) * &p * &p * &p
}

/// Closed form of `κ2` for `x1 ≠ -x2`.
pub fn kappa2_closed_form(x1: &Rational, x2: &Rational, s1: &Rational, s2: &Rational) -> Result<Rational> {
    check_x(x1)?;
    check_x(x2)?;
    let one = Rational::one();
    let sum = x1 + x2;
    let den = int(3) * &sum * kappa2_denominator_poly(x1, x2);
    if den.is_zero() {
        return Err(Error::DegenerateDenominator(format!("x1 = {x1}, x2 = {x2}")));
    }
    let (x1sq, x2sq) = (x1 * x1, x2 * x2);
    let num = int(2)
        * num::pow(&one - &x1sq, 2)
        * num::pow(&one - &x2sq, 2)
        * (int(6) * &sum - int(3) * (s1 * &x1sq + s2 * &x2sq) + (s1 + s2) * &x1sq * &x2sq);
    Ok(num / den)
}

/// `(κ1, κ2)` along `x1 = 1/2, s1 = 2, s2 = -2`, as functions of `x = x2`.
pub fn half_line_kappas(x: &Rational) -> Result<(Rational, Rational)> {
    if !(x < &int(0) && x > &int(-1)) || x == &Rational::new((-1).into(), 2.into()) {
        return Err(invalid(format!("need -1 < x < 0 and x != -1/2, got {x}")));
    }
    let one = Rational::one();
    let den = int(8) + int(5) * x + int(16) * x * x + x * x * x;
    let k1 = int(6) * (x - int(2)) * (int(3) + int(2) * x + int(7) * x * x) / &den;
    let k2 = int(-9) * num::pow(&one - x, 2) * num::pow(&one + x, 2) * (&one + int(2) * x) / &den;
    Ok((k1, k2))
}

/// `F'' = 2s1x1(1+x2z) + 2s2x2(1+x1z) + κ1(1+x1z)(1+x2z) - κ2(x1³u1⁻³ - x2³u2⁻³)/(x1-x2)`.
pub fn threefold_ode_rhs(cfg: &ThreefoldConfig, kappa1: &Rational, kappa2: &Rational) -> Result<PoleSum> {
    let (x1, x2) = (&cfg.x1, &cfg.x2);
    let u1 = PoleSum::linear_factor(x1);
    let u2 = PoleSum::linear_factor(x2);
    let poly = &(&u2.scale(&(int(2) * &cfg.s1 * x1)) + &u1.scale(&(int(2) * &cfg.s2 * x2)))
        + &(&u1 * &u2).scale(kappa1);
    let c = -(kappa2 / (x1 - x2));
    let poles = &PoleSum::pole(x1.clone(), 3, &c * num::pow(x1.clone(), 3))?
        - &PoleSum::pole(x2.clone(), 3, &c * num::pow(x2.clone(), 3))?;
    Ok(&PoleSum::from_poly(poly) + &poles)
}

/// `P(t) = ∫₋₁ᵗ F'' + 2(1-x1)(1-x2)` without checking the endpoint at `+1`.
pub fn build_p_unchecked(cfg: &ThreefoldConfig, kappa1: &Rational, kappa2: &Rational) -> Result<PoleSum> {
    let one = Rational::one();
    let base = int(2) * (&one - &cfg.x1) * (&one - &cfg.x2);
    let rhs = threefold_ode_rhs(cfg, kappa1, kappa2)?;
    Ok(&rhs.antiderivative(&int(-1))? + &PoleSum::constant(base))
}

/// `P(t)` with both endpoint identities checked exactly.
pub fn build_p(cfg: &ThreefoldConfig, kappa1: &Rational, kappa2: &Rational) -> Result<PoleSum> {
    let p = build_p_unchecked(cfg, kappa1, kappa2)?;
    check_endpoints(cfg, &p)?;
    Ok(p)
}

fn check_endpoints(cfg: &ThreefoldConfig, p: &PoleSum) -> Result<()> {
    let one = Rational::one();
    let at_one = p.eval(&one)?;
    let expected = int(-2) * (&one + &cfg.x1) * (&one + &cfg.x2);
    if at_one != expected {
        return Err(Error::EndpointMismatch(format!("P(1) = {at_one}, expected {expected}")));
    }
    let integral = p.antiderivative(&int(-1))?.eval(&one)?;
    if !integral.is_zero() {
        return Err(Error::EndpointMismatch(format!("integral of P over [-1, 1] is {integral}")));
    }
    Ok(())
}

/// `F(z) = ∫₋₁ᶻ P`.
pub fn build_f_threefold(p: &PoleSum) -> Result<PoleSum> {
    Ok(p.antiderivative(&int(-1))?)
}

/// `Scal = 2s1x1/u1 + 2s2x2/u2 - F''/(u1 u2)`.
pub fn threefold_scalar_curvature(cfg: &ThreefoldConfig, f: &PoleSum) -> Result<PoleSum> {
    let (x1, x2) = (&cfg.x1, &cfg.x2);
    let base = &PoleSum::constant(int(2) * &cfg.s1 * x1).divide_linear(x1)?
        + &PoleSum::constant(int(2) * &cfg.s2 * x2).divide_linear(x2)?;
    let curv = f.derivative().derivative().divide_linear(x1)?.divide_linear(x2)?;
    Ok(&base - &curv)
}

/// `x1²u2² + x2²u1² + (x1u2 + x2u1)²`.
pub fn contraction_bracket(x1: &Rational, x2: &Rational) -> Poly {
    let u1 = PoleSum::linear_factor(x1);
    let u2 = PoleSum::linear_factor(x2);
    let t1 = u2.scale(x1);
    let t2 = u1.scale(x2);
    let mixed = &t1 + &t2;
    &(&(&t1 * &t1) + &(&t2 * &t2)) + &(&mixed * &mixed)
}

fn over_u4u4(p: Poly, x1: &Rational, x2: &Rational) -> Result<PoleSum> {
    let mut f = PoleSum::from_poly(p);
    for _ in 0..4 {
        f = f.divide_linear(x1)?.divide_linear(x2)?;
    }
    Ok(f)
}

/// `Λγ = 3a`, `Λ²(γ∧γ) = 12a² - 2b²·bracket/(u1⁴u2⁴)`.
pub fn threefold_contractions(x1: &Rational, x2: &Rational, a: &Rational, b: &Rational) -> Result<Contractions> {
    let bracket = contraction_bracket(x1, x2).scale(&(int(-2) * b * b));
    Ok(Contractions {
        lambda_gamma: int(3) * a,
        lambda2_gamma_wedge: &PoleSum::constant(int(12) * a * a) + &over_u4u4(bracket, x1, x2)?,
    })
}

/// `(α1/α0, α2/α0)` recovered from `(κ1, κ2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreefoldRatios {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub alpha1_over_alpha0: Rational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub alpha2_over_alpha0: Rational,
}

pub fn threefold_ratios(kappa1: &Rational, kappa2: &Rational, a: &Rational, b: &Rational) -> Result<ThreefoldRatios> {
    if b.is_zero() {
        return Err(invalid("b must be nonzero"));
    }
    let r1 = kappa2 / (int(4) * b * b);
    let r2 = int(12) * a * a * &r1 - kappa1;
    Ok(ThreefoldRatios {
        alpha1_over_alpha0: r1,
        alpha2_over_alpha0: r2,
    })
}

/// `p · den` as a polynomial, or `None` if `den` does not clear the poles of `p`.
pub fn clear_denominator(p: &PoleSum, den: &Poly) -> Option<Poly> {
    let (num, d) = p.to_rational();
    (&num * den).exact_div(&d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaBranch {
    Unique,
    Family,
    /// Constants supplied directly, not taken from the system.
    Candidate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreefoldSolution {
    pub config: ThreefoldConfig,
    pub branch: KappaBranch,
    pub kappa1: Rational,
    pub kappa2: Rational,
    pub p: PoleSum,
    pub f: PoleSum,
    /// Present when `(a, b)` is given.
    pub ratios: Option<ThreefoldRatios>,
    /// `3a`, when `a` is given.
    pub trace_constant: Option<Rational>,
    pub scal: PoleSum,
    pub omega_class: ThreefoldClass,
    pub alpha_class: ThreefoldClass,
    pub gamma_class: Option<ThreefoldClass>,
    pub positivity_certificate: PositivityCertificate,
    pub positivity_holds: bool,
}

/// Builds the solution determined by the κ-system. On the family branch
/// `kappa2` selects the member and is required; elsewhere it must be `None`.
pub fn build_threefold_solution(cfg: &ThreefoldConfig, kappa2: Option<&Rational>) -> Result<ThreefoldSolution> {
    cfg.validate()?;
    let system = solve_kappa_system(&cfg.x1, &cfg.x2, &cfg.s1, &cfg.s2)?;
    let (k1, k2, branch) = match (&system, kappa2) {
        (KappaSolution::Unique { kappa1, kappa2 }, None) => (kappa1.clone(), kappa2.clone(), KappaBranch::Unique),
        (KappaSolution::Unique { .. }, Some(_)) => {
            return Err(invalid("kappa2 is determined by the system and cannot be chosen"))
        }
        (KappaSolution::OneParameterFamily { .. }, Some(k2)) => {
            (system.family_kappa1(k2).expect("family"), k2.clone(), KappaBranch::Family)
        }
        (KappaSolution::OneParameterFamily { intercept, slope }, None) => {
            return Err(invalid(format!(
                "one-parameter family kappa1 = {intercept} + ({slope}) kappa2; choose kappa2"
            )))
        }
        (KappaSolution::Inconsistent, _) => {
            return Err(Error::InconsistentSystem(format!(
                "x1 = {}, x2 = {}, s1 = {}, s2 = {}",
                cfg.x1, cfg.x2, cfg.s1, cfg.s2
            )))
        }
    };
    let p = build_p(cfg, &k1, &k2)?;
    assemble(cfg, branch, k1, k2, p)
}

/// Builds P, F and derived data for arbitrary constants without requiring
/// the endpoint identities. Used for failed candidates and mutation tests.
pub fn build_threefold_candidate(cfg: &ThreefoldConfig, kappa1: &Rational, kappa2: &Rational) -> Result<ThreefoldSolution> {
    cfg.validate()?;
    let p = build_p_unchecked(cfg, kappa1, kappa2)?;
    assemble(cfg, KappaBranch::Candidate, kappa1.clone(), kappa2.clone(), p)
}

fn assemble(cfg: &ThreefoldConfig, branch: KappaBranch, kappa1: Rational, kappa2: Rational, p: PoleSum) -> Result<ThreefoldSolution> {
    let f = build_f_threefold(&p)?;
    let certificate = certify_positivity(&f);
    let scal = threefold_scalar_curvature(cfg, &f)?;
    let (ratios, trace_constant, gamma_class) = match cfg.curvature() {
        Some((a, b)) => (
            Some(threefold_ratios(&kappa1, &kappa2, a, b)?),
            Some(int(3) * a),
            Some(threefold_gamma_class(&cfg.x1, &cfg.x2, a, b, cfg.k1, cfg.k2)?),
        ),
        None => (None, None, None),
    };
    Ok(ThreefoldSolution {
        omega_class: threefold_omega_class(&cfg.x1, &cfg.x2, cfg.k1, cfg.k2)?,
        alpha_class: threefold_alpha_class(&cfg.x1, &cfg.x2, cfg.k1, cfg.k2)?,
        config: cfg.clone(),
        branch,
        kappa1,
        kappa2,
        p,
        f,
        ratios,
        trace_constant,
        scal,
        gamma_class,
        positivity_holds: certificate.positive,
        positivity_certificate: certificate,
    })
}
