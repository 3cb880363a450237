//! Calabi–Yang–Mills functional: exact minimality coefficients and numerical
//! evaluation on admissible perturbations of the momentum profile.
//!
//! All CYM values are reported up to one fixed positive constant (base areas
//! and factors of 2π), which cancels in every comparison made here.

pub mod quadrature;

use num::{Signed, Zero};
use serde::Serialize;

use crate::contraction::Contractions;
use crate::error::{invalid, Result};
use crate::exactmath::{format_rational, int, rat, to_f64, PoleSum, Poly, Rational};
use crate::positivity::certify_positivity;
use crate::surface::{surface_contractions, surface_scalar_curvature, SurfaceSolution};
use crate::threefold::{threefold_contractions, threefold_scalar_curvature, ThreefoldSolution};
use quadrature::{adaptive, GaussLegendre};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const MAX_DEPTH: u32 = 20;
pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Surface,
    Threefold,
}

/// Exact minimality coefficient `1 - 4 (α2/α0)(α1/α0) + 8 (α1/α0)² z²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CymCoefficient {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub value: Rational,
    pub family: Family,
    /// Parameter name and value, in a fixed order.
    pub parameters: Vec<(String, String)>,
}

impl CymCoefficient {
    pub fn is_positive(&self) -> bool {
        self.value.is_positive()
    }
}

/// `1 - 4 r2 r1 + 8 r1² z²` for `r1 = α1/α0`, `r2 = α2/α0`, trace constant `z`.
pub fn coefficient_from_ratios(r1: &Rational, r2: &Rational, z: &Rational) -> Rational {
    int(1) - int(4) * r2 * r1 + int(8) * r1 * r1 * z * z
}

pub fn surface_cym_coefficient(sol: &SurfaceSolution) -> CymCoefficient {
    let r = &sol.ratios;
    let p = &sol.params;
    CymCoefficient {
        value: coefficient_from_ratios(&r.alpha1_over_alpha0, &r.alpha2_over_alpha0, &sol.trace_constant),
        family: Family::Surface,
        parameters: vec![
            ("k".into(), p.k.to_string()),
            ("kprime".into(), p.kprime.to_string()),
            ("genus".into(), p.genus.to_string()),
            ("a".into(), format_rational(&p.a)),
            ("b".into(), format_rational(&p.b)),
        ],
    }
}

/// Limit of the surface coefficient as `k' → ∞` with `k = 1`, `h = 0`:
/// `1 + 3/k2² + a²/k2⁴`.
pub fn surface_coefficient_limit(a: &Rational, k2: i64) -> Rational {
    let k2 = int(k2);
    let k2sq = &k2 * &k2;
    int(1) + int(3) / &k2sq + a * a / (&k2sq * &k2sq)
}

/// `1 + (κ1κ2 + (3/2)(a²/b²)κ2²)/b²`.
pub fn threefold_cym_coefficient(kappa1: &Rational, kappa2: &Rational, a: &Rational, b: &Rational) -> Result<CymCoefficient> {
    if b.is_zero() {
        return Err(invalid("b must be nonzero"));
    }
    let b2 = b * b;
    let value = int(1) + (kappa1 * kappa2 + rat(3, 2) * a * a / &b2 * kappa2 * kappa2) / &b2;
    Ok(CymCoefficient {
        value,
        family: Family::Threefold,
        parameters: vec![
            ("kappa1".into(), format_rational(kappa1)),
            ("kappa2".into(), format_rational(kappa2)),
            ("a".into(), format_rational(a)),
            ("b".into(), format_rational(b)),
        ],
    })
}

/// A solution of either family, as seen by the functional.
#[derive(Debug, Clone, Copy)]
pub enum CymInput<'a> {
    Surface(&'a SurfaceSolution),
    Threefold(&'a ThreefoldSolution),
}

impl CymInput<'_> {
    pub fn profile(&self) -> &PoleSum {
        match self {
            CymInput::Surface(s) => &s.profile,
            CymInput::Threefold(t) => &t.f,
        }
    }

    pub fn coefficient(&self) -> Result<CymCoefficient> {
        match self {
            CymInput::Surface(s) => Ok(surface_cym_coefficient(s)),
            CymInput::Threefold(t) => {
                let (a, b) = t
                    .config
                    .curvature()
                    .ok_or_else(|| invalid("the functional needs a and b"))?;
                threefold_cym_coefficient(&t.kappa1, &t.kappa2, a, b)
            }
        }
    }

    fn xs(&self) -> Vec<Rational> {
        match self {
            CymInput::Surface(s) => vec![s.x.clone()],
            CymInput::Threefold(t) => vec![t.config.x1.clone(), t.config.x2.clone()],
        }
    }

    fn scal_of(&self, f: &PoleSum) -> Result<PoleSum> {
        match self {
            CymInput::Surface(s) => surface_scalar_curvature(&s.params, f),
            CymInput::Threefold(t) => threefold_scalar_curvature(&t.config, f),
        }
    }

    /// `(contractions, α1/α0, trace constant)`.
    fn gauge(&self) -> Result<(Contractions, Rational, Rational)> {
        match self {
            CymInput::Surface(s) => Ok((
                surface_contractions(&s.params)?,
                s.ratios.alpha1_over_alpha0.clone(),
                s.trace_constant.clone(),
            )),
            CymInput::Threefold(t) => {
                let (a, b) = t
                    .config
                    .curvature()
                    .ok_or_else(|| invalid("the functional needs a and b"))?;
                let ratios = t.ratios.as_ref().ok_or_else(|| invalid("missing ratios"))?;
                let trace = t.trace_constant.clone().ok_or_else(|| invalid("missing trace constant"))?;
                Ok((
                    threefold_contractions(&t.config.x1, &t.config.x2, a, b)?,
                    ratios.alpha1_over_alpha0.clone(),
                    trace,
                ))
            }
        }
    }
}

/// Binary64 evaluator for a [`PoleSum`].
#[derive(Debug, Clone)]
pub struct FloatPoleSum {
    poly: Vec<f64>,
    poles: Vec<(f64, i32, f64)>,
}

impl FloatPoleSum {
    pub fn new(f: &PoleSum) -> Self {
        FloatPoleSum {
            poly: f.poly().coeffs().iter().map(to_f64).collect(),
            poles: f
                .poles()
                .map(|t| (to_f64(&t.x), t.order as i32, to_f64(&t.coeff)))
                .collect(),
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        let p = self.poly.iter().rev().fold(0.0, |acc, c| acc * z + c);
        p + self
            .poles
            .iter()
            .map(|(x, j, c)| c * (1.0 + x * z).powi(-j))
            .sum::<f64>()
    }
}

/// Numerical value of the functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CymEvaluation {
    pub total: f64,
    /// `∫ (Scal - 2(α1/α0)|F_A|²)² dμ`.
    pub term_square: f64,
    /// `∫ |Λγ - z|² dμ`.
    pub term_trace: f64,
    /// `∫ |F_A|² dμ`.
    pub term_curvature: f64,
    pub quadrature_error_estimate: f64,
    pub samples: usize,
}

/// Evaluates the functional at the profile `f` (with the connection of the
/// solution held fixed), using `samples` Gauss–Legendre nodes per panel.
pub fn cym_evaluate(input: CymInput<'_>, f: &PoleSum, samples: usize, rel_tol: f64) -> Result<CymEvaluation> {
    if samples < MIN_SAMPLES {
        return Err(invalid(format!("samples must be >= {MIN_SAMPLES}, got {samples}")));
    }
    if !(rel_tol > 0.0 && rel_tol.is_finite()) {
        return Err(invalid(format!("tolerance must be positive, got {rel_tol}")));
    }
    let (contractions, r1, trace) = input.gauge()?;
    let fa = contractions.fa_norm_sq();
    let integrand = &input.scal_of(f)? - &fa.scale(&(int(2) * &r1));
    let trace_gap = to_f64(&(&contractions.lambda_gamma - &trace));

    let xs: Vec<f64> = input.xs().iter().map(to_f64).collect();
    let weight = move |z: f64| xs.iter().map(|x| (1.0 + x * z) / x.abs()).product::<f64>();
    let square = FloatPoleSum::new(&integrand);
    let curvature = FloatPoleSum::new(&fa);

    let rule = GaussLegendre::new(samples);
    let q_square = adaptive(&rule, &|z| square.eval(z).powi(2) * weight(z), -1.0, 1.0, rel_tol, MAX_DEPTH)?;
    let q_curv = adaptive(&rule, &|z| curvature.eval(z) * weight(z), -1.0, 1.0, rel_tol, MAX_DEPTH)?;
    let q_trace = adaptive(&rule, &|z| trace_gap * trace_gap * weight(z), -1.0, 1.0, rel_tol, MAX_DEPTH)?;
    Ok(CymEvaluation {
        total: q_square.value + q_curv.value + q_trace.value,
        term_square: q_square.value,
        term_trace: q_trace.value,
        term_curvature: q_curv.value,
        quadrature_error_estimate: q_square.error + q_curv.error + q_trace.error,
        samples,
    })
}

/// `(1 - z²)²`, which vanishes to second order at both endpoints.
pub fn perturbation_direction() -> Poly {
    Poly::from_i64(&[1, 0, -1]).pow(2)
}

/// Factor by which a CYM increase must exceed the combined quadrature error.
pub const MARGIN_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationStatus {
    Passed,
    Failed,
    /// The perturbed profile is not positive, so it is not admissible.
    Inadmissible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationTest {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub epsilon: Rational,
    pub cym_solution: f64,
    pub cym_perturbed: f64,
    pub combined_error: f64,
    pub status: PerturbationStatus,
}

impl PerturbationTest {
    pub fn passed(&self) -> bool {
        self.status == PerturbationStatus::Passed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalityReport {
    pub coefficient: CymCoefficient,
    pub coefficient_positive: bool,
    pub solution: CymEvaluation,
    /// Empty when the coefficient is not positive.
    pub perturbation_tests: Vec<PerturbationTest>,
    pub perturbations_skipped: bool,
}

impl MinimalityReport {
    pub fn all_passed(&self) -> bool {
        self.coefficient_positive && self.perturbation_tests.iter().all(PerturbationTest::passed)
    }
}

/// Compares the functional at the solution with its value at `F + ε(1 - z²)²`
/// for each `ε`.
pub fn minimality_report(input: CymInput<'_>, epsilons: &[Rational], samples: usize, rel_tol: f64) -> Result<MinimalityReport> {
    let coefficient = input.coefficient()?;
    let coefficient_positive = coefficient.is_positive();
    let base = cym_evaluate(input, input.profile(), samples, rel_tol)?;
    let mut tests = Vec::new();
    if coefficient_positive {
        let dir = PoleSum::from_poly(perturbation_direction());
        for eps in epsilons {
            let perturbed = input.profile() + &dir.scale(eps);
            if !certify_positivity(&perturbed).positive {
                tests.push(PerturbationTest {
                    epsilon: eps.clone(),
                    cym_solution: base.total,
                    cym_perturbed: f64::NAN,
                    combined_error: f64::NAN,
                    status: PerturbationStatus::Inadmissible,
                });
                continue;
            }
            let ev = cym_evaluate(input, &perturbed, samples, rel_tol)?;
            let combined_error = base.quadrature_error_estimate + ev.quadrature_error_estimate;
            let status = if ev.total - base.total > MARGIN_FACTOR * combined_error {
                PerturbationStatus::Passed
            } else {
                PerturbationStatus::Failed
            };
            tests.push(PerturbationTest {
                epsilon: eps.clone(),
                cym_solution: base.total,
                cym_perturbed: ev.total,
                combined_error,
                status,
            });
        }
    }
    Ok(MinimalityReport {
        coefficient,
        coefficient_positive,
        solution: base,
        perturbation_tests: tests,
        perturbations_skipped: !coefficient_positive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_surface_solution, SurfaceConfig};
    use crate::threefold::{build_threefold_solution, ThreefoldConfig};

    #[test]
    fn example_surface_coefficient() {
        let sol = build_surface_solution(&SurfaceConfig::new(1, 1, 1, 1, 0).unwrap()).unwrap();
        assert_eq!(surface_cym_coefficient(&sol).value, rat(7, 2));
    }

    #[test]
    fn special_choice_kills_alpha2() {
        // s = -2, x = 1/2, b = 3a: k = k' = 1, h = 2, k1 = k2
        let cfg = SurfaceConfig::new(1, 1, 2, 2, 2).unwrap();
        assert_eq!(cfg.s_sigma(), int(-2));
        assert_eq!(cfg.b(), int(3) * cfg.a());
        let sol = build_surface_solution(&cfg).unwrap();
        assert!(sol.ratios.alpha2_over_alpha0.is_zero());
        let r1 = &sol.ratios.alpha1_over_alpha0;
        assert_eq!(
            surface_cym_coefficient(&sol).value,
            int(1) + int(8) * r1 * r1 * int(4) * cfg.a() * cfg.a()
        );
    }

    #[test]
    fn large_k2_tends_to_one() {
        let mut last = None;
        for k2 in [10, 100, 1000] {
            let sol = build_surface_solution(&SurfaceConfig::new(1, 1, 1, k2, 0).unwrap()).unwrap();
            let gap = (surface_cym_coefficient(&sol).value - int(1)).abs();
            if let Some(prev) = last {
                assert!(gap < prev);
            }
            last = Some(gap);
        }
    }

    #[test]
    fn coefficient_scaling_invariance() {
        let (r1, r2, z) = (rat(-1, 8), int(4), int(2));
        for t in [rat(1, 3), int(5), rat(-7, 2)] {
            assert_eq!(
                coefficient_from_ratios(&(&t * &r1), &(&r2 / &t), &(&z / &t)),
                coefficient_from_ratios(&r1, &r2, &z)
            );
        }
    }

    #[test]
    fn threefold_coefficient_forms() {
        let one = int(1);
        assert_eq!(threefold_cym_coefficient(&int(3), &int(0), &one, &int(2)).unwrap().value, one);
        assert!(threefold_cym_coefficient(&one, &one, &one, &int(0)).is_err());
        let cfg = ThreefoldConfig::new(rat(1, 2), rat(-1, 3), int(2), int(0), Some(int(1)), Some(int(10))).unwrap();
        let sol = build_threefold_solution(&cfg, None).unwrap();
        let direct = threefold_cym_coefficient(&sol.kappa1, &sol.kappa2, &int(1), &int(10)).unwrap();
        let r = sol.ratios.as_ref().unwrap();
        assert_eq!(
            direct.value,
            coefficient_from_ratios(&r.alpha1_over_alpha0, &r.alpha2_over_alpha0, &int(3))
        );
        assert!(direct.is_positive());
    }

    #[test]
    fn samples_below_minimum_rejected() {
        let sol = build_surface_solution(&SurfaceConfig::new(1, 1, 1, 1, 0).unwrap()).unwrap();
        assert!(cym_evaluate(CymInput::Surface(&sol), &sol.profile, 8, 1e-10).is_err());
    }

    #[test]
    fn trace_term_vanishes_and_resampling_agrees() {
        let sol = build_surface_solution(&SurfaceConfig::new(1, 20, 1, 1, 0).unwrap()).unwrap();
        let e16 = cym_evaluate(CymInput::Surface(&sol), &sol.profile, 16, 1e-10).unwrap();
        let e32 = cym_evaluate(CymInput::Surface(&sol), &sol.profile, 32, 1e-10).unwrap();
        assert!(e16.term_trace.abs() < 1e-12 * e16.term_square);
        let err = e16.quadrature_error_estimate + e32.quadrature_error_estimate;
        assert!((e16.total - e32.total).abs() <= err.max(1e-10 * e16.total));
    }

    #[test]
    fn surface_minimality() {
        let sol = build_surface_solution(&SurfaceConfig::new(1, 20, 1, 1, 0).unwrap()).unwrap();
        let rep = minimality_report(CymInput::Surface(&sol), &[rat(1, 100), rat(1, 10)], 16, 1e-10).unwrap();
        assert!(rep.coefficient_positive);
        assert_eq!(rep.perturbation_tests.len(), 2);
        assert!(rep.all_passed(), "{rep:?}");
    }

    #[test]
    fn float_evaluator_matches_exact() {
        let sol = build_surface_solution(&SurfaceConfig::new(2, 3, 1, 1, 1).unwrap()).unwrap();
        let fl = FloatPoleSum::new(&sol.scal);
        for z in [rat(-1, 1), rat(-1, 3), int(0), rat(5, 7), int(1)] {
            let exact = to_f64(&sol.scal.eval(&z).unwrap());
            assert!((fl.eval(to_f64(&z)) - exact).abs() < 1e-12 * exact.abs().max(1.0));
        }
    }
}
