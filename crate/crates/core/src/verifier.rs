//! Independent verification of solutions of either family.
//!
//! Every check re-derives what it needs from the raw configuration and
//! compares it with the stored value, so a single corrupted field shows up as
//! a failed check with the offending residual as witness.

use std::fmt::Display;
use std::time::{Duration, Instant};

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::cohomology::{
    surface_gamma_class, surface_omega_class, threefold_alpha_class, threefold_gamma_class,
    threefold_omega_class,
};
use crate::contraction::coupled_residual;
use crate::cym::{coefficient_from_ratios, surface_cym_coefficient, threefold_cym_coefficient};
use crate::error::Result;
use crate::exactmath::{format_rational, int, PoleSum, Rational};
use crate::positivity::certify_positivity;
use crate::surface::{
    surface_closed_form_profile, surface_closed_form_scal, surface_contractions, surface_ode_rhs,
    surface_ratios, surface_scalar_curvature, SurfaceSolution,
};
use crate::threefold::{
    build_p, build_p_unchecked, kappa2_closed_form, solve_kappa_system, threefold_contractions,
    threefold_ode_rhs, threefold_ratios, threefold_scalar_curvature, KappaSolution,
    ThreefoldSolution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub family: String,
    /// Input parameters as `(name, value)`.
    pub fingerprint: Vec<(String, String)>,
    pub checks: Vec<CheckResult>,
    pub overall: CheckStatus,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.overall == CheckStatus::Pass
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.check_id.as_str())
            .collect()
    }
}

struct Outcome {
    status: CheckStatus,
    witness: Option<String>,
    detail: Option<String>,
}

impl Outcome {
    fn pass() -> Self {
        Outcome { status: CheckStatus::Pass, witness: None, detail: None }
    }

    fn fail(witness: impl Into<String>) -> Self {
        Outcome { status: CheckStatus::Fail, witness: Some(witness.into()), detail: None }
    }

    fn skipped(detail: impl Into<String>) -> Self {
        Outcome { status: CheckStatus::Skipped, witness: None, detail: Some(detail.into()) }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    fn zero(residual: &PoleSum) -> Self {
        if residual.is_zero() {
            Outcome::pass()
        } else {
            Outcome::fail(residual.to_string())
        }
    }

    fn bool(ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Outcome::pass()
        } else {
            Outcome::fail(witness())
        }
    }

    /// Pass iff every `(name, stored, expected)` agrees.
    fn equal<T: PartialEq + Display>(items: &[(&str, &T, &T)]) -> Self {
        let bad: Vec<String> = items
            .iter()
            .filter(|(_, s, e)| s != e)
            .map(|(n, s, e)| format!("{n}: stored {s}, expected {e}"))
            .collect();
        if bad.is_empty() {
            Outcome::pass()
        } else {
            Outcome::fail(bad.join("; "))
        }
    }

    fn all(outcomes: Vec<Outcome>) -> Self {
        let fails: Vec<String> = outcomes
            .iter()
            .filter(|o| o.status == CheckStatus::Fail)
            .filter_map(|o| o.witness.clone())
            .collect();
        if fails.is_empty() {
            Outcome::pass()
        } else {
            Outcome::fail(fails.join("; "))
        }
    }
}

#[derive(Default)]
struct Runner {
    results: Vec<CheckResult>,
}

impl Runner {
    fn run(&mut self, id: &str, f: impl FnOnce() -> Result<Outcome>) {
        let start = Instant::now();
        let outcome = f().unwrap_or_else(|e| Outcome::fail(e.to_string()));
        self.results.push(CheckResult {
            check_id: id.to_string(),
            status: outcome.status,
            witness: outcome.witness,
            detail: outcome.detail,
            elapsed: start.elapsed(),
        });
    }

    fn not_evaluated(&mut self, ids: &[&str]) {
        for id in ids {
            self.run(id, || Ok(Outcome::fail("not evaluated: invalid parameters")));
        }
    }

    fn finish(self, family: &str, fingerprint: Vec<(String, String)>) -> VerificationReport {
        let overall = if self.results.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        };
        VerificationReport {
            family: family.to_string(),
            fingerprint,
            checks: self.results,
            overall,
        }
    }
}

fn pair(name: &str, value: impl Display) -> (String, String) {
    (name.to_string(), value.to_string())
}

/// Check identifiers for surface solutions, in report order.
pub const SURFACE_CHECKS: &[&str] = &[
    "parameters",
    "stored_constants",
    "ratio_formulas",
    "boundary",
    "ode_residual",
    "closed_form",
    "scalar_curvature",
    "trace",
    "coupled",
    "positivity",
    "classes",
    "gamma_integrality",
    "alpha_sign",
    "cym_coefficient",
    "cym_coefficient_sign",
];

/// Check identifiers for threefold solutions, in report order.
pub const THREEFOLD_CHECKS: &[&str] = &[
    "parameters",
    "kappa",
    "ratio_formulas",
    "boundary",
    "ode_residual",
    "scalar_curvature",
    "trace",
    "coupled",
    "positivity",
    "classes",
    "gamma_integrality",
    "alpha_sign",
    "sign_theorem",
    "cym_coefficient",
    "cym_coefficient_sign",
];

pub fn verify_surface(sol: &SurfaceSolution) -> VerificationReport {
    let p = &sol.params;
    let mut fingerprint = vec![
        pair("k", p.k),
        pair("kprime", p.kprime),
        pair("genus", p.genus),
        pair("a", format_rational(&p.a)),
        pair("b", format_rational(&p.b)),
    ];
    if let Some(c) = &sol.config {
        fingerprint.push(pair("k1", c.k1));
        fingerprint.push(pair("k2", c.k2));
    }
    let mut r = Runner::default();
    r.run("parameters", || {
        p.validate()?;
        Ok(match &sol.config {
            Some(c) => {
                c.validate()?;
                Outcome::bool(c.params() == *p, || "parameters differ from the integer configuration".into())
            }
            None => Outcome::pass(),
        })
    });
    if r.results[0].status == CheckStatus::Fail {
        r.not_evaluated(&SURFACE_CHECKS[1..]);
        return r.finish("surface", fingerprint);
    }

    let (x, s) = (p.x(), p.s_sigma());
    let one = Rational::one();
    r.run("stored_constants", || {
        Ok(Outcome::equal(&[
            ("x", &sol.x, &x),
            ("s_sigma", &sol.s_sigma, &s),
            ("a", &sol.a, &p.a),
            ("b", &sol.b, &p.b),
        ]))
    });
    r.run("ratio_formulas", || {
        let ratios = surface_ratios(p)?;
        let mut items = vec![
            ("alpha1_over_alpha0", &sol.ratios.alpha1_over_alpha0, &ratios.alpha1_over_alpha0),
            ("alpha2_over_alpha0", &sol.ratios.alpha2_over_alpha0, &ratios.alpha2_over_alpha0),
        ];
        let integer_form = sol.config.map(|c| c.alpha1_over_alpha0_integer_form());
        if let Some(v) = &integer_form {
            items.push(("alpha1_over_alpha0 (integer form)", &ratios.alpha1_over_alpha0, v));
        }
        Ok(Outcome::equal(&items))
    });
    r.run("boundary", || {
        let d = sol.profile.derivative();
        let (m1, p1) = (int(-1), int(1));
        let residuals = [
            sol.profile.eval(&m1)?,
            sol.profile.eval(&p1)?,
            d.eval(&m1)? - int(2) * (&one - &x),
            d.eval(&p1)? + int(2) * (&one + &x),
        ];
        Ok(Outcome::bool(residuals.iter().all(Zero::is_zero), || {
            format!(
                "F(-1), F(1), F'(-1) - 2(1-x), F'(1) + 2(1+x) = {}",
                residuals.iter().map(format_rational).collect::<Vec<_>>().join(", ")
            )
        }))
    });
    r.run("ode_residual", || {
        let rhs = surface_ode_rhs(p, &surface_ratios(p)?)?;
        Ok(Outcome::zero(&(&sol.profile.derivative().derivative() - &rhs)))
    });
    r.run("closed_form", || {
        Ok(Outcome::all(vec![
            Outcome::zero(&(&sol.profile - &surface_closed_form_profile(&x, &s)?)),
            Outcome::zero(&(&sol.scal - &surface_closed_form_scal(&x, &s)?)),
        ]))
    });
    r.run("scalar_curvature", || {
        Ok(Outcome::zero(&(&sol.scal - &surface_scalar_curvature(p, &sol.profile)?)))
    });
    r.run("trace", || {
        let c = surface_contractions(p)?;
        let gap = &c.lambda_gamma - &sol.trace_constant;
        Ok(Outcome::bool(gap.is_zero(), || format!("Λγ - z = {}", format_rational(&gap))))
    });
    r.run("coupled", || {
        let ratios = surface_ratios(p)?;
        let c = surface_contractions(p)?;
        let scal = surface_scalar_curvature(p, &sol.profile)?;
        Ok(Outcome::zero(&coupled_residual(
            &scal,
            &c.lambda2_gamma_wedge,
            &ratios.alpha1_over_alpha0,
            &ratios.alpha2_over_alpha0,
        )))
    });
    r.run("positivity", || {
        let cert = certify_positivity(&sol.profile);
        let detail = format!(
            "{} root(s) of the reduced numerator on [-1, 1]; F(0) = {}",
            cert.reduced.closed_count(),
            format_rational(&cert.value_at_zero)
        );
        Ok(Outcome::bool(cert.positive && sol.positivity_certificate == cert, || {
            if cert.positive {
                "stored certificate differs from the recomputed one".into()
            } else {
                "profile is not positive on (-1, 1)".into()
            }
        })
        .with_detail(detail))
    });
    r.run("classes", || {
        let omega = surface_omega_class(p.k, p.kprime)?;
        let gamma = surface_gamma_class(p.k, p.kprime, &p.a, &p.b)?;
        Ok(Outcome::bool(sol.omega_class == omega && sol.gamma_class == gamma, || {
            format!("stored omega {:?}, gamma {:?}", sol.omega_class, sol.gamma_class)
        }))
    });
    r.run("gamma_integrality", || {
        let gamma = surface_gamma_class(p.k, p.kprime, &p.a, &p.b)?;
        let omega = surface_omega_class(p.k, p.kprime)?;
        Ok(if gamma.is_integral() && omega.is_integral() {
            Outcome::pass()
        } else if sol.config.is_some() {
            Outcome::fail(format!("gamma {gamma:?} is not integral"))
        } else {
            Outcome::skipped("raw (a, b): gauge class is not integral")
        })
    });
    r.run("alpha_sign", || {
        let r1 = surface_ratios(p)?.alpha1_over_alpha0;
        Ok(Outcome::bool(r1.is_negative() && sol.ratios.alpha1_over_alpha0.is_negative(), || {
            format!("alpha1/alpha0 = {} is not negative", format_rational(&r1))
        }))
    });
    r.run("cym_coefficient", || {
        let ratios = surface_ratios(p)?;
        let direct = coefficient_from_ratios(&ratios.alpha1_over_alpha0, &ratios.alpha2_over_alpha0, &(int(2) * &p.a));
        // independent route: 1 + 3Q(2 + s x)/2 + a²Q², Q = (1 - x²)²(2 - s x)/(2 b² x⁴)
        let q = num::pow(&one - &x * &x, 2) * (int(2) - &s * &x) / (int(2) * &p.b * &p.b * num::pow(x.clone(), 4));
        let independent = &one + int(3) * &q * (int(2) + &s * &x) / int(2) + &p.a * &p.a * &q * &q;
        let stored = surface_cym_coefficient(sol).value;
        Ok(Outcome::equal(&[
            ("coefficient", &direct, &independent),
            ("coefficient from stored ratios", &stored, &independent),
        ])
        .with_detail(format!("coefficient = {}", format_rational(&independent))))
    });
    r.run("cym_coefficient_sign", || {
        let ratios = surface_ratios(p)?;
        let c = coefficient_from_ratios(&ratios.alpha1_over_alpha0, &ratios.alpha2_over_alpha0, &(int(2) * &p.a));
        Ok(if c.is_positive() {
            Outcome::pass()
        } else {
            Outcome::skipped(format!("coefficient {} is not positive; minimality not implied", format_rational(&c)))
        })
    });
    r.finish("surface", fingerprint)
}

/// Reference constants from the system, for the stored `κ2` on a family.
fn reference_kappas(sol: &ThreefoldSolution) -> Result<(Rational, Rational), String> {
    let c = &sol.config;
    match solve_kappa_system(&c.x1, &c.x2, &c.s1, &c.s2).map_err(|e| e.to_string())? {
        KappaSolution::Unique { kappa1, kappa2 } => Ok((kappa1, kappa2)),
        fam @ KappaSolution::OneParameterFamily { .. } => {
            Ok((fam.family_kappa1(&sol.kappa2).expect("family"), sol.kappa2.clone()))
        }
        KappaSolution::Inconsistent => Err("the constant system is inconsistent".into()),
    }
}

pub fn verify_threefold(sol: &ThreefoldSolution) -> VerificationReport {
    let c = &sol.config;
    let mut fingerprint = vec![
        pair("x1", format_rational(&c.x1)),
        pair("x2", format_rational(&c.x2)),
        pair("s1", format_rational(&c.s1)),
        pair("s2", format_rational(&c.s2)),
        pair("k1", c.k1),
        pair("k2", c.k2),
    ];
    if let Some((a, b)) = c.curvature() {
        fingerprint.push(pair("a", format_rational(a)));
        fingerprint.push(pair("b", format_rational(b)));
    }
    let mut r = Runner::default();
    r.run("parameters", || {
        c.validate()?;
        Ok(Outcome::pass())
    });
    if r.results[0].status == CheckStatus::Fail {
        r.not_evaluated(&THREEFOLD_CHECKS[1..]);
        return r.finish("threefold", fingerprint);
    }

    let one = Rational::one();
    let reference = reference_kappas(sol);
    let reference_ref = reference.as_ref();
    let with_reference = |f: &dyn Fn(&Rational, &Rational) -> Result<Outcome>| match reference_ref {
        Ok((k1, k2)) => f(k1, k2),
        Err(msg) => Ok(Outcome::fail(msg.clone())),
    };

    r.run("kappa", || {
        with_reference(&|k1, k2| {
            let mut outcomes = vec![Outcome::equal(&[("kappa1", &sol.kappa1, k1), ("kappa2", &sol.kappa2, k2)])];
            if c.x1 != -c.x2.clone() {
                let closed = kappa2_closed_form(&c.x1, &c.x2, &c.s1, &c.s2)?;
                outcomes.push(Outcome::equal(&[("kappa2 closed form", k2, &closed)]));
            }
            Ok(Outcome::all(outcomes))
        })
    });
    r.run("ratio_formulas", || {
        let Some((a, b)) = c.curvature() else {
            return Ok(Outcome::skipped("a and b not given"));
        };
        with_reference(&|k1, k2| {
            let expected = threefold_ratios(k1, k2, a, b)?;
            Ok(match &sol.ratios {
                Some(stored) => Outcome::equal(&[
                    ("alpha1_over_alpha0", &stored.alpha1_over_alpha0, &expected.alpha1_over_alpha0),
                    ("alpha2_over_alpha0", &stored.alpha2_over_alpha0, &expected.alpha2_over_alpha0),
                ]),
                None => Outcome::fail("ratios missing"),
            })
        })
    });
    r.run("boundary", || {
        let (m1, p1) = (int(-1), int(1));
        let expected_p = build_p_unchecked(c, &sol.kappa1, &sol.kappa2)?;
        let residuals = [
            sol.p.eval(&m1)? - int(2) * (&one - &c.x1) * (&one - &c.x2),
            sol.p.eval(&p1)? + int(2) * (&one + &c.x1) * (&one + &c.x2),
            sol.f.eval(&m1)?,
            sol.f.eval(&p1)?,
        ];
        Ok(Outcome::all(vec![
            Outcome::bool(residuals.iter().all(Zero::is_zero), || {
                format!(
                    "P(-1) - 2(1-x1)(1-x2), P(1) + 2(1+x1)(1+x2), F(-1), F(1) = {}",
                    residuals.iter().map(format_rational).collect::<Vec<_>>().join(", ")
                )
            }),
            Outcome::zero(&(&sol.f.derivative() - &sol.p)),
            Outcome::zero(&(&sol.p - &expected_p)),
        ]))
    });
    r.run("ode_residual", || {
        with_reference(&|k1, k2| {
            build_p(c, k1, k2)?;
            let rhs = threefold_ode_rhs(c, k1, k2)?;
            Ok(Outcome::zero(&(&sol.f.derivative().derivative() - &rhs)))
        })
    });
    r.run("scalar_curvature", || {
        Ok(Outcome::zero(&(&sol.scal - &threefold_scalar_curvature(c, &sol.f)?)))
    });
    r.run("trace", || {
        let Some((a, b)) = c.curvature() else {
            return Ok(Outcome::skipped("a and b not given"));
        };
        let con = threefold_contractions(&c.x1, &c.x2, a, b)?;
        Ok(match &sol.trace_constant {
            Some(z) => {
                let gap = &con.lambda_gamma - z;
                Outcome::bool(gap.is_zero(), || format!("Λγ - z = {}", format_rational(&gap)))
            }
            None => Outcome::fail("trace constant missing"),
        })
    });
    r.run("coupled", || {
        let Some((a, b)) = c.curvature() else {
            return Ok(Outcome::skipped("a and b not given"));
        };
        with_reference(&|k1, k2| {
            let ratios = threefold_ratios(k1, k2, a, b)?;
            let con = threefold_contractions(&c.x1, &c.x2, a, b)?;
            let scal = threefold_scalar_curvature(c, &sol.f)?;
            Ok(Outcome::zero(&coupled_residual(
                &scal,
                &con.lambda2_gamma_wedge,
                &ratios.alpha1_over_alpha0,
                &ratios.alpha2_over_alpha0,
            )))
        })
    });
    r.run("positivity", || {
        let cert = certify_positivity(&sol.f);
        let slope = cert
            .slope
            .as_ref()
            .map(|s| format!("P: positive at -1 {}, negative at 1 {}, {} interior root(s)", s.positive_at_minus_one, s.negative_at_one, s.interior_roots))
            .unwrap_or_else(|| "P vanishes identically".into());
        let consistent = sol.positivity_holds == cert.positive && sol.positivity_certificate == cert;
        Ok(Outcome::bool(cert.positive && consistent, || {
            if !consistent {
                "stored positivity data differs from the recomputed certificate".into()
            } else {
                "profile is not positive on (-1, 1)".into()
            }
        })
        .with_detail(slope))
    });
    r.run("classes", || {
        let omega = threefold_omega_class(&c.x1, &c.x2, c.k1, c.k2)?;
        let alpha = threefold_alpha_class(&c.x1, &c.x2, c.k1, c.k2)?;
        let gamma = c
            .curvature()
            .map(|(a, b)| threefold_gamma_class(&c.x1, &c.x2, a, b, c.k1, c.k2))
            .transpose()?;
        Ok(Outcome::bool(
            sol.omega_class == omega && sol.alpha_class == alpha && sol.gamma_class == gamma,
            || "stored classes differ from the recomputed ones".into(),
        ))
    });
    r.run("gamma_integrality", || {
        let Some((a, b)) = c.curvature() else {
            return Ok(Outcome::skipped("a and b not given"));
        };
        let gamma = threefold_gamma_class(&c.x1, &c.x2, a, b, c.k1, c.k2)?;
        Ok(if gamma.is_integral() {
            Outcome::pass()
        } else {
            Outcome::skipped(format!(
                "gamma ({}, {}, {}) is integral after rescaling by {}",
                format_rational(&gamma.c1),
                format_rational(&gamma.c2),
                format_rational(&gamma.c3),
                gamma.minimal_rescaling()
            ))
        })
    });
    r.run("alpha_sign", || {
        let Some(ratios) = &sol.ratios else {
            return Ok(Outcome::skipped("a and b not given"));
        };
        with_reference(&|_, k2| {
            let r1 = &ratios.alpha1_over_alpha0;
            Ok(Outcome::bool(r1.signum() == k2.signum(), || {
                format!("sign of alpha1/alpha0 = {} differs from sign of kappa2 = {}", format_rational(r1), format_rational(k2))
            })
            .with_detail(format!("alpha1/alpha0 has the sign of kappa2 = {}", format_rational(k2))))
        })
    });
    r.run("sign_theorem", || {
        if c.x1.is_positive() != c.x2.is_positive() {
            return Ok(Outcome::skipped("x1 and x2 have opposite signs"));
        }
        with_reference(&|_, k2| {
            Ok(Outcome::bool(!k2.is_positive(), || format!("kappa2 = {} is positive", format_rational(k2))))
        })
    });
    r.run("cym_coefficient", || {
        let Some((a, b)) = c.curvature() else {
            return Ok(Outcome::skipped("a and b not given"));
        };
        with_reference(&|k1, k2| {
            let closed = threefold_cym_coefficient(k1, k2, a, b)?.value;
            let ratios = threefold_ratios(k1, k2, a, b)?;
            let general = coefficient_from_ratios(&ratios.alpha1_over_alpha0, &ratios.alpha2_over_alpha0, &(int(3) * a));
            Ok(Outcome::equal(&[("coefficient", &closed, &general)])
                .with_detail(format!("coefficient = {}", format_rational(&closed))))
        })
    });
    r.run("cym_coefficient_sign", || {
        let Some((a, b)) = c.curvature() else {
            return Ok(Outcome::skipped("a and b not given"));
        };
        with_reference(&|k1, k2| {
            let v = threefold_cym_coefficient(k1, k2, a, b)?.value;
            Ok(if v.is_positive() {
                Outcome::pass()
            } else {
                Outcome::skipped(format!("coefficient {} is not positive; minimality not implied", format_rational(&v)))
            })
        })
    });
    r.finish("threefold", fingerprint)
}

/// A solution of either family.
#[derive(Debug, Clone, Copy)]
pub enum Solution<'a> {
    Surface(&'a SurfaceSolution),
    Threefold(&'a ThreefoldSolution),
}

pub fn verify_solution(sol: Solution<'_>) -> VerificationReport {
    match sol {
        Solution::Surface(s) => verify_surface(s),
        Solution::Threefold(t) => verify_threefold(t),
    }
}
