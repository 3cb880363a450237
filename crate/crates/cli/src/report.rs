//! JSON report and CSV emission.

use std::collections::BTreeMap;
use std::io::Write;

use kym_core::cohomology::{SurfaceClass, ThreefoldClass};
use kym_core::cym::{CymCoefficient, CymEvaluation, MinimalityReport, PerturbationStatus};
use kym_core::exactmath::{format_rational, to_f64};
use kym_core::positivity::PositivityCertificate;
use kym_core::surface::SurfaceSolution;
use kym_core::threefold::ThreefoldSolution;
use kym_core::verifier::{CheckStatus, VerificationReport};
use kym_core::{PoleSum, Rational};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub version: String,
    pub schema_version: u32,
    pub timestamp: String,
    /// SHA-256 of the canonical `{command, parameters}` JSON.
    pub input_hash: String,
}

impl Manifest {
    pub fn new(command: &str, parameters: BTreeMap<String, String>) -> Self {
        let canonical = serde_json::to_string(&(command, &parameters)).expect("strings serialize");
        Manifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            schema_version: SCHEMA_VERSION,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            input_hash: hex::encode(Sha256::digest(canonical.as_bytes())),
            parameters,
        }
    }
}

/// A binary64 value written with 17 significant digits; non-finite values
/// become `null`.
#[derive(Debug, Clone, Copy)]
pub struct Float(pub f64);

impl Float {
    pub fn text(&self) -> String {
        format!("{:.16e}", self.0)
    }
}

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn q(v: &Rational) -> String {
    format_rational(v)
}

#[derive(Debug, Serialize, Default)]
pub struct Constants {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    #[serde(flatten)]
    pub values: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_ratios: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_scalar_curvature: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct Classes {
    pub omega: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<String>>,
    pub gamma: Option<Vec<String>>,
    pub integral: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct Positivity {
    pub positive: bool,
    pub multiplicity_at_minus_one: u32,
    pub multiplicity_at_one: u32,
    pub reduced_numerator: String,
    pub roots_on_closed_interval: usize,
    pub value_at_zero: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_interior_sign_changes: Option<usize>,
}

impl From<&PositivityCertificate> for Positivity {
    fn from(c: &PositivityCertificate) -> Self {
        Positivity {
            positive: c.positive,
            multiplicity_at_minus_one: c.multiplicity_at_minus_one,
            multiplicity_at_one: c.multiplicity_at_one,
            reduced_numerator: c.reduced.polynomial.to_string(),
            roots_on_closed_interval: c.reduced.closed_count(),
            value_at_zero: q(&c.value_at_zero),
            slope_interior_sign_changes: c.slope.as_ref().map(|s| s.interior_roots),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Profile {
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "P", skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(rename = "Scal")]
    pub scal: String,
    pub positivity: Positivity,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn checks(v: &VerificationReport) -> Vec<Check> {
    v.checks
        .iter()
        .map(|c| Check {
            id: c.check_id.clone(),
            status: c.status,
            witness: c.witness.clone(),
            detail: c.detail.clone(),
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct Evaluation {
    pub total: Float,
    pub term_square: Float,
    pub term_trace: Float,
    pub term_curvature: Float,
    pub quadrature_error_estimate: Float,
    pub samples: usize,
}

impl From<&CymEvaluation> for Evaluation {
    fn from(e: &CymEvaluation) -> Self {
        Evaluation {
            total: Float(e.total),
            term_square: Float(e.term_square),
            term_trace: Float(e.term_trace),
            term_curvature: Float(e.term_curvature),
            quadrature_error_estimate: Float(e.quadrature_error_estimate),
            samples: e.samples,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Perturbation {
    pub epsilon: String,
    pub cym_solution: Float,
    pub cym_perturbed: Float,
    pub combined_error: Float,
    pub status: PerturbationStatus,
}

#[derive(Debug, Serialize)]
pub struct Cym {
    pub coefficient: String,
    pub positive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<Evaluation>,
    pub perturbations: Vec<Perturbation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbations_skipped: Option<bool>,
}

impl Cym {
    pub fn coefficient_only(c: &CymCoefficient) -> Self {
        Cym {
            coefficient: q(&c.value),
            positive: c.is_positive(),
            solution: None,
            perturbations: Vec::new(),
            perturbations_skipped: None,
        }
    }

    pub fn from_minimality(m: &MinimalityReport) -> Self {
        Cym {
            coefficient: q(&m.coefficient.value),
            positive: m.coefficient_positive,
            solution: Some((&m.solution).into()),
            perturbations: m
                .perturbation_tests
                .iter()
                .map(|t| Perturbation {
                    epsilon: q(&t.epsilon),
                    cym_solution: Float(t.cym_solution),
                    cym_perturbed: Float(t.cym_perturbed),
                    combined_error: Float(t.combined_error),
                    status: t.status,
                })
                .collect(),
            perturbations_skipped: Some(m.perturbations_skipped),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub manifest: Manifest,
    pub family: String,
    pub inputs: BTreeMap<String, String>,
    pub constants: Constants,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Classes>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Profile>,
    pub checks: Vec<Check>,
    pub overall: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cym: Option<Cym>,
}

fn surface_class(c: &SurfaceClass) -> Vec<String> {
    vec![q(&c.m1), q(&c.m2)]
}

fn threefold_class(c: &ThreefoldClass) -> Vec<String> {
    c.coords().into_iter().map(q).collect()
}

fn ratios_map(r1: &Rational, r2: &Rational) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("alpha1_over_alpha0".to_string(), q(r1)),
        ("alpha2_over_alpha0".to_string(), q(r2)),
    ])
}

pub fn surface_report(manifest: Manifest, sol: &SurfaceSolution, verification: &VerificationReport, cym: Cym) -> Report {
    let values = BTreeMap::from([
        ("x".to_string(), q(&sol.x)),
        ("s_sigma".to_string(), q(&sol.s_sigma)),
        ("a".to_string(), q(&sol.a)),
        ("b".to_string(), q(&sol.b)),
        ("trace_constant".to_string(), q(&sol.trace_constant)),
    ]);
    Report {
        inputs: manifest.parameters.clone(),
        manifest,
        family: "surface".into(),
        constants: Constants {
            classification: None,
            values,
            alpha_ratios: Some(ratios_map(&sol.ratios.alpha1_over_alpha0, &sol.ratios.alpha2_over_alpha0)),
            constant_scalar_curvature: Some(sol.scal.as_constant().is_some()),
        },
        classes: Some(Classes {
            omega: surface_class(&sol.omega_class),
            alpha: None,
            gamma: Some(surface_class(&sol.gamma_class)),
            integral: Some(sol.omega_class.is_integral() && sol.gamma_class.is_integral()),
        }),
        profile: Some(Profile {
            f: sol.profile.to_string(),
            p: None,
            scal: sol.scal.to_string(),
            positivity: (&sol.positivity_certificate).into(),
        }),
        checks: checks(verification),
        overall: verification.overall,
        cym: Some(cym),
    }
}

pub fn threefold_report(
    manifest: Manifest,
    sol: &ThreefoldSolution,
    classification: &str,
    verification: &VerificationReport,
    cym: Option<Cym>,
) -> Report {
    let c = &sol.config;
    let mut values = BTreeMap::from([
        ("x1".to_string(), q(&c.x1)),
        ("x2".to_string(), q(&c.x2)),
        ("s1".to_string(), q(&c.s1)),
        ("s2".to_string(), q(&c.s2)),
        ("k1".to_string(), c.k1.to_string()),
        ("k2".to_string(), c.k2.to_string()),
        ("kappa1".to_string(), q(&sol.kappa1)),
        ("kappa2".to_string(), q(&sol.kappa2)),
    ]);
    if let Some((a, b)) = c.curvature() {
        values.insert("a".into(), q(a));
        values.insert("b".into(), q(b));
    }
    if let Some(z) = &sol.trace_constant {
        values.insert("trace_constant".into(), q(z));
    }
    Report {
        inputs: manifest.parameters.clone(),
        manifest,
        family: "threefold".into(),
        constants: Constants {
            classification: Some(classification.to_string()),
            values,
            alpha_ratios: sol
                .ratios
                .as_ref()
                .map(|r| ratios_map(&r.alpha1_over_alpha0, &r.alpha2_over_alpha0)),
            constant_scalar_curvature: Some(sol.scal.as_constant().is_some()),
        },
        classes: Some(Classes {
            omega: threefold_class(&sol.omega_class),
            alpha: Some(threefold_class(&sol.alpha_class)),
            gamma: sol.gamma_class.as_ref().map(threefold_class),
            integral: sol.gamma_class.as_ref().map(ThreefoldClass::is_integral),
        }),
        profile: Some(Profile {
            f: sol.f.to_string(),
            p: Some(sol.p.to_string()),
            scal: sol.scal.to_string(),
            positivity: (&sol.positivity_certificate).into(),
        }),
        checks: checks(verification),
        overall: verification.overall,
        cym,
    }
}

/// Report for a system with no solution: no profile, no checks.
pub fn inconsistent_report(manifest: Manifest) -> Report {
    Report {
        inputs: manifest.parameters.clone(),
        manifest,
        family: "threefold".into(),
        constants: Constants {
            classification: Some("inconsistent".into()),
            ..Constants::default()
        },
        classes: None,
        profile: None,
        checks: Vec::new(),
        overall: CheckStatus::Fail,
        cym: None,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Uniform samples of `F`, `Scal` and `|F_A|²` including both endpoints.
pub fn write_profile_csv<W: Write>(
    out: W,
    manifest: &Manifest,
    samples: usize,
    f: &PoleSum,
    scal: &PoleSum,
    fa_norm_sq: Option<&PoleSum>,
) -> std::io::Result<()> {
    let mut out = out;
    writeln!(out, "# {}", serde_json::to_string(manifest).expect("manifest serializes"))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["z", "F", "Scal", "FA_norm_sq"])?;
    let n = samples as i64 - 1;
    for i in 0..=n {
        let z = Rational::new((2 * i - n).into(), n.into());
        let value = |g: &PoleSum| Float(to_f64(&g.eval(&z).expect("poles lie outside [-1, 1]"))).text();
        w.write_record([
            Float(to_f64(&z)).text(),
            value(f),
            value(scal),
            fa_norm_sq.map(value).unwrap_or_default(),
        ])?;
    }
    w.flush()
}
