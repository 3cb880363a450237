//! Classification of the κ-system over a rational `(x1, x2)` grid.

use std::io::Write;

use kym_core::exactmath::format_rational;
use kym_core::threefold::{build_threefold_solution, solve_kappa_system, KappaSolution, ThreefoldConfig};
use kym_core::Rational;
use num::{One, Signed, Zero};
use rayon::prelude::*;

use crate::report::Manifest;

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x1: Rational,
    pub x2: Rational,
    pub classification: &'static str,
    pub kappa2: Option<Rational>,
}

/// `lo, lo + step, …` up to `hi`, restricted to `0 < |x| < 1`.
pub fn axis(lo: &Rational, hi: &Rational, step: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut x = lo.clone();
    while &x <= hi {
        if !x.is_zero() && x.abs() < Rational::one() {
            out.push(x.clone());
        }
        x += step;
    }
    out
}

pub fn grid(x1s: &[Rational], x2s: &[Rational]) -> Vec<(Rational, Rational)> {
    x1s.iter()
        .flat_map(|a| x2s.iter().filter(move |b| *b != a).map(move |b| (a.clone(), b.clone())))
        .collect()
}

fn classify(x1: &Rational, x2: &Rational, s1: &Rational, s2: &Rational) -> Row {
    let row = |classification, kappa2| Row {
        x1: x1.clone(),
        x2: x2.clone(),
        classification,
        kappa2,
    };
    match solve_kappa_system(x1, x2, s1, s2) {
        Ok(KappaSolution::Inconsistent) => row("inconsistent", None),
        Ok(KappaSolution::OneParameterFamily { .. }) => row("family", None),
        Ok(KappaSolution::Unique { kappa2, .. }) => {
            let positive = ThreefoldConfig::new(x1.clone(), x2.clone(), s1.clone(), s2.clone(), None, None)
                .and_then(|cfg| build_threefold_solution(&cfg, None))
                .map(|sol| sol.positivity_holds);
            match positive {
                Ok(true) => row("unique+positive", Some(kappa2)),
                Ok(false) => row("unique+nonpositiveF", Some(kappa2)),
                Err(_) => row("invalid", Some(kappa2)),
            }
        }
        Err(_) => row("invalid", None),
    }
}

/// Rows in grid order; computed in parallel.
pub fn survey(points: &[(Rational, Rational)], s1: &Rational, s2: &Rational) -> Vec<Row> {
    points.par_iter().map(|(a, b)| classify(a, b, s1, s2)).collect()
}

pub fn write_csv<W: Write>(mut out: W, manifest: &Manifest, rows: &[Row]) -> std::io::Result<()> {
    writeln!(out, "# {}", serde_json::to_string(manifest).expect("manifest serializes"))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x1", "x2", "classification", "kappa2", "kappa2_sign"])?;
    for r in rows {
        let (k2, sign) = match &r.kappa2 {
            Some(k) => (
                format_rational(k),
                if k.is_positive() {
                    "+"
                } else if k.is_negative() {
                    "-"
                } else {
                    "0"
                },
            ),
            None => (String::new(), ""),
        };
        w.write_record([format_rational(&r.x1), format_rational(&r.x2), r.classification.to_string(), k2, sign.to_string()])?;
    }
    w.flush()
}
