mod report;
mod survey;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kym_core::cym::{minimality_report, CymInput, PerturbationStatus, DEFAULT_TOLERANCE, MIN_SAMPLES};
use kym_core::exactmath::{format_rational, parse_rational};
use kym_core::surface::{build_surface_solution, surface_contractions, SurfaceConfig};
use kym_core::threefold::{
    build_threefold_solution, solve_kappa_system, threefold_contractions, KappaSolution, ThreefoldConfig,
};
use kym_core::verifier::{verify_surface, verify_threefold};
use kym_core::{Error, Rational};

use report::{Cym, Manifest};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;
const EXIT_POSITIVITY: u8 = 4;

#[derive(Parser)]
#[command(name = "kym", version, about = "Construct and verify admissible coupled solutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ruled surface over a curve of genus h.
    Surface(SurfaceArgs),
    /// Threefold over a product of two curves.
    Threefold(ThreefoldArgs),
    /// Classify the κ-system over an (x1, x2) grid.
    Survey(SurveyArgs),
    /// Minimality report for the Calabi–Yang–Mills functional.
    #[command(subcommand)]
    Cym(CymCommand),
}

#[derive(Subcommand)]
enum CymCommand {
    Surface {
        #[command(flatten)]
        input: SurfaceInput,
        #[command(flatten)]
        cym: CymArgs,
    },
    Threefold {
        #[command(flatten)]
        input: Box<ThreefoldInput>,
        #[command(flatten)]
        cym: CymArgs,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct SurfaceInput {
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    #[arg(long, allow_hyphen_values = true)]
    kprime: i64,
    #[arg(long, allow_hyphen_values = true)]
    k1: i64,
    #[arg(long, allow_hyphen_values = true)]
    k2: i64,
    #[arg(long, allow_hyphen_values = true)]
    genus: i64,
}

impl SurfaceInput {
    fn parameters(&self) -> BTreeMap<String, String> {
        [("k", self.k), ("kprime", self.kprime), ("k1", self.k1), ("k2", self.k2), ("genus", self.genus)]
            .into_iter()
            .map(|(n, v)| (n.to_string(), v.to_string()))
            .collect()
    }
}

#[derive(Args)]
struct ThreefoldInput {
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    x1: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    x2: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    s1: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    s2: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    a: Option<Rational>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    b: Option<Rational>,
    /// Selects a member of a one-parameter family.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    kappa2: Option<Rational>,
}

impl ThreefoldInput {
    fn parameters(&self) -> BTreeMap<String, String> {
        let mut m: BTreeMap<String, String> = [("x1", &self.x1), ("x2", &self.x2), ("s1", &self.s1), ("s2", &self.s2)]
            .into_iter()
            .map(|(n, v)| (n.to_string(), format_rational(v)))
            .collect();
        for (n, v) in [("a", &self.a), ("b", &self.b), ("kappa2", &self.kappa2)] {
            if let Some(v) = v {
                m.insert(n.to_string(), format_rational(v));
            }
        }
        m
    }
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CsvArgs {
    /// Write sampled z, F, Scal, |F_A|² here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Number of uniform CSV samples on [-1, 1].
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u32).range(2..))]
    samples: u32,
}

#[derive(Args)]
struct SurfaceArgs {
    #[command(flatten)]
    input: SurfaceInput,
    #[command(flatten)]
    output: Output,
    #[command(flatten)]
    csv: CsvArgs,
}

#[derive(Args)]
struct ThreefoldArgs {
    #[command(flatten)]
    input: ThreefoldInput,
    #[command(flatten)]
    output: Output,
    #[command(flatten)]
    csv: CsvArgs,
}

#[derive(Args)]
struct CymArgs {
    /// Perturbation sizes.
    #[arg(long, value_parser = rational, value_delimiter = ',', default_value = "1/100,1/10")]
    eps: Vec<Rational>,
    /// Gauss–Legendre nodes per panel.
    #[arg(long, default_value_t = 32)]
    samples: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SurveyArgs {
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    x1_min: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    x1_max: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    x1_step: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    x2_min: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    x2_max: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    x2_step: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    s1: Rational,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    s2: Rational,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl SurveyArgs {
    fn parameters(&self) -> BTreeMap<String, String> {
        [
            ("x1_min", &self.x1_min),
            ("x1_max", &self.x1_max),
            ("x1_step", &self.x1_step),
            ("x2_min", &self.x2_min),
            ("x2_max", &self.x2_max),
            ("x2_step", &self.x2_step),
            ("s1", &self.s1),
            ("s2", &self.s2),
        ]
        .into_iter()
        .map(|(n, v)| (n.to_string(), format_rational(v)))
        .collect()
    }
}

/// A failure that ends the run with a given exit code.
struct Exit(u8, String);

impl From<io::Error> for Exit {
    fn from(e: io::Error) -> Self {
        Exit(EXIT_FAIL, format!("i/o error: {e}"))
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidParameter(_) | Error::Exact(_) | Error::DegenerateDenominator(_) => EXIT_USAGE,
            Error::InconsistentSystem(_) => EXIT_INCONSISTENT,
            Error::PositivityFailure(_) => EXIT_POSITIVITY,
            Error::EndpointMismatch(_) | Error::QuadratureNotConverged { .. } => EXIT_FAIL,
        };
        Exit(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Exit {
    Exit(EXIT_USAGE, msg.into())
}

fn quadrature_tolerance() -> Result<f64, Exit> {
    match std::env::var("CYM_QUAD_TOL") {
        Err(_) => Ok(DEFAULT_TOLERANCE),
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(usage(format!("CYM_QUAD_TOL must be a positive number, got {v:?}"))),
        },
    }
}

fn emit(path: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn create(path: &PathBuf) -> io::Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new)
}

fn verdict(passed: bool) -> u8 {
    if passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn run_surface(args: SurfaceArgs) -> Result<u8, Exit> {
    let manifest = Manifest::new("surface", args.input.parameters());
    let SurfaceInput { k, kprime, k1, k2, genus } = args.input;
    let cfg = SurfaceConfig::new(k, kprime, k1, k2, genus)?;
    let sol = build_surface_solution(&cfg)?;
    let verification = verify_surface(&sol);
    let coefficient = CymInput::Surface(&sol).coefficient()?;
    if let Some(path) = &args.csv.csv {
        let fa = surface_contractions(&sol.params)?.fa_norm_sq();
        report::write_profile_csv(create(path)?, &manifest, args.csv.samples as usize, &sol.profile, &sol.scal, Some(&fa))?;
    }
    let r = report::surface_report(manifest, &sol, &verification, Cym::coefficient_only(&coefficient));
    emit(&args.output.out, &report::to_json(&r))?;
    Ok(verdict(verification.passed()))
}

enum Threefold {
    Built(Box<kym_core::threefold::ThreefoldSolution>, &'static str),
    Inconsistent,
}

fn build_threefold(input: &ThreefoldInput) -> Result<Threefold, Exit> {
    let cfg = ThreefoldConfig::new(
        input.x1.clone(),
        input.x2.clone(),
        input.s1.clone(),
        input.s2.clone(),
        input.a.clone(),
        input.b.clone(),
    )?;
    let classification = match solve_kappa_system(&cfg.x1, &cfg.x2, &cfg.s1, &cfg.s2)? {
        KappaSolution::Inconsistent => return Ok(Threefold::Inconsistent),
        KappaSolution::Unique { .. } => "unique",
        KappaSolution::OneParameterFamily { .. } => "family",
    };
    let sol = build_threefold_solution(&cfg, input.kappa2.as_ref())?;
    Ok(Threefold::Built(Box::new(sol), classification))
}

fn run_threefold(args: ThreefoldArgs) -> Result<u8, Exit> {
    let manifest = Manifest::new("threefold", args.input.parameters());
    let (sol, classification) = match build_threefold(&args.input)? {
        Threefold::Built(sol, c) => (sol, c),
        Threefold::Inconsistent => {
            emit(&args.output.out, &report::to_json(&report::inconsistent_report(manifest)))?;
            return Err(Exit(EXIT_INCONSISTENT, "the κ-system is inconsistent".into()));
        }
    };
    let verification = verify_threefold(&sol);
    let cym = match sol.config.curvature() {
        Some(_) => Some(Cym::coefficient_only(&CymInput::Threefold(&sol).coefficient()?)),
        None => None,
    };
    if let Some(path) = &args.csv.csv {
        let fa = match sol.config.curvature() {
            Some((a, b)) => Some(threefold_contractions(&sol.config.x1, &sol.config.x2, a, b)?.fa_norm_sq()),
            None => None,
        };
        report::write_profile_csv(create(path)?, &manifest, args.csv.samples as usize, &sol.f, &sol.scal, fa.as_ref())?;
    }
    let r = report::threefold_report(manifest, &sol, classification, &verification, cym);
    emit(&args.output.out, &report::to_json(&r))?;
    if !sol.positivity_holds {
        return Ok(EXIT_POSITIVITY);
    }
    Ok(verdict(verification.passed()))
}

fn check_cym_args(cym: &CymArgs) -> Result<f64, Exit> {
    if cym.samples < MIN_SAMPLES {
        return Err(usage(format!("--samples must be at least {MIN_SAMPLES}")));
    }
    if cym.eps.is_empty() {
        return Err(usage("--eps needs at least one value"));
    }
    quadrature_tolerance()
}

fn cym_exit(verified: bool, m: &kym_core::cym::MinimalityReport) -> u8 {
    let failed = m.perturbation_tests.iter().any(|t| t.status == PerturbationStatus::Failed);
    verdict(verified && !failed)
}

fn run_cym(cmd: CymCommand) -> Result<u8, Exit> {
    match cmd {
        CymCommand::Surface { input, cym } => {
            let tol = check_cym_args(&cym)?;
            let mut params = input.parameters();
            params.insert("eps".into(), cym.eps.iter().map(format_rational).collect::<Vec<_>>().join(","));
            params.insert("samples".into(), cym.samples.to_string());
            params.insert("tolerance".into(), format!("{tol:e}"));
            let manifest = Manifest::new("cym surface", params);
            let cfg = SurfaceConfig::new(input.k, input.kprime, input.k1, input.k2, input.genus)?;
            let sol = build_surface_solution(&cfg)?;
            let verification = verify_surface(&sol);
            let m = minimality_report(CymInput::Surface(&sol), &cym.eps, cym.samples, tol)?;
            let r = report::surface_report(manifest, &sol, &verification, Cym::from_minimality(&m));
            emit(&cym.output.out, &report::to_json(&r))?;
            Ok(cym_exit(verification.passed(), &m))
        }
        CymCommand::Threefold { input, cym } => {
            let tol = check_cym_args(&cym)?;
            if input.a.is_none() || input.b.is_none() {
                return Err(usage("the functional needs --a and --b"));
            }
            let mut params = input.parameters();
            params.insert("eps".into(), cym.eps.iter().map(format_rational).collect::<Vec<_>>().join(","));
            params.insert("samples".into(), cym.samples.to_string());
            params.insert("tolerance".into(), format!("{tol:e}"));
            let manifest = Manifest::new("cym threefold", params);
            let (sol, classification) = match build_threefold(&input)? {
                Threefold::Built(sol, c) => (sol, c),
                Threefold::Inconsistent => {
                    emit(&cym.output.out, &report::to_json(&report::inconsistent_report(manifest)))?;
                    return Err(Exit(EXIT_INCONSISTENT, "the κ-system is inconsistent".into()));
                }
            };
            if !sol.positivity_holds {
                return Err(Exit(EXIT_POSITIVITY, "F is not positive on (-1, 1)".into()));
            }
            let verification = verify_threefold(&sol);
            let m = minimality_report(CymInput::Threefold(&sol), &cym.eps, cym.samples, tol)?;
            let r = report::threefold_report(manifest, &sol, classification, &verification, Some(Cym::from_minimality(&m)));
            emit(&cym.output.out, &report::to_json(&r))?;
            Ok(cym_exit(verification.passed(), &m))
        }
    }
}

fn run_survey(args: SurveyArgs) -> Result<u8, Exit> {
    for step in [&args.x1_step, &args.x2_step] {
        if *step <= Rational::from_integer(0.into()) {
            return Err(usage("grid steps must be positive"));
        }
    }
    let x1s = survey::axis(&args.x1_min, &args.x1_max, &args.x1_step);
    let x2s = survey::axis(&args.x2_min, &args.x2_max, &args.x2_step);
    let points = survey::grid(&x1s, &x2s);
    if points.is_empty() {
        return Err(usage("the grid has no points with 0 < |x| < 1 and x1 != x2"));
    }
    let manifest = Manifest::new("survey", args.parameters());
    let rows = survey::survey(&points, &args.s1, &args.s2);
    match &args.csv {
        Some(p) => survey::write_csv(create(p)?, &manifest, &rows)?,
        None => survey::write_csv(io::stdout().lock(), &manifest, &rows)?,
    }
    Ok(EXIT_PASS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Surface(a) => run_surface(a),
        Command::Threefold(a) => run_threefold(a),
        Command::Survey(a) => run_survey(a),
        Command::Cym(c) => run_cym(c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, msg)) => {
            eprintln!("kym: {msg}");
            ExitCode::from(code)
        }
    }
}
