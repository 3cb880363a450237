//! Admissible solutions on the ruled surface `P(O ⊕ L) → Σ`.
//!
//! The momentum profile is obtained by integrating the reduced ODE twice from
//! `z = -1`; the closed forms for `F` and `Scal` are kept separately so the
//! two routes can be compared exactly.

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::contraction::Contractions;
use crate::cohomology::{surface_gamma_class, surface_omega_class, SurfaceClass};
use crate::error::{invalid, Error, Result};
use crate::exactmath::{int, PoleSum, Poly, Rational};
use crate::positivity::{certify_positivity, PositivityCertificate};

/// Integer data of a surface solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SurfaceConfig {
    /// Degree of `L`.
    pub k: i64,
    /// Fixes `x = k / (k + k')`.
    pub kprime: i64,
    /// `a = k1`.
    pub k1: i64,
    /// `b = k2 (2k + k') k' / k²`; must be nonzero.
    pub k2: i64,
    /// Genus of the base curve.
    pub genus: i64,
}

impl SurfaceConfig {
    pub fn new(k: i64, kprime: i64, k1: i64, k2: i64, genus: i64) -> Result<Self> {
        let cfg = SurfaceConfig { k, kprime, k1, k2, genus };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(invalid(format!("k must be >= 1, got {}", self.k)));
        }
        if self.kprime < 1 {
            return Err(invalid(format!("k' must be >= 1, got {}", self.kprime)));
        }
        if self.k2 == 0 {
            return Err(invalid("k2 must be nonzero"));
        }
        if self.genus < 0 {
            return Err(invalid(format!("genus must be >= 0, got {}", self.genus)));
        }
        Ok(())
    }

    pub fn x(&self) -> Rational {
        Rational::new(self.k.into(), (self.k + self.kprime).into())
    }

    pub fn s_sigma(&self) -> Rational {
        Rational::new((2 * (1 - self.genus)).into(), self.k.into())
    }

    pub fn a(&self) -> Rational {
        int(self.k1)
    }

    pub fn b(&self) -> Rational {
        Rational::new(
            (self.k2 * (2 * self.k + self.kprime) * self.kprime).into(),
            (self.k * self.k).into(),
        )
    }

    pub fn params(&self) -> SurfaceParams {
        SurfaceParams {
            k: self.k,
            kprime: self.kprime,
            genus: self.genus,
            a: self.a(),
            b: self.b(),
        }
    }

    /// `α1/α0 = -((2 - s_Σ)k + 2k') / (8 k2² (k + k'))`, the integer form of
    /// the ratio once `x`, `a`, `b` are fixed from the integers.
    pub fn alpha1_over_alpha0_integer_form(&self) -> Rational {
        let k = int(self.k);
        let kp = int(self.kprime);
        let num = (int(2) - self.s_sigma()) * &k + int(2) * &kp;
        let den = int(8 * self.k2 * self.k2) * (k + kp);
        -(num / den)
    }
}

/// Raw surface parameters. `a` and `b` are free rationals here, so the
/// gauge class need not be integral; [`SurfaceConfig::params`] gives the
/// integral choice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SurfaceParams {
    pub k: i64,
    pub kprime: i64,
    pub genus: i64,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub a: Rational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub b: Rational,
}

impl SurfaceParams {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 || self.kprime < 1 {
            return Err(invalid(format!(
                "need k >= 1 and k' >= 1, got k = {}, k' = {}",
                self.k, self.kprime
            )));
        }
        if self.genus < 0 {
            return Err(invalid(format!("genus must be >= 0, got {}", self.genus)));
        }
        if self.b.is_zero() {
            return Err(invalid("b must be nonzero"));
        }
        Ok(())
    }

    pub fn x(&self) -> Rational {
        Rational::new(self.k.into(), (self.k + self.kprime).into())
    }

    pub fn s_sigma(&self) -> Rational {
        Rational::new((2 * (1 - self.genus)).into(), self.k.into())
    }
}

/// `(α1/α0, α2/α0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceRatios {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub alpha1_over_alpha0: Rational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub alpha2_over_alpha0: Rational,
}

/// The unique ratios for which the reduced ODE has a solution meeting the
/// boundary conditions.
pub fn surface_ratios(params: &SurfaceParams) -> Result<SurfaceRatios> {
    params.validate()?;
    let x = params.x();
    let s = params.s_sigma();
    let one = Rational::one();
    let (a, b) = (&params.a, &params.b);
    let x4 = num::pow(x.clone(), 4);
    let omx2 = num::pow(&one - &x * &x, 2);
    let b2x4 = b * b * &x4;
    let alpha1 = -(&omx2 * (int(2) - &s * &x)) / (int(8) * &b2x4);
    let alpha2 = (int(3) * &b2x4 * (int(2) + &s * &x) - a * a * (int(2) - &s * &x) * &omx2)
        / (int(2) * &b2x4);
    Ok(SurfaceRatios {
        alpha1_over_alpha0: alpha1,
        alpha2_over_alpha0: alpha2,
    })
}

/// Right-hand side of the reduced ODE
/// `F'' = 2 s x + 4 (α1/α0)(a² - b²x⁴/(1+xz)⁴)(1+xz) - (α2/α0)(1+xz)`.
pub fn surface_ode_rhs(params: &SurfaceParams, ratios: &SurfaceRatios) -> Result<PoleSum> {
    let x = params.x();
    let s = params.s_sigma();
    let u = PoleSum::linear_factor(&x);
    let (a, b) = (&params.a, &params.b);
    let r1 = &ratios.alpha1_over_alpha0;
    let r2 = &ratios.alpha2_over_alpha0;
    let mut rhs = PoleSum::constant(int(2) * &s * &x);
    // 4 r1 a² (1+xz) - r2 (1+xz)
    rhs = &rhs + &PoleSum::from_poly(u.scale(&(int(4) * r1 * a * a - r2)));
    // -4 r1 b² x⁴ (1+xz)^-3
    let c = -(int(4) * r1 * b * b * num::pow(x.clone(), 4));
    rhs = &rhs + &PoleSum::pole(x, 3, c)?;
    Ok(rhs)
}

/// Integrates the ODE twice from `z = -1` with `F(-1) = 0`, `F'(-1) = 2(1 - x)`.
pub fn integrate_profile(params: &SurfaceParams, ratios: &SurfaceRatios) -> Result<PoleSum> {
    let x = params.x();
    let minus_one = int(-1);
    let rhs = surface_ode_rhs(params, ratios)?;
    let slope = &rhs.antiderivative(&minus_one)? + &PoleSum::constant(int(2) * (int(1) - &x));
    Ok(slope.antiderivative(&minus_one)?)
}

fn profile_quadratic(x: &Rational, s: &Rational) -> Poly {
    let x2 = x * x;
    Poly::new(vec![
        int(4) + int(2) * &x2 - s * &x2 * x,
        int(8) * x,
        &x2 * (int(2) + s * x),
    ])
}

/// `F(z) = (1 - z²)(x²(2 + s x) z² + 8 x z + 4 + 2x² - s x³) / (4(1 + x z))`.
pub fn surface_closed_form_profile(x: &Rational, s: &Rational) -> Result<PoleSum> {
    let num = &Poly::from_i64(&[1, 0, -1]) * &profile_quadratic(x, s);
    Ok(PoleSum::from_poly(num)
        .divide_linear(x)?
        .scale(&Rational::new(1.into(), 4.into())))
}

/// The quartic factor `f(z) = x²(2 + s x) z² + 8 x z + 4 + 2x² - s x³`.
pub fn surface_profile_factor(x: &Rational, s: &Rational) -> Poly {
    profile_quadratic(x, s)
}

/// `Scal = 2 s x/(1 + x z) - F''/(1 + x z)`.
pub fn surface_scalar_curvature(params: &SurfaceParams, profile: &PoleSum) -> Result<PoleSum> {
    let x = params.x();
    let s = params.s_sigma();
    let num = &PoleSum::constant(int(2) * &s * &x) - &profile.derivative().derivative();
    Ok(num.divide_linear(&x)?)
}

/// `Scal = 3(2 + s x)/2 - (2 - s x)(1 - x²)² / (2(1 + x z)⁴)`.
pub fn surface_closed_form_scal(x: &Rational, s: &Rational) -> Result<PoleSum> {
    let one = Rational::one();
    let constant = int(3) * (int(2) + s * x) / int(2);
    let c = -((int(2) - s * x) * num::pow(&one - x * x, 2)) / int(2);
    Ok(&PoleSum::constant(constant) + &PoleSum::pole(x.clone(), 4, c)?)
}

/// `Λγ = 2a`, `Λ²(γ∧γ) = 4(a² - b²x⁴/(1 + x z)⁴)`.
pub fn surface_contractions(params: &SurfaceParams) -> Result<Contractions> {
    let x = params.x();
    let (a, b) = (&params.a, &params.b);
    let c = int(-4) * b * b * num::pow(x.clone(), 4);
    Ok(Contractions {
        lambda_gamma: int(2) * a,
        lambda2_gamma_wedge: &PoleSum::constant(int(4) * a * a) + &PoleSum::pole(x, 4, c)?,
    })
}

/// A verified surface solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSolution {
    /// The integer configuration, when the solution was built from one.
    pub config: Option<SurfaceConfig>,
    pub params: SurfaceParams,
    pub x: Rational,
    pub s_sigma: Rational,
    pub a: Rational,
    pub b: Rational,
    pub profile: PoleSum,
    pub ratios: SurfaceRatios,
    /// Constant on the right of `Λγ = z` (not the momentum coordinate).
    pub trace_constant: Rational,
    pub scal: PoleSum,
    pub omega_class: SurfaceClass,
    pub gamma_class: SurfaceClass,
    pub positivity_certificate: PositivityCertificate,
}

pub fn build_surface_solution(cfg: &SurfaceConfig) -> Result<SurfaceSolution> {
    cfg.validate()?;
    let mut sol = build_surface_solution_from_params(&cfg.params())?;
    sol.config = Some(*cfg);
    Ok(sol)
}

/// Builds a solution from raw rational `(a, b)`. The gauge class is reported
/// as computed and may be non-integral.
pub fn build_surface_solution_from_params(params: &SurfaceParams) -> Result<SurfaceSolution> {
    params.validate()?;
    let x = params.x();
    let s = params.s_sigma();
    let ratios = surface_ratios(params)?;
    let profile = integrate_profile(params, &ratios)?;

    let one = Rational::one();
    let (m1, p1) = (int(-1), int(1));
    let dprofile = profile.derivative();
    let boundary_ok = profile.eval(&m1)?.is_zero()
        && profile.eval(&p1)?.is_zero()
        && dprofile.eval(&m1)? == int(2) * (&one - &x)
        && dprofile.eval(&p1)? == int(-2) * (&one + &x);
    if !boundary_ok {
        return Err(Error::EndpointMismatch(format!("surface profile {profile}")));
    }
    let residual = &profile.derivative().derivative() - &surface_ode_rhs(params, &ratios)?;
    if !residual.is_zero() {
        return Err(Error::EndpointMismatch(format!("ODE residual {residual}")));
    }
    if !ratios.alpha1_over_alpha0.is_negative() {
        return Err(invalid(format!(
            "alpha1/alpha0 = {} is not negative",
            ratios.alpha1_over_alpha0
        )));
    }
    let certificate = certify_positivity(&profile);
    if !certificate.positive {
        return Err(Error::PositivityFailure(profile.to_string()));
    }

    let scal = surface_scalar_curvature(params, &profile)?;
    Ok(SurfaceSolution {
        config: None,
        params: params.clone(),
        trace_constant: int(2) * &params.a,
        a: params.a.clone(),
        b: params.b.clone(),
        omega_class: surface_omega_class(params.k, params.kprime)?,
        gamma_class: surface_gamma_class(params.k, params.kprime, &params.a, &params.b)?,
        x,
        s_sigma: s,
        profile,
        ratios,
        scal,
        positivity_certificate: certificate,
    })
}
