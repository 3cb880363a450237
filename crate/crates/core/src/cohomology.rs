//! Second-cohomology coordinates for the ruled surface and the threefold.
//!
//! Classes are stored divided by `2π`, so integrality is a plain integer test
//! on the coordinates.
//!
//! Surface basis: `{E0, C}` with `E0·E0 = k`, `E0·C = 1`, `C·C = 0`.
//! Threefold basis: `{[ω1/(2π k1)], [ω2/(2π k2)], [η/(4π)]}`; integer
//! coordinates in this basis are the integrality criterion used throughout.

use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::exactmath::{int, is_integer, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceClass {
    /// Coefficient of `E0`.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub m1: Rational,
    /// Coefficient of the fibre `C`.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub m2: Rational,
    /// Degree of the line bundle, `E0·E0 = k`.
    pub k: i64,
}

impl SurfaceClass {
    /// `⟨Γ, E0⟩ = k m1 + m2`.
    pub fn pairing_zero_section(&self) -> Rational {
        int(self.k) * &self.m1 + &self.m2
    }

    /// `⟨Γ, C⟩ = m1`.
    pub fn pairing_fibre(&self) -> Rational {
        self.m1.clone()
    }

    pub fn is_integral(&self) -> bool {
        is_integer(&self.m1) && is_integer(&self.m2)
    }

    pub fn scale(&self, c: &Rational) -> SurfaceClass {
        SurfaceClass {
            m1: &self.m1 * c,
            m2: &self.m2 * c,
            k: self.k,
        }
    }

    pub fn add(&self, other: &SurfaceClass) -> SurfaceClass {
        SurfaceClass {
            m1: &self.m1 + &other.m1,
            m2: &self.m2 + &other.m2,
            k: self.k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreefoldClass {
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub c1: Rational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub c2: Rational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub c3: Rational,
    pub k1: i64,
    pub k2: i64,
}

impl ThreefoldClass {
    pub fn coords(&self) -> [&Rational; 3] {
        [&self.c1, &self.c2, &self.c3]
    }

    pub fn is_integral(&self) -> bool {
        self.coords().into_iter().all(is_integer)
    }

    /// Smallest positive integer `N` with `N` times the class integral.
    pub fn minimal_rescaling(&self) -> BigInt {
        self.coords()
            .into_iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn scale(&self, c: &Rational) -> ThreefoldClass {
        ThreefoldClass {
            c1: &self.c1 * c,
            c2: &self.c2 * c,
            c3: &self.c3 * c,
            ..*self
        }
    }

    pub fn add(&self, other: &ThreefoldClass) -> ThreefoldClass {
        ThreefoldClass {
            c1: &self.c1 + &other.c1,
            c2: &self.c2 + &other.c2,
            c3: &self.c3 + &other.c3,
            ..*self
        }
    }
}

fn surface_x(k: i64, kprime: i64) -> Result<Rational> {
    if k < 1 || kprime < 1 {
        return Err(invalid(format!("need k >= 1 and k' >= 1, got k = {k}, k' = {kprime}")));
    }
    Ok(Rational::new(k.into(), (k + kprime).into()))
}

/// `[ω/2π] = 2 E0 + ((1 - x) k / x) C` with `x = k/(k + k')`, i.e. `(2, k')`.
pub fn surface_omega_class(k: i64, kprime: i64) -> Result<SurfaceClass> {
    let x = surface_x(k, kprime)?;
    let one = Rational::one();
    Ok(SurfaceClass {
        m1: int(2),
        m2: (&one - &x) * int(k) / &x,
        k,
    })
}

/// `[γ_{a,b}/2π]` for `γ = a ω + b α`.
pub fn surface_gamma_class(k: i64, kprime: i64, a: &Rational, b: &Rational) -> Result<SurfaceClass> {
    let x = surface_x(k, kprime)?;
    let one = Rational::one();
    let x2 = &x * &x;
    let omx = &one - &x;
    let m1 = int(2) * (a * (&one - &x2) - b * &x2) / (&one - &x2);
    let m2 = int(k) * (a * &omx * &omx + b * &x2) / (&x * &omx);
    Ok(SurfaceClass { m1, m2, k })
}

/// `[α/2π] = x/(1 - x²) (-2x E0 + k(1 + x) C)`.
pub fn surface_alpha_class(k: i64, kprime: i64) -> Result<SurfaceClass> {
    let x = surface_x(k, kprime)?;
    let one = Rational::one();
    let pre = &x / (&one - &x * &x);
    Ok(SurfaceClass {
        m1: &pre * int(-2) * &x,
        m2: &pre * int(k) * (&one + &x),
        k,
    })
}

/// Sufficient integrality condition: `a ∈ ℤ` and `b` an integer multiple of
/// `(2k + k')k'/k²`.
pub fn surface_integrality_check(a: &Rational, b: &Rational, k: i64, kprime: i64) -> Result<bool> {
    surface_x(k, kprime)?;
    let unit = Rational::new(((2 * k + kprime) * kprime).into(), (k * k).into());
    Ok(is_integer(a) && is_integer(&(b / unit)))
}

fn check_threefold(x1: &Rational, x2: &Rational, k1: i64, k2: i64) -> Result<()> {
    let one = Rational::one();
    for (x, k) in [(x1, k1), (x2, k2)] {
        if x.is_zero() || x.abs() >= one {
            return Err(invalid(format!("need 0 < |x| < 1, got {x}")));
        }
        if k == 0 || (k > 0) != x.is_positive() {
            return Err(invalid(format!("degree {k} must be nonzero with the sign of x = {x}")));
        }
    }
    if x1 == x2 {
        return Err(invalid("x1 and x2 must differ"));
    }
    Ok(())
}

/// `[ω/2π]` in the primitive basis: `(k1/x1, k2/x2, 2)`.
pub fn threefold_omega_class(x1: &Rational, x2: &Rational, k1: i64, k2: i64) -> Result<ThreefoldClass> {
    check_threefold(x1, x2, k1, k2)?;
    Ok(ThreefoldClass {
        c1: int(k1) / x1,
        c2: int(k2) / x2,
        c3: int(2),
        k1,
        k2,
    })
}

/// Coefficients `(n/π, m/π)` of `[α] = m[ω1/2π] + m[ω2/2π] + n[η/4π]`.
pub fn threefold_alpha_coefficients(x1: &Rational, x2: &Rational) -> (Rational, Rational) {
    let one = Rational::one();
    let d = (&one - x1 * x1) * (&one - x2 * x2);
    let n = int(-4) * (x1 + x2) / &d;
    let m = int(2) * (&one + x1 * x2) / &d;
    (n, m)
}

/// `[α/2π]` in the primitive basis.
pub fn threefold_alpha_class(x1: &Rational, x2: &Rational, k1: i64, k2: i64) -> Result<ThreefoldClass> {
    check_threefold(x1, x2, k1, k2)?;
    let (n, m) = threefold_alpha_coefficients(x1, x2);
    // m[ω_i/2π] = m k_i [ω_i/(2π k_i)], and dividing by 2π halves the π-units.
    let half = Rational::new(1.into(), 2.into());
    Ok(ThreefoldClass {
        c1: &m * int(k1) * &half,
        c2: &m * int(k2) * &half,
        c3: &n * &half,
        k1,
        k2,
    })
}

/// `[γ_{a,b}/2π]` in the primitive basis, from the displayed coefficients
/// `2π(a/x_i + b(1 + x1x2)/D)` and `4π(a - b(x1 + x2)/D)`, `D = (1-x1²)(1-x2²)`.
pub fn threefold_gamma_class(
    x1: &Rational,
    x2: &Rational,
    a: &Rational,
    b: &Rational,
    k1: i64,
    k2: i64,
) -> Result<ThreefoldClass> {
    check_threefold(x1, x2, k1, k2)?;
    let one = Rational::one();
    let d = (&one - x1 * x1) * (&one - x2 * x2);
    let shared = b * (&one + x1 * x2) / &d;
    Ok(ThreefoldClass {
        c1: int(k1) * (a / x1 + &shared),
        c2: int(k2) * (a / x2 + &shared),
        c3: int(2) * (a - b * (x1 + x2) / &d),
        k1,
        k2,
    })
}
