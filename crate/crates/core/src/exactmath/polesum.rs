use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use super::{check_pole_parameter, format_rational, ExactError, Poly, Rational};

/// One term `coeff * (1 + x z)^(-order)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PoleTerm {
    pub x: Rational,
    pub order: u32,
    pub coeff: Rational,
}

/// A function of the momentum coordinate of the form
/// `p(z) + Σ c_{x,j} (1 + x z)^(-j)` with `0 < |x| < 1`.
///
/// Pole terms are keyed by `(x, j)`: equal keys merge and zero coefficients
/// are dropped on every insertion, so structural equality is equality of
/// functions. Every pole `z = -1/x` lies strictly outside `[-1, 1]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PoleSum {
    poly: Poly,
    poles: BTreeMap<(Rational, u32), Rational>,
}

impl PoleSum {
    pub fn zero() -> Self {
        PoleSum::default()
    }

    pub fn constant(c: Rational) -> Self {
        PoleSum::from_poly(Poly::constant(c))
    }

    pub fn from_poly(poly: Poly) -> Self {
        PoleSum {
            poly,
            poles: BTreeMap::new(),
        }
    }

    /// `coeff * (1 + x z)^(-order)`; `order = 0` gives the constant `coeff`.
    pub fn pole(x: Rational, order: u32, coeff: Rational) -> Result<Self, ExactError> {
        check_pole_parameter(&x)?;
        let mut out = PoleSum::zero();
        out.add_term(x, order, coeff);
        Ok(out)
    }

    /// `1 + x z` as a polynomial.
    pub fn linear_factor(x: &Rational) -> Poly {
        Poly::linear(Rational::one(), x.clone())
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn poles(&self) -> impl Iterator<Item = PoleTerm> + '_ {
        self.poles.iter().map(|((x, j), c)| PoleTerm {
            x: x.clone(),
            order: *j,
            coeff: c.clone(),
        })
    }

    pub fn pole_coeff(&self, x: &Rational, order: u32) -> Rational {
        self.poles
            .get(&(x.clone(), order))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.poles.is_empty()
    }

    /// `Some(c)` when the function is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        if !self.poles.is_empty() {
            return None;
        }
        match self.poly.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.poly.coeff(0)),
            _ => None,
        }
    }

    /// Distinct pole parameters in ascending order.
    pub fn pole_parameters(&self) -> Vec<Rational> {
        let mut xs: Vec<Rational> = self.poles.keys().map(|(x, _)| x.clone()).collect();
        xs.dedup();
        xs
    }

    /// Highest order present for each pole parameter.
    pub fn denominator_factors(&self) -> Vec<(Rational, u32)> {
        let mut out: Vec<(Rational, u32)> = Vec::new();
        for (x, j) in self.poles.keys() {
            match out.last_mut() {
                Some((y, m)) if y == x => *m = (*m).max(*j),
                _ => out.push((x.clone(), *j)),
            }
        }
        out
    }

    fn add_term(&mut self, x: Rational, order: u32, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        if order == 0 {
            self.poly = &self.poly + &Poly::constant(coeff);
            return;
        }
        let key = (x, order);
        let merged = match self.poles.remove(&key) {
            Some(c) => c + coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.poles.insert(key, merged);
        }
    }

    pub fn scale(&self, c: &Rational) -> PoleSum {
        if c.is_zero() {
            return PoleSum::zero();
        }
        PoleSum {
            poly: self.poly.scale(c),
            poles: self.poles.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn eval(&self, z: &Rational) -> Result<Rational, ExactError> {
        let mut acc = self.poly.eval(z);
        for ((x, j), c) in &self.poles {
            let u = Rational::one() + x * z;
            if u.is_zero() {
                return Err(ExactError::EvaluationAtPole(z.clone()));
            }
            acc += c / num::pow(u, *j as usize);
        }
        Ok(acc)
    }

    /// Exact `d/dz`. A term `(x, j, c)` becomes `(x, j + 1, -j x c)`.
    pub fn derivative(&self) -> PoleSum {
        let mut out = PoleSum::from_poly(self.poly.derivative());
        for ((x, j), c) in &self.poles {
            let factor = -(x * Rational::from_integer((*j as i64).into()));
            out.add_term(x.clone(), j + 1, c * factor);
        }
        out
    }

    /// Antiderivative `g` with `g' = self` and `g(base_point) = 0`.
    ///
    /// Order-one poles would need `log(1 + x z)` and are rejected.
    pub fn antiderivative(&self, base_point: &Rational) -> Result<PoleSum, ExactError> {
        let mut out = PoleSum::from_poly(self.poly.integral());
        for ((x, j), c) in &self.poles {
            if *j == 1 {
                return Err(ExactError::LogarithmRequired { x: x.clone() });
            }
            // ∫ c u^{-j} dz = c / (x (1 - j)) u^{1-j}
            let k = Rational::from_integer((1 - *j as i64).into());
            out.add_term(x.clone(), j - 1, c / (x * k));
        }
        let shift = out.eval(base_point)?;
        out.add_term(Rational::zero(), 0, -shift);
        Ok(out)
    }

    /// Multiplication by a polynomial. Each pole term is rewritten with the
    /// polynomial expanded in powers of its own `1 + x z`.
    pub fn mul_poly(&self, p: &Poly) -> PoleSum {
        let mut out = PoleSum::from_poly(&self.poly * p);
        if p.is_zero() {
            return out;
        }
        for ((x, j), c) in &self.poles {
            let shifted = p.in_shifted_basis(x);
            let u = PoleSum::linear_factor(x);
            for (m, d) in shifted.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let coeff = c * d;
                let m = m as u32;
                if m >= *j {
                    out.poly = &out.poly + &u.pow(m - j).scale(&coeff);
                } else {
                    out.add_term(x.clone(), j - m, coeff);
                }
            }
        }
        out
    }

    /// `self / (1 + x z)` in canonical form.
    ///
    /// The polynomial part contributes its remainder `p(-1/x)` as a new
    /// order-one pole, poles at the same `x` raise their order, and poles at a
    /// different `y` are split with
    /// `1/((1+xz)(1+yz)) = (x/(1+xz) - y/(1+yz)) / (x - y)`.
    pub fn divide_linear(&self, x: &Rational) -> Result<PoleSum, ExactError> {
        check_pole_parameter(x)?;
        let (q, r) = self.poly.div_rem(&PoleSum::linear_factor(x));
        let mut out = PoleSum::from_poly(q);
        out.add_term(x.clone(), 1, r.coeff(0));
        for ((y, j), c) in &self.poles {
            if y == x {
                out.add_term(x.clone(), j + 1, c.clone());
                continue;
            }
            // c v^{-j} u^{-1} = c [ x/(x-y) v^{-(j-1)} u^{-1} - y/(x-y) v^{-j} ]
            let dx = x - y;
            let a = x / &dx;
            let b = y / &dx;
            let mut weight = c.clone();
            for order in (1..=*j).rev() {
                out.add_term(y.clone(), order, -(&weight * &b));
                weight = &weight * &a;
            }
            out.add_term(x.clone(), 1, weight);
        }
        Ok(out)
    }

    /// `self` as `num / den` with `den = Π (1 + x_i z)^(max j_i)`.
    pub fn to_rational(&self) -> (Poly, Poly) {
        let factors = self.denominator_factors();
        let den = factors.iter().fold(Poly::one(), |acc, (x, m)| {
            &acc * &PoleSum::linear_factor(x).pow(*m)
        });
        let mut num = &self.poly * &den;
        for ((x, j), c) in &self.poles {
            let mut part = Poly::constant(c.clone());
            for (y, m) in &factors {
                let e = if y == x { m - j } else { *m };
                part = &part * &PoleSum::linear_factor(y).pow(e);
            }
            num = &num + &part;
        }
        (num, den)
    }

    /// Partial-fraction expansion of `num / Π (1 + x_i z)^(m_i)`.
    pub fn from_fraction(num: &Poly, factors: &[(Rational, u32)]) -> Result<PoleSum, ExactError> {
        let mut out = PoleSum::from_poly(num.clone());
        for (x, m) in factors {
            for _ in 0..*m {
                out = out.divide_linear(x)?;
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for PoleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PoleSum({self})")
    }
}

impl fmt::Display for PoleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.poly.is_zero() {
            write!(f, "{}", self.poly)?;
            wrote = true;
        }
        for ((x, j), c) in &self.poles {
            let sign = if c.is_negative() { "-" } else { "+" };
            if wrote {
                write!(f, " {sign} ")?;
            } else if sign == "-" {
                write!(f, "-")?;
            }
            wrote = true;
            write!(
                f,
                "{}*(1 + {}*z)^-{}",
                format_rational(&c.abs()),
                format_rational(x),
                j
            )?;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &PoleSum {
    type Output = PoleSum;
    fn add(self, rhs: &PoleSum) -> PoleSum {
        let mut out = self.clone();
        out.poly = &out.poly + &rhs.poly;
        for ((x, j), c) in &rhs.poles {
            out.add_term(x.clone(), *j, c.clone());
        }
        out
    }
}

impl Sub for &PoleSum {
    type Output = PoleSum;
    fn sub(self, rhs: &PoleSum) -> PoleSum {
        self + &(-rhs)
    }
}

impl Neg for &PoleSum {
    type Output = PoleSum;
    fn neg(self) -> PoleSum {
        self.scale(&-Rational::one())
    }
}

impl Mul for &PoleSum {
    type Output = PoleSum;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &PoleSum) -> PoleSum {
        let mut out = self.mul_poly(&rhs.poly);
        for ((x, j), c) in &rhs.poles {
            let mut part = self.clone();
            for _ in 0..*j {
                // x was validated when the term was created
                part = part.divide_linear(x).expect("valid pole parameter");
            }
            out = &out + &part.scale(c);
        }
        out
    }
}

impl Add for PoleSum {
    type Output = PoleSum;
    fn add(self, rhs: PoleSum) -> PoleSum {
        &self + &rhs
    }
}

impl Sub for PoleSum {
    type Output = PoleSum;
    fn sub(self, rhs: PoleSum) -> PoleSum {
        &self - &rhs
    }
}

impl Mul for PoleSum {
    type Output = PoleSum;
    fn mul(self, rhs: PoleSum) -> PoleSum {
        &self * &rhs
    }
}

impl Neg for PoleSum {
    type Output = PoleSum;
    fn neg(self) -> PoleSum {
        -&self
    }
}

impl From<Poly> for PoleSum {
    fn from(p: Poly) -> Self {
        PoleSum::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    fn inv(x: Rational, j: u32) -> PoleSum {
        PoleSum::pole(x, j, int(1)).unwrap()
    }

    #[test]
    fn derivative_of_polynomial() {
        let f = PoleSum::from_poly(Poly::from_i64(&[1, 0, -1]));
        assert_eq!(f.derivative(), PoleSum::from_poly(Poly::from_i64(&[0, -2])));
    }

    #[test]
    fn derivative_of_simple_pole() {
        let f = inv(rat(1, 2), 1);
        let expected = PoleSum::pole(rat(1, 2), 2, rat(-1, 2)).unwrap();
        assert_eq!(f.derivative(), expected);
    }

    #[test]
    fn antiderivative_of_linear() {
        let f = PoleSum::from_poly(Poly::from_i64(&[0, 2]));
        let g = f.antiderivative(&int(-1)).unwrap();
        assert_eq!(g, PoleSum::from_poly(Poly::from_i64(&[-1, 0, 1])));
    }

    #[test]
    fn antiderivative_of_double_pole() {
        let (x, c) = (rat(1, 3), rat(5, 2));
        let f = PoleSum::pole(x.clone(), 2, c.clone()).unwrap();
        let g = f.antiderivative(&int(-1)).unwrap();
        let expected = &PoleSum::pole(x.clone(), 1, -(&c / &x)).unwrap()
            + &PoleSum::constant(&c / (&x * (int(1) - &x)));
        assert_eq!(g, expected);
        assert_eq!(g.derivative(), f);
    }

    #[test]
    fn antiderivative_rejects_simple_pole() {
        let f = inv(rat(1, 2), 1);
        assert!(matches!(
            f.antiderivative(&int(-1)),
            Err(ExactError::LogarithmRequired { .. })
        ));
    }

    #[test]
    fn divide_linear_cases() {
        let x = rat(1, 2);
        let u = PoleSum::from_poly(PoleSum::linear_factor(&x));
        assert_eq!(u.divide_linear(&x).unwrap(), PoleSum::constant(int(1)));
        assert_eq!(
            PoleSum::constant(int(1)).divide_linear(&x).unwrap(),
            inv(x.clone(), 1)
        );
    }

    #[test]
    fn divide_linear_across_poles_clears_back() {
        let (x1, x2) = (rat(1, 2), rat(-1, 3));
        let f = inv(x2.clone(), 1);
        let q = f.divide_linear(&x1).unwrap();
        // 1/((1+x1 z)(1+x2 z)) = [x1/(1+x1 z) - x2/(1+x2 z)] / (x1 - x2)
        let d = &x1 - &x2;
        let expected = &PoleSum::pole(x1.clone(), 1, &x1 / &d).unwrap()
            + &PoleSum::pole(x2.clone(), 1, -(&x2 / &d)).unwrap();
        assert_eq!(q, expected);
        assert_eq!(q.mul_poly(&PoleSum::linear_factor(&x1)), f);
    }

    #[test]
    fn divide_linear_higher_order_cross_terms() {
        let (x1, x2) = (rat(2, 5), rat(-3, 7));
        let f = &PoleSum::pole(x2.clone(), 3, rat(7, 4)).unwrap()
            + &PoleSum::from_poly(Poly::from_i64(&[1, -2, 3]));
        let q = f.divide_linear(&x1).unwrap();
        assert_eq!(q.mul_poly(&PoleSum::linear_factor(&x1)), f);
    }

    #[test]
    fn to_rational_simple_and_zero() {
        let x = rat(1, 2);
        let (n, d) = inv(x.clone(), 1).to_rational();
        assert_eq!(n, Poly::one());
        assert_eq!(d, PoleSum::linear_factor(&x));
        let (n, d) = PoleSum::zero().to_rational();
        assert!(n.is_zero());
        assert_eq!(d, Poly::one());
    }

    #[test]
    fn from_fraction_inverts_to_rational() {
        let f = &(&inv(rat(1, 2), 3) + &inv(rat(-1, 3), 2).scale(&rat(-4, 9)))
            + &PoleSum::from_poly(Poly::from_i64(&[2, 0, 1]));
        let (n, _) = f.to_rational();
        assert_eq!(PoleSum::from_fraction(&n, &f.denominator_factors()).unwrap(), f);
    }

    #[test]
    fn mul_matches_eval() {
        let f = &inv(rat(1, 2), 2) + &PoleSum::from_poly(Poly::from_i64(&[0, 1]));
        let g = &inv(rat(-1, 4), 1).scale(&int(3)) + &inv(rat(1, 2), 1);
        let h = &f * &g;
        for k in -5..=5 {
            let z = rat(k, 6);
            assert_eq!(h.eval(&z).unwrap(), f.eval(&z).unwrap() * g.eval(&z).unwrap());
        }
    }

    #[test]
    fn merge_and_cancel() {
        let a = inv(rat(2, 4), 2);
        let b = PoleSum::pole(rat(1, 2), 2, int(-1)).unwrap();
        assert!((&a + &b).is_zero());
        assert_eq!((&a + &a).pole_coeff(&rat(1, 2), 2), int(2));
    }

    #[test]
    fn rejects_out_of_range_poles() {
        assert!(PoleSum::pole(int(1), 1, int(1)).is_err());
        assert!(PoleSum::pole(int(0), 1, int(1)).is_err());
        assert!(PoleSum::constant(int(1)).divide_linear(&rat(3, 2)).is_err());
    }

    #[test]
    fn display_is_canonical() {
        let f = &PoleSum::from_poly(Poly::from_i64(&[1, 0, -1]))
            + &PoleSum::pole(rat(1, 2), 2, rat(-3, 4)).unwrap();
        assert_eq!(f.to_string(), "1 - z^2 - 3/4*(1 + 1/2*z)^-2");
        assert_eq!(PoleSum::zero().to_string(), "0");
    }
}
