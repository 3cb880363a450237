//! Contractions of the gauge curvature against the Kähler form.

use crate::exactmath::{PoleSum, Rational};

/// `Λγ` and `Λ²(γ∧γ)` for the curvature form `γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contractions {
    pub lambda_gamma: Rational,
    pub lambda2_gamma_wedge: PoleSum,
}

impl Contractions {
    /// `|F_A|² = |Λγ|² - ½ Λ²(γ∧γ)`.
    pub fn fa_norm_sq(&self) -> PoleSum {
        let half = Rational::new(1.into(), 2.into());
        &PoleSum::constant(&self.lambda_gamma * &self.lambda_gamma)
            - &self.lambda2_gamma_wedge.scale(&half)
    }
}

/// `α0 Scal + α1 Λ²(γ∧γ) - α2`, divided by `α0`.
pub fn coupled_residual(scal: &PoleSum, lambda2: &PoleSum, r1: &Rational, r2: &Rational) -> PoleSum {
    &(scal + &lambda2.scale(r1)) - &PoleSum::constant(r2.clone())
}
