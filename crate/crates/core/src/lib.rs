//! Exact construction and verification of explicit solutions to the coupled
//! Kähler–Yang–Mills equations on admissible ruled manifolds.
//!
//! Two families are covered: Hirzebruch-type ruled surfaces
//! `P(O ⊕ L) → Σ` ([`surface`]) and projective bundles over a product of two
//! Riemann surfaces ([`threefold`]). Every curvature quantity lives in the
//! [`exactmath::PoleSum`] class, so all identities are checked with exact
//! rational arithmetic; only the Calabi–Yang–Mills integrals in [`cym`] use
//! floating point.

pub mod cohomology;
pub mod contraction;
pub mod cym;
pub mod error;
pub mod exactmath;
pub mod positivity;
mod serde_util;
pub mod surface;
pub mod threefold;
pub mod verifier;

pub use error::{Error, Result};
pub use exactmath::{PoleSum, Poly, Rational};
