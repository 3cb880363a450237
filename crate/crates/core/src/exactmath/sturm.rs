use num::{Signed, Zero};
use serde::Serialize;

use super::{ExactError, Poly, Rational};

/// Signed remainder chain of the square-free part of a polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> Result<Self, ExactError> {
        if p.is_zero() {
            return Err(ExactError::ZeroPolynomial);
        }
        let dp = p.derivative();
        let g = p.gcd(&dp);
        // Square-free part: same distinct roots, all simple.
        let sf = p.exact_div(&g).expect("gcd divides p");
        let mut chain = vec![sf.clone(), sf.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        Ok(SturmChain { chain })
    }

    /// The square-free polynomial the chain is built on.
    pub fn base(&self) -> &Poly {
        &self.chain[0]
    }

    /// Sign variations at `z`, zeros skipped.
    pub fn variations(&self, z: &Rational) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in &self.chain {
            let v = p.eval(z);
            if v.is_zero() {
                continue;
            }
            let pos = v.is_positive();
            if last.is_some_and(|l| l != pos) {
                count += 1;
            }
            last = Some(pos);
        }
        count
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    ///
    /// For a square-free base the variation count at a root equals the count
    /// just to its right, so `V(lo) - V(hi)` excludes `lo` and includes `hi`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations(lo) - self.variations(hi)
    }
}

/// Certified root count of a polynomial on `(lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootIsolation {
    #[serde(serialize_with = "crate::serde_util::poly_str")]
    pub polynomial: Poly,
    #[serde(serialize_with = "crate::serde_util::rational_pair")]
    pub interval: (Rational, Rational),
    /// Distinct real roots in `(lo, hi]`.
    pub root_count: usize,
    /// Whether `lo` itself is a root (not included in `root_count`).
    pub root_at_lo: bool,
    /// Disjoint half-open intervals `(a, b]`, each holding exactly one root.
    #[serde(serialize_with = "crate::serde_util::rational_pairs")]
    pub isolating_intervals: Vec<(Rational, Rational)>,
}

impl RootIsolation {
    /// Roots on the closed interval `[lo, hi]`.
    pub fn closed_count(&self) -> usize {
        self.root_count + usize::from(self.root_at_lo)
    }

    /// Roots on the open interval `(lo, hi)`.
    pub fn open_count(&self) -> usize {
        let at_hi = self.polynomial.eval(&self.interval.1).is_zero();
        self.root_count - usize::from(at_hi)
    }
}

/// Counts and isolates the distinct real roots of `p` in `(lo, hi]` with an
/// exact Sturm chain, then bisects until every interval holds one root.
pub fn sturm_root_count(p: &Poly, lo: &Rational, hi: &Rational) -> Result<RootIsolation, ExactError> {
    if lo >= hi {
        return Err(ExactError::EmptyInterval(Box::new((lo.clone(), hi.clone()))));
    }
    let chain = SturmChain::new(p)?;
    let root_count = chain.count(lo, hi);
    let mut isolating_intervals = Vec::with_capacity(root_count);
    let mut stack = vec![(lo.clone(), hi.clone(), root_count)];
    let two = Rational::from_integer(2.into());
    while let Some((a, b, n)) = stack.pop() {
        match n {
            0 => {}
            1 => isolating_intervals.push((a, b)),
            _ => {
                let mid = (&a + &b) / &two;
                let left = chain.count(&a, &mid);
                // right half first on the stack so output stays ascending
                stack.push((mid.clone(), b, n - left));
                stack.push((a, mid, left));
            }
        }
    }
    Ok(RootIsolation {
        polynomial: p.clone(),
        interval: (lo.clone(), hi.clone()),
        root_count,
        root_at_lo: p.eval(lo).is_zero(),
        isolating_intervals,
    })
}
