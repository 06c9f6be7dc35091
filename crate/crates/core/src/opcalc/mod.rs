//! Momentum-space operator calculus.
//!
//! Positions act as `x_k = i∂/∂p_k`. Matrix-valued functions of momentum are
//! [`OperatorField`]s with exact symbolic derivatives, and first-order
//! differential operators are [`DiffOp1`] values.

mod diffop;
mod field;
pub mod scalar;

pub use diffop::{
    commutator_of_jets, conjugate_by_unitary, diffop_commutator, Commutator, DiffOp1, Jet, PointOp,
    PreparedOp, UNITARITY_GATE,
};
pub use field::OperatorField;
pub use scalar::Scalar;

use alloc::vec::Vec;
use core::ops::Deref;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::CMatrix;

/// A point of momentum space with `d` components.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentumPoint(pub Vec<f64>);

impl MomentumPoint {
    pub fn new(components: impl Into<Vec<f64>>) -> Self {
        Self(components.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn energy(&self) -> f64 {
        let e2 = self.0.iter().take(3).map(|x| x * x).sum::<f64>();
        libm::sqrt(e2)
    }
}

impl Deref for MomentumPoint {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for MomentumPoint {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Regions of momentum space kept away from sampled points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExclusionRules {
    /// Minimum `|p₃|` (only applied when `d ≥ 3`).
    pub min_abs_p3: f64,
    /// Minimum `p₁² + p₂²` (only applied when `d ≥ 2`).
    pub min_transverse_sq: f64,
}

impl Default for ExclusionRules {
    fn default() -> Self {
        Self {
            min_abs_p3: 0.05,
            min_transverse_sq: 0.0025,
        }
    }
}

impl ExclusionRules {
    pub fn allows(&self, p: &[f64]) -> bool {
        let p3_ok = p.len() < 3 || libm::fabs(p[2]) >= self.min_abs_p3;
        let tr_ok = p.len() < 2 || p[0] * p[0] + p[1] * p[1] >= self.min_transverse_sq;
        p3_ok && tr_ok
    }
}

/// Deterministic sample of `n` momenta in `d` dimensions.
///
/// Every component has magnitude in `[0.1, 10]` and a random sign. For
/// `d ≥ 3` the sign of `p₃` alternates (positive at even indices, negative at
/// odd ones) so both half-spaces are always covered.
pub fn sample_momenta(d: usize, n: usize, seed: u64, rules: &ExclusionRules) -> Vec<MomentumPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut p: Vec<f64> = (0..d)
            .map(|_| {
                let mag: f64 = rng.random_range(0.1..=10.0);
                if rng.random_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        if d >= 3 {
            let sign = if out.len() % 2 == 0 { 1.0 } else { -1.0 };
            p[2] = sign * libm::fabs(p[2]);
        }
        if rules.allows(&p) {
            out.push(MomentumPoint(p));
        }
    }
    out
}

/// Exact `∂f/∂p_{k+1}` at `p`. The field itself is evaluated first so that an
/// excluded point is reported even where the derivative would be finite.
pub fn field_derivative(f: &OperatorField, p: &[f64], k: usize) -> Result<CMatrix> {
    f.eval(p)?;
    f.deriv(p, k)
}

#[cfg(test)]
mod tests {
    use super::scalar::named::*;
    use super::*;
    use crate::error::Error;

    #[test]
    fn samples_are_deterministic_and_respect_rules() {
        let rules = ExclusionRules::default();
        let a = sample_momenta(3, 12, 42, &rules);
        assert_eq!(a, sample_momenta(3, 12, 42, &rules));
        assert_ne!(a, sample_momenta(3, 12, 43, &rules));
        assert!(a.iter().all(|p| libm::fabs(p[2]) >= 0.05 && rules.allows(p)));
        assert!(a.iter().any(|p| p[2] > 0.0) && a.iter().any(|p| p[2] < 0.0));
        for p in &a {
            assert!(p.iter().all(|x| (0.1..=10.0).contains(&libm::fabs(*x))));
        }
        assert_eq!(sample_momenta(3, 4, 42, &rules).len(), 4);
    }

    #[test]
    fn derivative_of_energy_and_abs() {
        let e = OperatorField::scalar(&energy(), 1, 3);
        let d = field_derivative(&e, &[1.0, 2.0, 2.0], 0).unwrap();
        assert!((d[(0, 0)].re - 1.0 / 3.0).abs() < 1e-15);
        let a = OperatorField::scalar(&abs_p3(), 1, 3);
        assert_eq!(field_derivative(&a, &[1.0, 1.0, -2.0], 2).unwrap()[(0, 0)].re, -1.0);
        let s = OperatorField::scalar(&e3(), 1, 3);
        assert_eq!(field_derivative(&s, &[1.0, 1.0, 0.0], 2), Err(Error::SingularPoint));
    }

    #[test]
    fn derivative_matches_richardson() {
        let inv = Scalar::constant(1.0) / (energy() + abs_p3());
        let f = OperatorField::scalar(&inv, 1, 3);
        let p = sample_momenta(3, 1, 7, &ExclusionRules::default()).remove(0);
        let g = |h: f64| {
            let mut a = p.0.clone();
            let mut b = p.0.clone();
            a[1] += h;
            b[1] -= h;
            (inv.eval(&a).unwrap() - inv.eval(&b).unwrap()) / (2.0 * h)
        };
        let rich = (4.0 * g(1e-4) - g(2e-4)) / 3.0;
        let exact = field_derivative(&f, &p, 1).unwrap()[(0, 0)].re;
        assert!((exact - rich).abs() <= 1e-8 * exact.abs().max(1e-3));
    }
}
