//! Pauli and Dirac matrices, spin matrices, and Clifford-relation checks.
//!
//! Two frozen Dirac representations are provided:
//!
//! * `rep26`: the block representation in which the four-component massless
//!   equation splits into two two-component equations:
//!   `γ₀ = diag(σ₃, −σ₃)`, `γ_a = diag(iσ_a, −iσ_a)` (a = 1, 2),
//!   `γ₃ = [[0, i],[i, 0]]`, `γ₄ = [[0, i],[−i, 0]]`.
//! * `weyl`: `γ₀ = [[0, 1],[1, 0]]`, `γ_k = [[0, −σ_k],[σ_k, 0]]`,
//!   `γ₄ = iγ₀γ₁γ₂γ₃`, chosen so that `γ₀γ_k = diag(σ_k, −σ_k)`.
//!
//! Signature is (+, −, −, −) for γ₀..γ₃ and γ₄² = +1 in both sets.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, I, ONE, ZERO};

/// Standard Pauli matrix σ_k, k ∈ {1, 2, 3}.
pub fn pauli(k: usize) -> Result<CMatrix> {
    let rows = match k {
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => return Err(Error::IndexOutOfRange(alloc::format!("Pauli index {k}"))),
    };
    CMatrix::from_rows(&rows)
}

/// σ_k for a known-good index.
pub(crate) fn sigma(k: usize) -> CMatrix {
    pauli(k).expect("Pauli index in 1..=3")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Representation {
    Rep26,
    Weyl,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Rep26 => "rep26",
            Representation::Weyl => "weyl",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Five mutually anticommuting 4×4 matrices γ₀..γ₄.
#[derive(Clone, Debug)]
pub struct GammaSet {
    pub rep: Representation,
    gammas: [CMatrix; 5],
    /// Expected value of γ_A², indexed by A.
    pub squares: [f64; 5],
}

impl GammaSet {
    pub fn name(&self) -> &'static str {
        self.rep.name()
    }

    /// γ_A for A ∈ 0..=4.
    pub fn gamma(&self, a: usize) -> &CMatrix {
        &self.gammas[a]
    }

    pub fn gammas(&self) -> &[CMatrix; 5] {
        &self.gammas
    }

    /// Replaces one gamma matrix; used to build perturbed sets for negative checks.
    pub fn with_gamma(mut self, a: usize, m: CMatrix) -> Self {
        self.gammas[a] = m;
        self
    }
}

fn offdiag(b: &CMatrix, c: &CMatrix) -> CMatrix {
    let z = CMatrix::zeros(b.dim());
    CMatrix::from_blocks(&z, b, c, &z)
}

fn diag(a: &CMatrix, d: &CMatrix) -> CMatrix {
    let z = CMatrix::zeros(a.dim());
    CMatrix::from_blocks(a, &z, &z, d)
}

pub fn gamma_set(name: &str) -> Result<GammaSet> {
    let rep = match name {
        "rep26" => Representation::Rep26,
        "weyl" => Representation::Weyl,
        other => return Err(Error::UnknownGammaSet(other.to_string())),
    };
    Ok(gamma_set_for(rep))
}

pub fn gamma_set_for(rep: Representation) -> GammaSet {
    let one = CMatrix::identity(2);
    let gammas = match rep {
        Representation::Rep26 => [
            diag(&sigma(3), &-sigma(3)),
            diag(&sigma(1).scale(I), &sigma(1).scale(-I)),
            diag(&sigma(2).scale(I), &sigma(2).scale(-I)),
            offdiag(&one.scale(I), &one.scale(I)),
            offdiag(&one.scale(I), &one.scale(-I)),
        ],
        Representation::Weyl => {
            let g0 = offdiag(&one, &one);
            let gk: Vec<CMatrix> = (1..=3).map(|k| offdiag(&-sigma(k), &sigma(k))).collect();
            let g4 = (&(&(&g0 * &gk[0]) * &gk[1]) * &gk[2]).scale(I);
            [g0, gk[0].clone(), gk[1].clone(), gk[2].clone(), g4]
        }
    };
    GammaSet {
        rep,
        gammas,
        squares: [1.0, -1.0, -1.0, -1.0, 1.0],
    }
}

/// Spin matrix S_AB, A, B ∈ 0..=5.
#[derive(Clone, Debug)]
pub struct SpinMatrix {
    pub indices: (usize, usize),
    pub value: CMatrix,
}

/// S_μν = (i/4)[γ_μ, γ_ν] for μ, ν ≤ 4, S_μ5 = (i/2)γ_μ, with S_BA = −S_AB.
pub fn spin_matrix(g: &GammaSet, a: usize, b: usize) -> Result<SpinMatrix> {
    if a > 5 || b > 5 {
        return Err(Error::IndexOutOfRange(alloc::format!("spin index ({a}, {b})")));
    }
    if a == b {
        return Err(Error::RepeatedIndex(a));
    }
    let value = if b == 5 {
        g.gamma(a).scale(C64::new(0.0, 0.5))
    } else if a == 5 {
        g.gamma(b).scale(C64::new(0.0, -0.5))
    } else {
        g.gamma(a).commutator(g.gamma(b)).scale(C64::new(0.0, 0.25))
    };
    Ok(SpinMatrix {
        indices: (a, b),
        value,
    })
}

/// Value-only accessor for indices known to be valid.
pub(crate) fn spin(g: &GammaSet, a: usize, b: usize) -> CMatrix {
    spin_matrix(g, a, b).expect("valid spin indices").value
}

#[derive(Clone, Debug)]
pub struct CliffordReport {
    pub set: String,
    pub residual: f64,
    pub pass: bool,
}

pub const CLIFFORD_TOL: f64 = 1e-12;

/// Max residual over γ_A² = s_A, {γ_A, γ_B} = 0 (A ≠ B), and the Hermiticity
/// pattern (γ₀, γ₄ Hermitian; γ₁, γ₂, γ₃ anti-Hermitian).
pub fn verify_clifford(g: &GammaSet) -> CliffordReport {
    let one = CMatrix::identity(4);
    let mut residual: f64 = 0.0;
    for a in 0..5 {
        let ga = g.gamma(a);
        residual = residual.max((ga * ga).dist(&one.scale_re(g.squares[a])));
        for b in (a + 1)..5 {
            residual = residual.max(ga.anticommutator(g.gamma(b)).max_abs());
        }
        let adj = ga.adjoint();
        let herm = if g.squares[a] > 0.0 {
            adj.dist(ga)
        } else {
            adj.dist(&-ga)
        };
        residual = residual.max(herm);
    }
    CliffordReport {
        set: g.name().to_string(),
        residual,
        pass: residual <= CLIFFORD_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::expm;

    #[test]
    fn pauli_algebra() {
        assert_eq!(pauli(3).unwrap(), CMatrix::from_diag(&[ONE, -ONE]));
        assert!((&sigma(1) * &sigma(2)).dist(&sigma(3).scale(I)) < 1e-15);
        for k in 1..=3 {
            assert!((&sigma(k) * &sigma(k)).dist(&CMatrix::identity(2)) < 1e-15);
        }
        assert!(pauli(0).is_err());
        assert!(pauli(4).is_err());
    }

    #[test]
    fn rep26_blocks() {
        let g = gamma_set("rep26").unwrap();
        let g0 = g.gamma(0);
        assert_eq!(g0.block(0, 0), sigma(3));
        assert_eq!(g0.block(1, 1), -sigma(3));
        assert_eq!(g0.block(0, 1), CMatrix::zeros(2));
        assert!(g.gamma(3).anticommutator(g.gamma(4)).max_abs() < 1e-15);
    }

    #[test]
    fn weyl_products_split() {
        let g = gamma_set("weyl").unwrap();
        for k in 1..=3 {
            let prod = g.gamma(0) * g.gamma(k);
            assert!(prod.block(0, 0).dist(&sigma(k)) < 1e-15);
            assert!(prod.block(1, 1).dist(&-sigma(k)) < 1e-15);
            assert!(prod.block(0, 1).max_abs() < 1e-15);
        }
    }

    #[test]
    fn clifford_residuals() {
        for name in ["rep26", "weyl"] {
            let rep = verify_clifford(&gamma_set(name).unwrap());
            assert!(rep.pass, "{name}: {}", rep.residual);
            assert_eq!(rep.residual, 0.0);
        }
    }

    #[test]
    fn perturbed_set_fails() {
        let g = gamma_set("rep26").unwrap();
        let bad = g.gamma(1).scale_re(1.01);
        let rep = verify_clifford(&g.with_gamma(1, bad));
        // γ₁² = −1.0201: off by 0.0201
        assert!(!rep.pass);
        assert!((rep.residual - 0.0201).abs() < 1e-12, "{}", rep.residual);
    }

    #[test]
    fn spin_matrix_values() {
        let g = gamma_set("rep26").unwrap();
        let s53 = spin_matrix(&g, 5, 3).unwrap().value;
        assert!(s53.dist(&g.gamma(3).scale(C64::new(0.0, -0.5))) < 1e-15);
        let s45 = spin_matrix(&g, 4, 5).unwrap().value;
        assert!(s45.dist(&g.gamma(4).scale(C64::new(0.0, 0.5))) < 1e-15);
        // S₁₂ restricted to either two-component block is σ₃/2
        let s12 = spin(&g, 1, 2);
        assert!(s12.block(0, 0).dist(&sigma(3).scale_re(0.5)) < 1e-15);
        assert!(s12.block(1, 1).dist(&sigma(3).scale_re(0.5)) < 1e-15);
        assert!(matches!(spin_matrix(&g, 2, 2), Err(Error::RepeatedIndex(2))));
        assert!(spin_matrix(&g, 6, 1).is_err());
    }

    #[test]
    fn spin_antisymmetry() {
        let g = gamma_set("rep26").unwrap();
        for a in 0..6 {
            for b in 0..6 {
                if a != b {
                    let ab = spin(&g, a, b);
                    let ba = spin(&g, b, a);
                    assert!((&ab + &ba).max_abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn exponential_of_gamma3_is_u1() {
        let g = gamma_set("rep26").unwrap();
        for e3 in [1.0, -1.0] {
            let arg = g.gamma(3).scale_re(core::f64::consts::FRAC_PI_4 * e3);
            let u = expm(&arg).unwrap();
            let closed = (&CMatrix::identity(4) + &g.gamma(3).scale_re(e3)).scale_re(core::f64::consts::FRAC_1_SQRT_2);
            assert!(u.dist(&closed) < 1e-12);
        }
    }

    #[test]
    fn projectors_from_gamma3_gamma4() {
        let g = gamma_set("rep26").unwrap();
        let one = CMatrix::identity(4);
        let g34 = g.gamma(3) * g.gamma(4);
        assert!((&g34 * &g34).dist(&one) < 1e-15);
        let qp = (&one + &g34).scale_re(0.5);
        let qm = (&one - &g34).scale_re(0.5);
        assert!((&qp * &qp).dist(&qp) < 1e-15);
        assert!((&qp * &qm).max_abs() < 1e-15);
        assert!((&qp + &qm).dist(&one) < 1e-15);
        // Q± = ½ ± iS₄₃
        assert!(qp.dist(&(&one.scale_re(0.5) + &spin(&g, 4, 3).scale(I))) < 1e-15);
    }
}
