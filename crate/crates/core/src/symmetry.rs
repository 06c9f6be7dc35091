//! Discrete symmetries: axis reflections, time reflections (Wigner `T1`,
//! Pauli `T2`) and charge conjugation `C`, acting on a Hamiltonian `H(p)`.
//!
//! An element is a set of flipped axes `S`, a time flag (`ε_t = −1` when set)
//! and a conjugation flag. In momentum space the element leaves the equation
//! invariant iff a constant invertible `M` exists with
//!
//! * linear: `ε_t·M·H(Sp)·M⁻¹ = H(p)`,
//! * antilinear: `−ε_t·M·conj(H(−Sp))·M⁻¹ = H(p)`,
//!
//! where `conj` is entrywise conjugation. Antilinear elements also reverse
//! momentum because conjugating `e^{ipx}` gives `e^{−ipx}`.
//!
//! `M·H̃ − H·M = 0` is linear in `M`. Stacking it over sample momenta with the
//! row-major identity `vec(AXB) = (A ⊗ Bᵀ)·vec(X)` gives a matrix whose
//! nullspace holds every intertwiner.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::check::Check;
use crate::equations::{catalog_equation, q_projectors, EquationSpec, Params};
use crate::error::{Error, Result};
use crate::linalg::{
    condition_number, polar_unitary, svd_nullspace, CMatrix, RectMatrix, C64, NULLSPACE_TOL,
};
use crate::opcalc::{sample_momenta, ExclusionRules, MomentumPoint};

/// Relative holdout residual below which an intertwiner is accepted.
pub const HOLDOUT_TOL: f64 = 1e-7;
/// `σ_min/σ_max` above which non-invariance is asserted.
pub const CERTIFICATE_MIN: f64 = 1e-4;
/// Largest condition number accepted for an intertwiner.
pub const MAX_CONDITION: f64 = 1e6;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetryElement {
    pub flips: Vec<bool>,
    pub time_flip: bool,
    pub conjugate: bool,
}

impl SymmetryElement {
    pub fn identity(d: usize) -> Self {
        Self {
            flips: alloc::vec![false; d],
            time_flip: false,
            conjugate: false,
        }
    }

    pub fn d(&self) -> usize {
        self.flips.len()
    }

    /// Every element for momentum dimension `d`, grouped by reflected axes.
    pub fn all(d: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(1 << (d + 2));
        for mask in 0..(1u32 << d) {
            for (time_flip, conjugate) in [(false, false), (false, true), (true, false), (true, true)] {
                out.push(Self {
                    flips: (0..d).map(|k| mask & (1 << k) != 0).collect(),
                    time_flip,
                    conjugate,
                });
            }
        }
        out
    }

    /// Parses `P1|…|P4|T1|T2|C` joined by `*`, in any order; repeated
    /// factors cancel. `E` is the identity.
    pub fn parse(label: &str, d: usize) -> Result<Self> {
        let bad = || Error::InvalidLabel(label.to_string());
        let mut g = Self::identity(d);
        let label = label.trim();
        if label == "E" {
            return Ok(g);
        }
        for tok in label.split('*') {
            match tok.trim() {
                "T1" => {
                    g.time_flip ^= true;
                    g.conjugate ^= true;
                }
                "T2" => g.time_flip ^= true,
                "C" => g.conjugate ^= true,
                t if t.len() == 2 && t.starts_with('P') => {
                    let k = t[1..].parse::<usize>().map_err(|_| bad())?;
                    if k == 0 || k > d {
                        return Err(bad());
                    }
                    g.flips[k - 1] ^= true;
                }
                _ => return Err(bad()),
            }
        }
        Ok(g)
    }

    /// Canonical label: reflected axes, then `T1` (time with conjugation),
    /// `T2` (time alone) or `C`.
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self
            .flips
            .iter()
            .enumerate()
            .filter(|(_, f)| **f)
            .map(|(k, _)| alloc::format!("P{}", k + 1))
            .collect();
        match (self.time_flip, self.conjugate) {
            (true, true) => parts.push("T1".into()),
            (true, false) => parts.push("T2".into()),
            (false, true) => parts.push("C".into()),
            (false, false) => {}
        }
        if parts.is_empty() {
            "E".into()
        } else {
            parts.join("*")
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            flips: self.flips.iter().zip(&other.flips).map(|(a, b)| a ^ b).collect(),
            time_flip: self.time_flip ^ other.time_flip,
            conjugate: self.conjugate ^ other.conjugate,
        }
    }

    /// Momentum at which `H` is evaluated: `Sp`, or `−Sp` when antilinear.
    pub fn mapped(&self, p: &[f64]) -> Vec<f64> {
        p.iter()
            .zip(&self.flips)
            .map(|(x, f)| {
                let s = if *f ^ self.conjugate { -1.0 } else { 1.0 };
                s * x
            })
            .collect()
    }
}

impl fmt::Display for SymmetryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `(H̃(p), H(p))` such that invariance means `M·H̃ = H·M` for all `p`.
pub fn intertwine_condition(
    eq: &EquationSpec,
    g: &SymmetryElement,
    p: &[f64],
) -> Result<(CMatrix, CMatrix)> {
    if g.d() != eq.d {
        return Err(Error::DimensionMismatch(alloc::format!(
            "element on {} axes applied to a d = {} equation",
            g.d(),
            eq.d
        )));
    }
    let h = eq.hamiltonian.eval(p)?;
    let image = eq.hamiltonian.eval(&g.mapped(p))?;
    let eps_t = if g.time_flip { -1.0 } else { 1.0 };
    let tilde = if g.conjugate {
        image.conj().scale_re(-eps_t)
    } else {
        image.scale_re(eps_t)
    };
    Ok((tilde, h))
}

/// Sampling configuration for the intertwiner solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveConfig {
    pub n_fit: usize,
    pub n_holdout: usize,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            n_fit: 12,
            n_holdout: 4,
            seed: 42,
        }
    }
}

impl SolveConfig {
    fn validate(&self, d: usize) -> Result<()> {
        if self.n_fit < 2 * d + 4 || self.n_holdout < 4 {
            return Err(Error::InvalidParams(alloc::format!(
                "need at least {} fit and 4 holdout samples, got {} and {}",
                2 * d + 4,
                self.n_fit,
                self.n_holdout
            )));
        }
        Ok(())
    }

    pub fn fit_samples(&self, d: usize) -> Vec<MomentumPoint> {
        sample_momenta(d, self.n_fit, self.seed, &ExclusionRules::default())
    }

    pub fn holdout_samples(&self, d: usize) -> Vec<MomentumPoint> {
        sample_momenta(
            d,
            self.n_holdout,
            self.seed ^ 0x9e37_79b9_7f4a_7c15,
            &ExclusionRules::default(),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Intertwiner {
    /// Solved matrix, scaled to `‖M‖_F = √n` with its largest entry real
    /// and positive.
    pub matrix: CMatrix,
    /// Unitary factor of the polar decomposition, same phase convention.
    pub unitary_rep: CMatrix,
    /// `σ_min/σ_max` of the stacked constraint.
    pub residual: f64,
    /// Relative residual `‖MH̃ − HM‖_F / (‖M‖_F‖H‖_F)` on holdout momenta.
    pub holdout_residual: f64,
    pub nullity: usize,
    pub condition: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Invariant(Intertwiner),
    /// No intertwiner: `ratio = σ_min/σ_max` of the stacked constraint.
    NonInvariant { ratio: f64 },
}

impl Verdict {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Verdict::Invariant(_))
    }

    /// Holdout residual for invariant verdicts, singular-value ratio otherwise.
    pub fn residual(&self) -> f64 {
        match self {
            Verdict::Invariant(m) => m.holdout_residual,
            Verdict::NonInvariant { ratio } => *ratio,
        }
    }

    pub fn intertwiner(&self) -> Option<&Intertwiner> {
        match self {
            Verdict::Invariant(m) => Some(m),
            Verdict::NonInvariant { .. } => None,
        }
    }
}

/// Stacked constraint rows `(I ⊗ H̃ᵀ − H ⊗ I)` over the given momenta.
pub fn constraint_matrix(
    eq: &EquationSpec,
    g: &SymmetryElement,
    samples: &[MomentumPoint],
) -> Result<RectMatrix> {
    let n = eq.dim;
    let id = CMatrix::identity(n);
    let mut stack = RectMatrix::new(n * n);
    for p in samples {
        let (tilde, h) = intertwine_condition(eq, g, p)?;
        let block = &id.kron(&tilde.transpose()) - &h.kron(&id);
        for r in 0..n * n {
            stack.push_row(&block.as_slice()[r * n * n..(r + 1) * n * n]);
        }
    }
    Ok(stack)
}

/// `max` relative residual of `M·H̃ = H·M` over the given momenta.
pub fn relative_residual(
    eq: &EquationSpec,
    g: &SymmetryElement,
    m: &CMatrix,
    samples: &[MomentumPoint],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in samples {
        let (tilde, h) = intertwine_condition(eq, g, p)?;
        let r = (&(m * &tilde) - &(&h * m)).frobenius();
        worst = worst.max(r / (m.frobenius() * h.frobenius()));
    }
    Ok(worst)
}

/// Scales `m` to `‖m‖_F = √n` and rotates the phase so the first entry of
/// largest modulus is real and positive.
fn normalize_phase(m: &CMatrix) -> CMatrix {
    let data = m.as_slice();
    let biggest = data.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    let pivot = data
        .iter()
        .find(|z| z.norm() >= biggest * (1.0 - 1e-9))
        .copied()
        .unwrap_or(C64::new(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    let scale = libm::sqrt(m.dim() as f64) / m.frobenius();
    m.scale(phase * scale)
}

/// Solves for a constant intertwiner.
///
/// Returns `Indeterminate` when neither a verified intertwiner nor a
/// confident singular-value certificate is available.
pub fn solve_intertwiner(
    eq: &EquationSpec,
    g: &SymmetryElement,
    cfg: &SolveConfig,
) -> Result<Verdict> {
    cfg.validate(eq.d)?;
    let fit = cfg.fit_samples(eq.d);
    let holdout = cfg.holdout_samples(eq.d);
    let stack = constraint_matrix(eq, g, &fit)?;
    let ns = svd_nullspace(&stack, NULLSPACE_TOL)?;
    let ratio = ns.smallest_ratio();
    let indeterminate = || Error::Indeterminate {
        element: g.label(),
        ratio,
    };
    if ns.vectors.is_empty() {
        return if ratio > CERTIFICATE_MIN {
            Ok(Verdict::NonInvariant { ratio })
        } else {
            Err(indeterminate())
        };
    }
    let n = eq.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0123_4567_89ab_cdef);
    for attempt in 0..4 {
        let v: Vec<C64> = if ns.vectors.len() == 1 && attempt == 0 {
            ns.vectors[0].clone()
        } else {
            let mut acc = alloc::vec![C64::new(0.0, 0.0); n * n];
            for basis in &ns.vectors {
                let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                for (a, b) in acc.iter_mut().zip(basis) {
                    *a += c * b;
                }
            }
            acc
        };
        let m = normalize_phase(&CMatrix::from_vec(n, v)?);
        let cond = condition_number(&m);
        if cond > MAX_CONDITION {
            continue;
        }
        let holdout_residual = relative_residual(eq, g, &m, &holdout)?;
        if holdout_residual > HOLDOUT_TOL {
            return Err(indeterminate());
        }
        let unitary_rep = normalize_phase(&polar_unitary(&m)?);
        return Ok(Verdict::Invariant(Intertwiner {
            matrix: m,
            unitary_rep,
            residual: ratio,
            holdout_residual,
            nullity: ns.vectors.len(),
            condition: cond,
        }));
    }
    Err(indeterminate())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ElementReport {
    pub element: SymmetryElement,
    pub label: String,
    pub verdict: Verdict,
    /// Stated verdict for this element, when one is attached to the equation.
    pub claim: Option<bool>,
}

impl ElementReport {
    pub fn agrees(&self) -> Option<bool> {
        self.claim.map(|c| c == self.verdict.is_invariant())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub equation: String,
    pub elements: Vec<ElementReport>,
    /// Every attached claim reproduced.
    pub agreement: bool,
    /// Worst relative residual of composed intertwiners on holdout momenta.
    pub coherence_residual: f64,
    /// Compositions of invariant elements are invariant and their products
    /// of intertwiners are valid.
    pub coherent: bool,
}

impl ClassificationReport {
    pub fn get(&self, label: &str) -> Option<&ElementReport> {
        let d = self.elements.first()?.element.d();
        let g = SymmetryElement::parse(label, d).ok()?;
        self.elements.iter().find(|e| e.element == g)
    }

    pub fn invariant_labels(&self) -> Vec<&str> {
        self.elements
            .iter()
            .filter(|e| e.verdict.is_invariant())
            .map(|e| e.label.as_str())
            .collect()
    }
}

/// Classifies the equation over every element of its discrete group.
pub fn classify_equation(eq: &EquationSpec, cfg: &SolveConfig) -> Result<ClassificationReport> {
    let mut claims: Vec<(SymmetryElement, bool)> = Vec::new();
    for c in &eq.claims {
        claims.push((SymmetryElement::parse(&c.element, eq.d)?, c.invariant));
    }
    let mut elements = Vec::new();
    for g in SymmetryElement::all(eq.d) {
        let verdict = solve_intertwiner(eq, &g, cfg)?;
        let claim = claims.iter().find(|(e, _)| *e == g).map(|(_, c)| *c);
        elements.push(ElementReport {
            label: g.label(),
            element: g,
            verdict,
            claim,
        });
    }
    let agreement = elements.iter().all(|e| e.agrees() != Some(false));

    let holdout = cfg.holdout_samples(eq.d);
    let mut coherent = true;
    let mut coherence_residual: f64 = 0.0;
    for a in &elements {
        let Some(ma) = a.verdict.intertwiner() else { continue };
        for b in &elements {
            let Some(mb) = b.verdict.intertwiner() else { continue };
            let ab = a.element.compose(&b.element);
            let target = elements.iter().find(|e| e.element == ab).expect("group closed");
            if !target.verdict.is_invariant() {
                coherent = false;
                continue;
            }
            let right = if a.element.conjugate {
                mb.matrix.conj()
            } else {
                mb.matrix.clone()
            };
            let product = &ma.matrix * &right;
            let r = relative_residual(eq, &ab, &product, &holdout)?;
            coherence_residual = coherence_residual.max(r);
        }
    }
    if coherence_residual > HOLDOUT_TOL {
        coherent = false;
    }
    Ok(ClassificationReport {
        equation: eq.name.clone(),
        elements,
        agreement,
        coherence_residual,
        coherent,
    })
}

/// Relations between `Q± = ½(1 ± γ₃γ₄)` and the solved 4×4 intertwiners of
/// `chi_4c`: reflections of a transverse axis and both time reflections swap
/// `Q₊` and `Q₋`; `P3` and `C` preserve them.
pub fn verify_projection_relations(cfg: &SolveConfig, params: Params) -> Result<Vec<Check>> {
    let eq = catalog_equation("chi_4c", params)?;
    let (qp, qm) = q_projectors();
    let cases = [
        ("P1", true),
        ("P2", true),
        ("T1", true),
        ("T2", true),
        ("P3", false),
        ("C", false),
    ];
    let mut out = Vec::new();
    for (label, swaps) in cases {
        let g = SymmetryElement::parse(label, 3)?;
        let m = match solve_intertwiner(&eq, &g, cfg)? {
            Verdict::Invariant(m) => m.matrix,
            Verdict::NonInvariant { .. } => return Err(Error::MissingIntertwiner(label.into())),
        };
        let inv = m.inverse()?;
        let act = |q: &CMatrix| {
            let q = if g.conjugate { q.conj() } else { q.clone() };
            &(&m * &q) * &inv
        };
        let (tp, tm) = if swaps { (&qm, &qp) } else { (&qp, &qm) };
        let r = act(&qp).dist(tp).max(act(&qm).dist(tm));
        let relation = if swaps { "swaps" } else { "preserves" };
        out.push(Check::new(
            alloc::format!("projection.{label}_{relation}_q"),
            r,
            crate::equations::TRANSFORM_TOL,
        ));
    }
    Ok(out)
}
