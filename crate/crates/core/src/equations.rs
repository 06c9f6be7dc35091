//! Catalog of Hamiltonians, unitary transformations and projectors, with the
//! checks that tie them together.
//!
//! Four-component objects use the `rep26` gamma matrices. Two-component
//! Hamiltonians are written with Pauli matrices directly: `iσ₃σ_a p_a`
//! expands to `−σ₂p₁ + σ₁p₂`.
//!
//! The five-dimensional equation uses `iγ₄` for its fourth momentum term.
//! With `γ₄² = +1` that is the combination that keeps `H` Hermitian and gives
//! `H² = (p₁² + … + p₄² + κ²)·1`.
//!
//! The `kappa_±` equations `{γ_μp^μ + κ(1 ± e₃γ₄)}Ψ = 0` are stored in the
//! Hamiltonian form `γ₀γ_kp_k − κγ₀(1 ± e₃γ₄)`, which is not Hermitian; they
//! only feed the symmetry classifier.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use crate::check::Check;
use crate::clifford::{gamma_set_for, sigma, spin, GammaSet, Representation};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, I};
use crate::opcalc::scalar::named::*;
use crate::opcalc::{sample_momenta, ExclusionRules, MomentumPoint, OperatorField, Scalar};

/// Tolerance for transform, projector and block checks.
pub const TRANSFORM_TOL: f64 = 1e-9;
/// Tolerance for unitarity and dispersion checks.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Physical parameters; each defaults to 1.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Params {
    pub mass: f64,
    pub kappa: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            mass: 1.0,
            kappa: 1.0,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        if !self.mass.is_finite() || self.mass < 0.0 {
            return Err(Error::InvalidParams(alloc::format!(
                "mass must be finite and non-negative, got {}",
                self.mass
            )));
        }
        if !self.kappa.is_finite() {
            return Err(Error::InvalidParams(alloc::format!(
                "kappa must be finite, got {}",
                self.kappa
            )));
        }
        Ok(())
    }
}

/// Catalog switches used for negative controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CatalogOptions {
    /// Build `chi_plus` with `σ₂` in place of `σ₁` on the `p₂` term.
    pub corrupt_chi: bool,
}

/// An invariance or non-invariance statement for one discrete element.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Claim {
    pub element: String,
    pub invariant: bool,
}

#[derive(Clone, Debug)]
pub struct EquationSpec {
    pub name: String,
    pub dim: usize,
    pub d: usize,
    pub hamiltonian: OperatorField,
    pub params: Params,
    pub claims: Vec<Claim>,
    /// Scalar `s(p)` with `H² = s·1`.
    pub dispersion: Option<Scalar>,
    pub hermitian: bool,
    pub rep: Option<Representation>,
}

/// Every equation name accepted by [`catalog_equation`], in display order.
pub const EQUATIONS: &[&str] = &[
    "dirac_massless",
    "weyl_plus",
    "weyl_minus",
    "chi_4c",
    "chi_plus",
    "chi_minus",
    "phi_diag",
    "weyl_canonical",
    "flat_plus",
    "flat_minus",
    "desitter",
    "dirac_massive",
    "hprime",
    "spinless_plus",
    "spinless_minus",
    "kappa_plus",
    "kappa_minus",
    "chi_diag",
    "chi_tilde",
];

fn rep26() -> GammaSet {
    gamma_set_for(Representation::Rep26)
}

fn lin(terms: &[(Scalar, CMatrix)], d: usize) -> OperatorField {
    let dim = terms[0].1.dim();
    OperatorField::sum_or_zero(
        terms.iter().map(|(s, m)| OperatorField::scalar_times(s, m.clone(), d)),
        dim,
        d,
    )
}

fn one() -> Scalar {
    Scalar::constant(1.0)
}

fn claims(list: &[(&str, bool)]) -> Vec<Claim> {
    list.iter()
        .map(|(e, inv)| Claim {
            element: e.to_string(),
            invariant: *inv,
        })
        .collect()
}

fn all_invariant(d: usize) -> Vec<Claim> {
    let mut out = Vec::new();
    for bits in 0..(1u32 << (d + 2)) {
        let mut parts: Vec<String> = (0..d)
            .filter(|k| bits & (1 << k) != 0)
            .map(|k| alloc::format!("P{}", k + 1))
            .collect();
        if bits & (1 << d) != 0 {
            parts.push("T2".into());
        }
        if bits & (1 << (d + 1)) != 0 {
            parts.push("C".into());
        }
        let label = if parts.is_empty() { "E".into() } else { parts.join("*") };
        out.push(Claim {
            element: label,
            invariant: true,
        });
    }
    out
}

const WEYL_CLAIMS: &[(&str, bool)] = &[
    ("P1*P2*P3", false),
    ("C", false),
    ("P1*P2*P3*C", true),
    ("T1", true),
];

const CHI_CLAIMS: &[(&str, bool)] = &[
    ("P3", true),
    ("C", true),
    ("P1", false),
    ("P2", false),
    ("T1", false),
    ("T2", false),
    ("P3*C", true),
    ("P1*P2*P3*C", true),
    ("P1*C*T1", true),
    ("P2*C*T2", true),
    ("P3*C*T1", false),
    ("P3*C*T2", false),
    ("P1*C", false),
    ("P2*C", false),
];

const FLAT_CLAIMS: &[(&str, bool)] = &[
    ("P1*P2", true),
    ("C", true),
    ("P1*P2*C", true),
    ("P1*C*T1", true),
    ("P1*C*T2", true),
    ("P2*C*T1", true),
    ("P2*C*T2", true),
    ("P1", false),
    ("P2", false),
    ("T1", false),
    ("T2", false),
    ("P1*C", false),
    ("P2*C", false),
    ("C*T1", false),
    ("C*T2", false),
];

const DESITTER_CLAIMS: &[(&str, bool)] = &[
    ("T1", true),
    ("T2*C", true),
    ("P1", false),
    ("P2", false),
    ("P3", false),
    ("P4", false),
    ("T2", false),
    ("C", false),
];

const KAPPA_CLAIMS: &[(&str, bool)] = &[
    ("P1", false),
    ("P2", false),
    ("T1", false),
    ("T2", false),
    ("P3", true),
    ("C", true),
];

/// `−σ₂p₁ + σ₁p₂`, the transverse part shared by every two-component equation.
fn transverse_2x2(d: usize) -> OperatorField {
    lin(&[(-p(1), sigma(2)), (p(2), sigma(1))], d)
}

/// `γ₀γ_a p_a` for `a = 1, 2`.
fn transverse_4x4(g: &GammaSet) -> OperatorField {
    let g01 = g.gamma(0) * g.gamma(1);
    let g02 = g.gamma(0) * g.gamma(2);
    lin(&[(p(1), g01), (p(2), g02)], 3)
}

pub fn catalog_equation(name: &str, params: Params) -> Result<EquationSpec> {
    catalog_equation_with(name, params, CatalogOptions::default())
}

pub fn catalog_equation_with(
    name: &str,
    params: Params,
    opts: CatalogOptions,
) -> Result<EquationSpec> {
    params.validate()?;
    let g = rep26();
    let (m, kappa) = (params.mass, params.kappa);
    let e2 = || p(1).square() + p(2).square() + p(3).square();
    let massive2 = || e2() + m * m;
    let g0 = g.gamma(0).clone();
    let g0g = |k: usize| g.gamma(0) * g.gamma(k);

    let spec = |h: OperatorField,
                d: usize,
                claims: Vec<Claim>,
                dispersion: Option<Scalar>,
                rep: Option<Representation>| EquationSpec {
        name: name.to_string(),
        dim: h.dim(),
        d,
        hamiltonian: h,
        params,
        claims,
        dispersion,
        hermitian: true,
        rep,
    };
    let r26 = Some(Representation::Rep26);

    let eq = match name {
        "dirac_massless" => spec(
            lin(&[(p(1), g0g(1)), (p(2), g0g(2)), (p(3), g0g(3))], 3),
            3,
            all_invariant(3),
            Some(e2()),
            r26,
        ),
        "weyl_plus" | "weyl_minus" => {
            let s = if name == "weyl_plus" { 1.0 } else { -1.0 };
            spec(
                lin(&[(p(1) * s, sigma(1)), (p(2) * s, sigma(2)), (p(3) * s, sigma(3))], 3),
                3,
                claims(WEYL_CLAIMS),
                Some(e2()),
                None,
            )
        }
        "chi_4c" => spec(
            transverse_4x4(&g).add(&OperatorField::scalar_times(&abs_p3(), g0, 3)),
            3,
            Vec::new(),
            Some(e2()),
            r26,
        ),
        "chi_plus" | "chi_minus" => {
            let s = if name == "chi_plus" { 1.0 } else { -1.0 };
            let h = if opts.corrupt_chi && name == "chi_plus" {
                lin(&[(-p(1), sigma(2)), (p(2), sigma(2)), (abs_p3(), sigma(3))], 3)
            } else {
                transverse_2x2(3).add(&OperatorField::scalar_times(&(abs_p3() * s), sigma(3), 3))
            };
            let c = if name == "chi_plus" { claims(CHI_CLAIMS) } else { Vec::new() };
            spec(h, 3, c, Some(e2()), None)
        }
        "phi_diag" => spec(
            OperatorField::scalar_times(&energy(), g0, 3),
            3,
            Vec::new(),
            Some(e2()),
            r26,
        ),
        "weyl_canonical" => spec(
            OperatorField::scalar_times(&(e3() * energy()), sigma(3), 3),
            3,
            Vec::new(),
            Some(e2()),
            None,
        ),
        "flat_plus" | "flat_minus" => {
            let s = if name == "flat_plus" { 1.0 } else { -1.0 };
            spec(
                transverse_2x2(2).add(&OperatorField::constant(sigma(3).scale_re(s * m), 2)),
                2,
                claims(FLAT_CLAIMS),
                Some(p(1).square() + p(2).square() + m * m),
                None,
            )
        }
        "desitter" => {
            let g04 = g0g(4).scale(I);
            let h = lin(
                &[
                    (p(1), g0g(1)),
                    (p(2), g0g(2)),
                    (p(3), g0g(3)),
                    (p(4), g04),
                    (Scalar::constant(kappa), g0),
                ],
                4,
            );
            let disp = p(1).square() + p(2).square() + p(3).square() + p(4).square() + kappa * kappa;
            spec(h, 4, claims(DESITTER_CLAIMS), Some(disp), r26)
        }
        "dirac_massive" => spec(
            lin(
                &[
                    (p(1), g0g(1)),
                    (p(2), g0g(2)),
                    (p(3), g0g(3)),
                    (Scalar::constant(m), g0),
                ],
                3,
            ),
            3,
            Vec::new(),
            Some(massive2()),
            r26,
        ),
        "hprime" => spec(
            transverse_4x4(&g).add(&OperatorField::scalar_times(&q3(m), g0, 3)),
            3,
            Vec::new(),
            Some(massive2()),
            r26,
        ),
        "spinless_plus" | "spinless_minus" => {
            let s = if name == "spinless_plus" { 1.0 } else { -1.0 };
            spec(
                transverse_2x2(3).add(&OperatorField::scalar_times(&(q3(m) * s), sigma(3), 3)),
                3,
                Vec::new(),
                Some(massive2()),
                None,
            )
        }
        "kappa_plus" | "kappa_minus" => {
            let s = if name == "kappa_plus" { 1.0 } else { -1.0 };
            let g04 = g0g(4);
            let h = lin(
                &[
                    (p(1), g0g(1)),
                    (p(2), g0g(2)),
                    (p(3), g0g(3)),
                    (Scalar::constant(-kappa), g0),
                    (e3() * (-kappa * s), g04),
                ],
                3,
            );
            let mut e = spec(h, 3, claims(KAPPA_CLAIMS), None, r26);
            e.hermitian = false;
            e
        }
        "chi_diag" => spec(
            OperatorField::scalar_times(&energy(), sigma(3), 3),
            3,
            Vec::new(),
            Some(e2()),
            None,
        ),
        "chi_tilde" => spec(
            transverse_4x4(&g).add(&OperatorField::scalar_times(&p(3), g0, 3)),
            3,
            Vec::new(),
            Some(e2()),
            r26,
        ),
        other => return Err(Error::UnknownEquation(other.to_string())),
    };
    if eq.hermitian {
        let probes = sample_momenta(eq.d, 4, 0, &ExclusionRules::default());
        for pt in &probes {
            let r = eq.hamiltonian.eval(pt)?.hermiticity_residual();
            if r > IDENTITY_TOL {
                return Err(Error::InvalidParams(alloc::format!(
                    "{name}: Hamiltonian not Hermitian (residual {r:e})"
                )));
            }
        }
    }
    Ok(eq)
}

#[derive(Clone, Debug)]
pub struct UnitarySpec {
    pub name: String,
    pub dim: usize,
    pub d: usize,
    pub closed: OperatorField,
    pub exponential: Option<OperatorField>,
    pub source: String,
    pub target: String,
    /// Verification is limited to `p₃ > 0`.
    pub positive_p3_only: bool,
}

/// Every unitary name accepted by [`catalog_unitary`].
pub const UNITARIES: &[&str] = &["U1", "U2", "U21", "tU1", "tU2", "tU", "V1", "V", "V2"];

/// `(E + |p₃|)·1 + Σ_a c_a(p)·M_a`, normalized by `√(2E(E + |p₃|))`.
fn fw_type(base: &Scalar, terms: &[(Scalar, CMatrix)]) -> OperatorField {
    let dim = terms[0].1.dim();
    let norm = (energy() * base * 2.0).sqrt();
    let inv = one() / norm;
    let mut all: Vec<(Scalar, CMatrix)> = vec![(base * &inv, CMatrix::identity(dim))];
    all.extend(terms.iter().map(|(s, m)| (s * &inv, m.clone())));
    lin(&all, 3)
}

pub fn catalog_unitary(name: &str, params: Params) -> Result<UnitarySpec> {
    params.validate()?;
    let g = rep26();
    let m = params.mass;
    let rho = transverse();
    let theta = (&rho / &abs_p3()).atan();
    let e_abs = energy() + abs_p3();

    let unitary = |closed: OperatorField,
                   exponential: Option<OperatorField>,
                   source: &str,
                   target: &str,
                   positive: bool| UnitarySpec {
        name: name.to_string(),
        dim: closed.dim(),
        d: closed.arity(),
        closed,
        exponential,
        source: source.to_string(),
        target: target.to_string(),
        positive_p3_only: positive,
    };

    let u1_closed = || {
        lin(
            &[
                (Scalar::constant(FRAC_1_SQRT_2), CMatrix::identity(4)),
                (e3() * FRAC_1_SQRT_2, g.gamma(3).clone()),
            ],
            3,
        )
    };
    let u2_closed = || {
        fw_type(
            &e_abs,
            &[(p(1), g.gamma(1).clone()), (p(2), g.gamma(2).clone())],
        )
    };
    let tu1 = || {
        OperatorField::constant(
            (&CMatrix::identity(4) + g.gamma(3)).scale_re(FRAC_1_SQRT_2),
            3,
        )
    };
    let tu2 = || {
        fw_type(
            &(energy() + p(3)),
            &[(p(1), g.gamma(1).clone()), (p(2), g.gamma(2).clone())],
        )
    };

    let u = match name {
        "U1" => {
            // ½iπ·S₅₃·e₃
            let gen = spin(&g, 5, 3).scale(C64::new(0.0, core::f64::consts::FRAC_PI_2));
            let exp = OperatorField::scalar_times(&e3(), gen, 3).expm();
            unitary(u1_closed(), Some(exp), "dirac_massless", "chi_4c", false)
        }
        "U2" => {
            // i·S₅ₐpₐ/ρ·arctan(ρ/|p₃|)
            let coeff = &theta / &rho;
            let gen = lin(
                &[
                    (p(1) * &coeff, spin(&g, 5, 1).scale(I)),
                    (p(2) * &coeff, spin(&g, 5, 2).scale(I)),
                ],
                3,
            );
            unitary(u2_closed(), Some(gen.expm()), "chi_4c", "phi_diag", false)
        }
        "U21" => unitary(
            u2_closed().mul(&u1_closed()),
            None,
            "dirac_massless",
            "phi_diag",
            false,
        ),
        "tU1" => unitary(tu1(), None, "dirac_massless", "chi_tilde", false),
        "tU2" => unitary(tu2(), None, "chi_tilde", "phi_diag", true),
        "tU" => unitary(tu2().mul(&tu1()), None, "dirac_massless", "phi_diag", true),
        "V1" => {
            // i·S_a p_a/ρ·arctan(ρ/|p₃|), S_k = σ_k/2
            let coeff = &theta / &rho;
            let gen = lin(
                &[
                    (p(1) * &coeff, sigma(1).scale(C64::new(0.0, 0.5))),
                    (p(2) * &coeff, sigma(2).scale(C64::new(0.0, 0.5))),
                ],
                3,
            );
            let closed = fw_type(
                &e_abs,
                &[(p(1), sigma(1).scale(I)), (p(2), sigma(2).scale(I))],
            );
            unitary(closed, Some(gen.expm()), "chi_plus", "chi_diag", false)
        }
        "V" => {
            let xi = [
                p(1) - p(2) * e3(),
                p(2) + e3() * p(1),
                e3() * &e_abs,
            ];
            let xi_p = &xi[0] * p(1) + &xi[1] * p(2) + &xi[2] * p(3);
            let inv = one() / (xi_p.sqrt() * 2.0);
            let closed = lin(
                &[
                    (&e_abs * &inv, CMatrix::identity(2)),
                    (&xi[0] * &inv, sigma(1).scale(I)),
                    (&xi[1] * &inv, sigma(2).scale(I)),
                    (&xi[2] * &inv, sigma(3).scale(I)),
                ],
                3,
            );
            unitary(closed, None, "weyl_plus", "weyl_canonical", false)
        }
        "V2" => {
            let q = q3(m);
            let inv = one() / ((&q * (&q + m)) * 2.0).sqrt();
            let closed = lin(
                &[
                    (p(3) * &inv, g.gamma(3).clone()),
                    ((&q + m) * &inv, CMatrix::identity(4)),
                ],
                3,
            );
            unitary(closed, None, "dirac_massive", "hprime", false)
        }
        other => return Err(Error::UnknownUnitary(other.to_string())),
    };
    Ok(u)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransformReport {
    pub name: String,
    pub source: String,
    pub target: String,
    /// `max ‖u H_src u⁻¹ − H_tgt‖` over the samples used.
    pub residual: f64,
    pub unitarity: f64,
    pub exponential: Option<f64>,
    pub samples_used: usize,
    pub pass: bool,
}

/// Checks `u·H_source·u⁻¹ = H_target`, unitarity, and exponential/closed
/// agreement over the given samples.
pub fn verify_transform(u: &UnitarySpec, samples: &[MomentumPoint], params: Params) -> Result<TransformReport> {
    verify_transform_with(u, samples, params, CatalogOptions::default())
}

pub fn verify_transform_with(
    u: &UnitarySpec,
    samples: &[MomentumPoint],
    params: Params,
    opts: CatalogOptions,
) -> Result<TransformReport> {
    let src = catalog_equation_with(&u.source, params, opts)?;
    let tgt = catalog_equation_with(&u.target, params, opts)?;
    let mut residual: f64 = 0.0;
    let mut unitarity: f64 = 0.0;
    let mut exponential: Option<f64> = u.exponential.as_ref().map(|_| 0.0);
    let mut used = 0;
    for pt in samples.iter().filter(|p| !u.positive_p3_only || p[2] > 0.0) {
        used += 1;
        let um = u.closed.eval(pt)?;
        let ud = um.adjoint();
        let lhs = &(&um * &src.hamiltonian.eval(pt)?) * &ud;
        residual = residual.max(lhs.dist(&tgt.hamiltonian.eval(pt)?));
        unitarity = unitarity.max(um.unitarity_residual());
        if let (Some(ex), Some(acc)) = (&u.exponential, exponential.as_mut()) {
            *acc = acc.max(ex.eval(pt)?.dist(&um));
        }
    }
    if used == 0 {
        return Err(Error::InvalidParams(alloc::format!(
            "{}: no admissible samples",
            u.name
        )));
    }
    let pass = residual <= TRANSFORM_TOL
        && unitarity <= IDENTITY_TOL
        && exponential.is_none_or(|e| e <= TRANSFORM_TOL);
    Ok(TransformReport {
        name: u.name.clone(),
        source: u.source.clone(),
        target: u.target.clone(),
        residual,
        unitarity,
        exponential,
        samples_used: used,
        pass,
    })
}

/// `Q± = ½(1 ± γ₃γ₄)` in `rep26`.
pub fn q_projectors() -> (CMatrix, CMatrix) {
    let g = rep26();
    let id = CMatrix::identity(4);
    let g34 = g.gamma(3) * g.gamma(4);
    (
        (&id + &g34).scale_re(0.5),
        (&id - &g34).scale_re(0.5),
    )
}

/// `K(p) = (γ₃γ₄m + γ₄p₃)/q₃`; `½(1 − K)` is the subsidiary projector of the
/// massive equation.
pub fn k_field(mass: f64) -> OperatorField {
    let g = rep26();
    let inv = one() / q3(mass);
    lin(
        &[
            (&inv * mass, g.gamma(3) * g.gamma(4)),
            (p(3) * &inv, g.gamma(4).clone()),
        ],
        3,
    )
}

/// `½(1 + s·e₃γ₄)`.
pub fn e3_projector(s: f64) -> OperatorField {
    let g = rep26();
    lin(
        &[
            (Scalar::constant(0.5), CMatrix::identity(4)),
            (e3() * (0.5 * s), g.gamma(4).clone()),
        ],
        3,
    )
}

fn projector_triplet(a: &CMatrix, b: &CMatrix) -> f64 {
    let id = CMatrix::identity(a.dim());
    [
        (a * a).dist(a),
        (b * b).dist(b),
        (a * b).max_abs(),
        (b * a).max_abs(),
        (a + b).dist(&id),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Projector identities: `Q±`, their commutation with the four-component
/// equation, the massive subsidiary condition and `½(1 ∓ e₃γ₄)`.
pub fn verify_projectors(samples: &[MomentumPoint], params: Params) -> Result<Vec<Check>> {
    let (qp, qm) = q_projectors();
    let chi = catalog_equation("chi_4c", params)?;
    let massive = catalog_equation("dirac_massive", params)?;
    let v2 = catalog_unitary("V2", params)?;
    let u1 = catalog_unitary("U1", params)?;
    let k = k_field(params.mass);
    let g = rep26();
    let g34 = g.gamma(3) * g.gamma(4);
    let id = CMatrix::identity(4);

    let mut commute_chi: f64 = 0.0;
    let mut k_square: f64 = 0.0;
    let mut k_proj: f64 = 0.0;
    let mut k_commute: f64 = 0.0;
    let mut k_image: f64 = 0.0;
    let mut e3_pair: f64 = 0.0;
    let mut e3_image: f64 = 0.0;
    for pt in samples {
        let h = chi.hamiltonian.eval(pt)?;
        commute_chi = commute_chi
            .max(qp.commutator(&h).max_abs())
            .max(qm.commutator(&h).max_abs());
        let kv = k.eval(pt)?;
        k_square = k_square.max((&kv * &kv).dist(&id));
        let half = (&id - &kv).scale_re(0.5);
        k_proj = k_proj.max((&half * &half).dist(&half));
        k_commute = k_commute.max(kv.commutator(&massive.hamiltonian.eval(pt)?).max_abs());
        let v = v2.closed.eval(pt)?;
        k_image = k_image.max((&(&v * &kv) * &v.adjoint()).dist(&g34));
        let minus = e3_projector(-1.0).eval(pt)?;
        let plus = e3_projector(1.0).eval(pt)?;
        e3_pair = e3_pair.max(projector_triplet(&minus, &plus));
        let u = u1.closed.eval(pt)?;
        let back_m = &(&u.adjoint() * &qm) * &u;
        let back_p = &(&u.adjoint() * &qp) * &u;
        e3_image = e3_image.max(back_m.dist(&minus)).max(back_p.dist(&plus));
    }
    Ok(vec![
        Check::new("projectors.q_pair", projector_triplet(&qp, &qm), TRANSFORM_TOL),
        Check::new("projectors.q_commute_chi_4c", commute_chi, TRANSFORM_TOL),
        Check::new("projectors.k_square", k_square, TRANSFORM_TOL),
        Check::new("projectors.k_half_idempotent", k_proj, TRANSFORM_TOL),
        Check::new("projectors.k_commute_dirac_massive", k_commute, TRANSFORM_TOL),
        Check::new("projectors.v2_maps_k_to_g3g4", k_image, TRANSFORM_TOL),
        Check::new("projectors.e3_pair", e3_pair, TRANSFORM_TOL),
        Check::new("projectors.u1_maps_q_to_e3", e3_image, TRANSFORM_TOL),
    ])
}

/// `max ‖H² − s·1‖` over the samples.
pub fn dispersion_residual(eq: &EquationSpec, samples: &[MomentumPoint]) -> Result<f64> {
    let s = eq.dispersion.as_ref().ok_or_else(|| {
        Error::InvalidParams(alloc::format!("{} has no dispersion relation", eq.name))
    })?;
    let mut worst: f64 = 0.0;
    for pt in samples {
        let h = eq.hamiltonian.eval(pt)?;
        let want = CMatrix::identity(eq.dim).scale_re(s.eval(pt)?);
        worst = worst.max((&h * &h).dist(&want));
    }
    Ok(worst)
}

/// Upper and lower `Q±` blocks of `chi_4c` against `chi_plus` / `chi_minus`.
pub fn block_decomposition_residual(samples: &[MomentumPoint], params: Params) -> Result<f64> {
    let (qp, _) = q_projectors();
    // Q₊ is the upper 2×2 block in this basis
    let upper = CMatrix::from_blocks(
        &CMatrix::identity(2),
        &CMatrix::zeros(2),
        &CMatrix::zeros(2),
        &CMatrix::zeros(2),
    );
    let mut worst = qp.dist(&upper);
    let chi = catalog_equation("chi_4c", params)?;
    let plus = catalog_equation("chi_plus", params)?;
    let minus = catalog_equation("chi_minus", params)?;
    for pt in samples {
        let h = chi.hamiltonian.eval(pt)?;
        worst = worst
            .max(h.block(0, 0).dist(&plus.hamiltonian.eval(pt)?))
            .max(h.block(1, 1).dist(&minus.hamiltonian.eval(pt)?))
            .max(h.block(0, 1).max_abs())
            .max(h.block(1, 0).max_abs());
    }
    Ok(worst)
}

/// `λ·S₀ₗpₗ` with `λ = −2i` against `γ₀γₗpₗ`.
pub fn lambda_residual(samples: &[MomentumPoint]) -> Result<f64> {
    let g = rep26();
    let lambda = C64::new(0.0, -2.0);
    let op = lin(
        &[
            (p(1), spin(&g, 0, 1).scale(lambda)),
            (p(2), spin(&g, 0, 2).scale(lambda)),
            (p(3), spin(&g, 0, 3).scale(lambda)),
        ],
        3,
    );
    let dirac = catalog_equation("dirac_massless", Params::default())?;
    let mut worst: f64 = 0.0;
    for pt in samples {
        worst = worst.max(op.eval(pt)?.dist(&dirac.hamiltonian.eval(pt)?));
    }
    Ok(worst)
}

/// `exp((π/4)γ₃e₃)` written out for a single sign of `e₃`.
pub fn u1_at_sign(e3: f64) -> CMatrix {
    let g = rep26();
    crate::linalg::expm(&g.gamma(3).scale_re(FRAC_PI_4 * e3)).expect("finite argument")
}
