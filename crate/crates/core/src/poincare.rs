//! Poincaré generator realizations, structure-constant calibration, algebra
//! closure, helicity and energy-sign/helicity content.
//!
//! Generators are named `H`, `P1..Pd`, `Jkl` (1 ≤ k < l ≤ d) and `J0k`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::clifford::{gamma_set_for, sigma, spin, Representation};
use crate::equations::{catalog_equation, catalog_unitary, EquationSpec, Params};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, least_squares, CMatrix, RectMatrix, C64, ZERO};
use crate::opcalc::scalar::named::{abs_p3, e3, energy, norm, p};
use crate::opcalc::{
    commutator_of_jets, conjugate_by_unitary, sample_momenta, DiffOp1, ExclusionRules, Jet,
    MomentumPoint, OperatorField, Scalar,
};

/// Closure threshold on commutator deviations.
pub const ALGEBRA_TOL: f64 = 1e-8;
/// Threshold on second-order terms of commutators.
pub const SECOND_ORDER_TOL: f64 = 1e-10;
/// Threshold on helicity derivative cancellation and half-integer rounding.
pub const HELICITY_TOL: f64 = 1e-10;
/// Time parameters at which every commutator is evaluated.
pub const X0_VALUES: [f64; 2] = [0.0, 1.37];

pub const GENERATOR_SETS: &[&str] = &[
    "psi",
    "chi",
    "phi",
    "phi_pos",
    "phi_neg",
    "chi2",
    "chi2_printed",
    "flat",
    "flat_minus",
    "weyl",
];

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub op: DiffOp1,
}

/// A named realization of the Poincaré generators on matrix-valued
/// momentum-space wave functions.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub name: String,
    pub d: usize,
    pub dim: usize,
    /// Catalog equation whose Hamiltonian this set uses, if any.
    pub equation: Option<String>,
    pub hamiltonian: OperatorField,
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn get(&self, name: &str) -> Option<&DiffOp1> {
        self.generators.iter().find(|g| g.name == name).map(|g| &g.op)
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    /// `J_{μν}` with `J_{νμ} = −J_{μν}`; index 0 is time.
    pub fn j(&self, mu: usize, nu: usize) -> Result<DiffOp1> {
        if mu == nu || mu.max(nu) > self.d {
            return Err(Error::IndexOutOfRange(format!("J{mu}{nu} for d = {}", self.d)));
        }
        let (lo, hi) = (mu.min(nu), mu.max(nu));
        let op = self
            .get(&format!("J{lo}{hi}"))
            .cloned()
            .ok_or_else(|| Error::IndexOutOfRange(format!("J{lo}{hi}")))?;
        Ok(if mu < nu { op } else { op.scale_c(C64::new(-1.0, 0.0)) })
    }

    /// Every member replaced by `u⁻¹ g u`, checked for unitarity at `probes`.
    pub fn conjugated(&self, name: &str, u: &OperatorField, probes: &[MomentumPoint]) -> Result<Self> {
        let generators = self
            .generators
            .iter()
            .map(|g| {
                Ok(Generator {
                    name: g.name.clone(),
                    op: conjugate_by_unitary(u, &g.op, probes)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let ud = u.adjoint();
        Ok(Self {
            name: name.to_string(),
            d: self.d,
            dim: self.dim,
            equation: None,
            hamiltonian: ud.mul(&self.hamiltonian).mul(u),
            generators,
        })
    }
}

/// Builds H, P_k, J_kl = orbital + spin extra and J_0k = boost + extra.
fn assemble(
    name: &str,
    equation: Option<&str>,
    h: OperatorField,
    extras: &[(&str, OperatorField)],
) -> GeneratorSet {
    let (dim, d) = (h.dim(), h.arity());
    let extra = |n: &str| extras.iter().find(|(k, _)| *k == n).map(|(_, f)| f);
    let mut generators = Vec::new();
    let mut push = |n: String, op: DiffOp1| {
        let op = match extra(&n) {
            Some(f) => op.plus_matrix(f),
            None => op,
        };
        generators.push(Generator { name: n, op });
    };
    push("H".into(), DiffOp1::multiplication(h.clone()));
    for k in 0..d {
        push(format!("P{}", k + 1), DiffOp1::momentum(k, dim, d));
    }
    for k in 0..d {
        for l in k + 1..d {
            push(format!("J{}{}", k + 1, l + 1), DiffOp1::orbital(k, l, dim, d));
        }
    }
    for k in 0..d {
        push(format!("J0{}", k + 1), DiffOp1::boost(k, &h));
    }
    GeneratorSet {
        name: name.to_string(),
        d,
        dim,
        equation: equation.map(str::to_string),
        hamiltonian: h,
        generators,
    }
}

fn field(s: &Scalar, m: CMatrix) -> OperatorField {
    OperatorField::scalar_times(s, m, 3)
}

fn constant(m: CMatrix, d: usize) -> OperatorField {
    OperatorField::constant(m, d)
}

fn half(m: &CMatrix) -> CMatrix {
    m.scale_re(0.5)
}

/// `G₀E` with the extras that make it a realization for any `G₀` with `G₀² = 1`.
fn phi_like(name: &str, equation: Option<&str>, g0: CMatrix) -> GeneratorSet {
    let g = gamma_set_for(Representation::Rep26);
    let s12 = spin(&g, 1, 2);
    let s21 = spin(&g, 2, 1);
    let den = energy() + abs_p3();
    let w1 = p(2) / den.clone();
    let w2 = p(1) / den;
    let h = field(&energy(), g0.clone());
    let extras = [
        ("J12", constant(s12.clone(), 3)),
        ("J13", field(&(-e3() * w1.clone()), s12.clone())),
        ("J23", field(&(-e3() * w2.clone()), s21.clone())),
        ("J01", field(&-w1, &g0 * &s12)),
        ("J02", field(&-w2, &g0 * &s21)),
    ];
    assemble(name, equation, h, &extras)
}

fn two_component_spin(name: &str, sign: f64, params: Params) -> Result<GeneratorSet> {
    let eq = catalog_equation("chi_plus", params)?;
    let s = -sign * 0.5;
    let extras = [
        ("J12", constant(half(&sigma(3)), 3)),
        ("J13", field(&e3(), sigma(1).scale_re(s))),
        ("J23", field(&e3(), sigma(2).scale_re(s))),
    ];
    Ok(assemble(name, Some("chi_plus"), eq.hamiltonian, &extras))
}

/// Constructs a named generator set.
pub fn generator_set(name: &str, params: Params) -> Result<GeneratorSet> {
    params.validate()?;
    let g = gamma_set_for(Representation::Rep26);
    let s = |a, b| spin(&g, a, b);
    match name {
        "psi" => {
            let eq = catalog_equation("dirac_massless", params)?;
            let extras = [
                ("J12", constant(s(1, 2), 3)),
                ("J13", constant(s(1, 3), 3)),
                ("J23", constant(s(2, 3), 3)),
            ];
            Ok(assemble(name, Some("dirac_massless"), eq.hamiltonian, &extras))
        }
        "chi" => {
            let eq = catalog_equation("chi_4c", params)?;
            let g3 = g.gamma(3);
            let extras = [
                ("J12", constant(s(1, 2), 3)),
                ("J13", field(&-e3(), &s(1, 3) * g3)),
                ("J23", field(&-e3(), &s(2, 3) * g3)),
            ];
            Ok(assemble(name, Some("chi_4c"), eq.hamiltonian, &extras))
        }
        "phi" => Ok(phi_like(name, Some("phi_diag"), g.gamma(0).clone())),
        "phi_pos" => Ok(phi_like(name, None, CMatrix::identity(4))),
        "phi_neg" => Ok(phi_like(name, None, CMatrix::identity(4).scale_re(-1.0))),
        "chi2" => two_component_spin(name, 1.0, params),
        "chi2_printed" => two_component_spin(name, -1.0, params),
        "flat" | "flat_minus" => {
            let eq_name = if name == "flat" { "flat_plus" } else { "flat_minus" };
            let eq = catalog_equation(eq_name, params)?;
            let extras = [("J12", constant(half(&sigma(3)), 2))];
            Ok(assemble(name, Some(eq_name), eq.hamiltonian, &extras))
        }
        "weyl" => {
            let eq = catalog_equation("weyl_plus", params)?;
            let extras = [
                ("J12", constant(half(&sigma(3)), 3)),
                ("J13", constant(half(&sigma(2)).scale_re(-1.0), 3)),
                ("J23", constant(half(&sigma(1)), 3)),
            ];
            Ok(assemble(name, Some("weyl_plus"), eq.hamiltonian, &extras))
        }
        _ => Err(Error::UnknownGeneratorSet(name.to_string())),
    }
}

/// The orbital scalar realization: one-component, `H = √(p² + m²)`.
pub fn scalar_set(d: usize, mass: f64) -> GeneratorSet {
    let h = if mass == 0.0 {
        norm(d)
    } else {
        ((1..=d)
            .map(|k| p(k).square())
            .fold(Scalar::constant(mass * mass), |a, b| a + b))
        .sqrt()
    };
    assemble(
        "scalar",
        None,
        OperatorField::scalar(&h, 1, d),
        &[],
    )
}

/// `[G_i, G_j] = Σ c_k G_k`, stored as `(i, j, [(k, c_k)])` with `i < j`.
pub type Relation = (usize, usize, Vec<(usize, C64)>);

/// Structure constants for every ordered pair of generator names.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    pub d: usize,
    pub names: Vec<String>,
    pub table: Vec<Relation>,
}

impl StructureConstants {
    pub fn relation(&self, a: &str, b: &str) -> Option<&[(usize, C64)]> {
        let ia = self.names.iter().position(|n| n == a)?;
        let ib = self.names.iter().position(|n| n == b)?;
        self.table
            .iter()
            .find(|(i, j, _)| (*i, *j) == (ia.min(ib), ia.max(ib)))
            .map(|(_, _, c)| c.as_slice())
    }
}

impl fmt::Display for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j, c) in &self.table {
            if c.is_empty() {
                continue;
            }
            write!(f, "[{}, {}] =", self.names[*i], self.names[*j])?;
            for (k, v) in c {
                write!(f, " ({}{:+}i){}", v.re, v.im, self.names[*k])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn snap(x: f64) -> Option<f64> {
    let r = libm::round(x);
    ((x - r).abs() <= 1e-6).then_some(r)
}

fn jets(gs: &GeneratorSet, p: &[f64], x0: f64) -> Result<Vec<Jet>> {
    gs.generators.iter().map(|g| g.op.prepare().jet(p, x0)).collect()
}

/// Fits the structure constants on the orbital scalar realization and
/// snaps them to Gaussian integers.
pub fn calibrate(d: usize) -> Result<StructureConstants> {
    let gs = scalar_set(d, if d == 3 { 0.0 } else { 1.0 });
    let n = gs.generators.len();
    let samples = sample_momenta(d, 8, 7, &ExclusionRules::default());
    let prepared: Vec<_> = gs.generators.iter().map(|g| g.op.prepare()).collect();
    let mut points = Vec::new();
    for p in &samples {
        for &x0 in &X0_VALUES {
            let js = prepared.iter().map(|op| op.jet(p, x0)).collect::<Result<Vec<_>>>()?;
            points.push(js);
        }
    }
    let width = points[0][0].point().to_vec().len();
    let mut table = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut a = RectMatrix::new(n);
            let mut rhs = Vec::new();
            for js in &points {
                let cols: Vec<Vec<C64>> = js.iter().map(|jt| jt.point().to_vec()).collect();
                for r in 0..width {
                    let row: Vec<C64> = cols.iter().map(|c| c[r]).collect();
                    a.push_row(&row);
                }
                rhs.extend(commutator_of_jets(&js[i], &js[j]).op.to_vec());
            }
            let fit = least_squares(&a, &rhs)?;
            let mut coeffs = Vec::new();
            for (k, c) in fit.iter().enumerate() {
                let (re, im) = match (snap(c.re), snap(c.im)) {
                    (Some(re), Some(im)) => (re, im),
                    _ => {
                        return Err(Error::Calibration(format!(
                            "[{}, {}] coefficient of {} is {c}",
                            gs.generators[i].name, gs.generators[j].name, gs.generators[k].name
                        )))
                    }
                };
                if re != 0.0 || im != 0.0 {
                    coeffs.push((k, C64::new(re, im)));
                }
            }
            let snapped: Vec<C64> = (0..n)
                .map(|k| coeffs.iter().find(|(m, _)| *m == k).map_or(ZERO, |(_, c)| *c))
                .collect();
            let misfit = a
                .apply(&snapped)
                .iter()
                .zip(&rhs)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
            if misfit > SECOND_ORDER_TOL {
                return Err(Error::Calibration(format!(
                    "[{}, {}] misfit {misfit:e}",
                    gs.generators[i].name, gs.generators[j].name
                )));
            }
            table.push((i, j, coeffs));
        }
    }
    Ok(StructureConstants {
        d,
        names: gs.generators.iter().map(|g| g.name.clone()).collect(),
        table,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AlgebraReport {
    pub set: String,
    pub residual: f64,
    pub second_order: f64,
    /// Pair with the largest deviation.
    pub worst_pair: String,
    pub samples_used: usize,
    pub pass: bool,
}

/// Largest deviation of every commutator in `gs` from the calibrated
/// relations, over `samples` × `x0_values`.
pub fn algebra_residual(
    gs: &GeneratorSet,
    constants: &StructureConstants,
    samples: &[MomentumPoint],
    x0_values: &[f64],
) -> Result<AlgebraReport> {
    let names = gs.names();
    if constants.d != gs.d || names.len() != constants.names.len() {
        return Err(Error::DimensionMismatch(format!(
            "set {} (d = {}) against constants for d = {}",
            gs.name, gs.d, constants.d
        )));
    }
    if names.iter().zip(&constants.names).any(|(a, b)| *a != b) {
        return Err(Error::DimensionMismatch(format!("generator names of {}", gs.name)));
    }
    let mut residual: f64 = 0.0;
    let mut second: f64 = 0.0;
    let mut worst_pair = String::new();
    for p in samples {
        for &x0 in x0_values {
            let js = jets(gs, p, x0)?;
            let points: Vec<_> = js.iter().map(Jet::point).collect();
            for (i, j, coeffs) in &constants.table {
                let c = commutator_of_jets(&js[*i], &js[*j]);
                let mut expected = points[0].scale(ZERO);
                for (k, v) in coeffs {
                    expected.add_scaled(&points[*k], *v);
                }
                let r = c.op.dist(&expected);
                if r > residual || worst_pair.is_empty() {
                    worst_pair = format!("[{}, {}]", names[*i], names[*j]);
                }
                residual = residual.max(r);
                second = second.max(c.second_order_residual);
            }
        }
    }
    Ok(AlgebraReport {
        set: gs.name.clone(),
        residual,
        second_order: second,
        worst_pair,
        samples_used: samples.len(),
        pass: residual <= ALGEBRA_TOL && second <= SECOND_ORDER_TOL,
    })
}

/// `Σ p_k J_k / E` with `J₁ = J₂₃, J₂ = J₃₁, J₃ = J₁₂`, as a matrix field.
pub fn helicity_field(gs: &GeneratorSet) -> Result<OperatorField> {
    if gs.d != 3 {
        return Err(Error::DimensionMismatch(format!("helicity needs d = 3, got {}", gs.d)));
    }
    let axial = [gs.j(2, 3)?, gs.j(3, 1)?, gs.j(1, 2)?];
    let mut total = DiffOp1::zero(gs.dim, 3);
    for (k, jk) in axial.iter().enumerate() {
        let w = OperatorField::scalar(&(p(k + 1) / energy()), gs.dim, 3);
        total = total.add(&jk.left_mul(&w));
    }
    let probes = sample_momenta(3, 8, 0, &ExclusionRules::default());
    let mut leftover: f64 = 0.0;
    for q in &probes {
        for f in total.b.iter().chain(core::iter::once(&total.x0)) {
            leftover = leftover.max(f.eval(q)?.max_abs());
        }
    }
    if leftover > HELICITY_TOL {
        return Err(Error::NotScalarHelicity(leftover));
    }
    Ok(total.a)
}

/// Energy sign and helicity of one irreducible component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IrrepLabel {
    pub energy_sign: i8,
    pub twice_helicity: i32,
}

impl IrrepLabel {
    pub fn helicity(&self) -> f64 {
        f64::from(self.twice_helicity) / 2.0
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = if self.energy_sign > 0 { '+' } else { '-' };
        let h = self.twice_helicity;
        if h % 2 == 0 {
            write!(f, "({e},{:+})", h / 2)
        } else {
            write!(f, "({e},{:+}/2)", h)
        }
    }
}

fn labels_at(h: &CMatrix, hel: &CMatrix) -> Result<Vec<IrrepLabel>> {
    let (vals, vecs) = hermitian_eigen(h)?;
    let n = vals.len();
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (vals[end] - vals[start]).abs() <= 1e-8 * scale {
            end += 1;
        }
        let m = end - start;
        let block = CMatrix::from_fn(m, |r, c| {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| vecs[(i, start + r)].conj() * hel[(i, j)] * vecs[(j, start + c)])
                .sum()
        });
        let (hvals, _) = hermitian_eigen(&block)?;
        let sign = if vals[start] > 0.0 { 1 } else { -1 };
        if vals[start].abs() <= 1e-8 * scale {
            return Err(Error::SingularPoint);
        }
        for hv in hvals {
            let twice = libm::round(2.0 * hv);
            if (2.0 * hv - twice).abs() > 2.0 * 1e-8 {
                return Err(Error::NotScalarHelicity((2.0 * hv - twice).abs()));
            }
            out.push(IrrepLabel {
                energy_sign: sign,
                twice_helicity: twice as i32,
            });
        }
        start = end;
    }
    out.sort();
    Ok(out)
}

/// Energy-sign/helicity labels of `gs` realized on `eq` at each sample.
pub fn content_by_sample(
    eq: &EquationSpec,
    gs: &GeneratorSet,
    samples: &[MomentumPoint],
) -> Result<Vec<Vec<IrrepLabel>>> {
    if eq.dim != gs.dim || eq.d != gs.d {
        return Err(Error::DimensionMismatch(format!(
            "equation {} against generator set {}",
            eq.name, gs.name
        )));
    }
    let hel = helicity_field(gs)?;
    samples
        .iter()
        .map(|q| {
            let h = eq.hamiltonian.eval(q)?;
            if h.dist(&gs.hamiltonian.eval(q)?) > HELICITY_TOL * h.max_abs().max(1.0) {
                return Err(Error::InvalidParams(format!(
                    "generator set {} does not realize {}",
                    gs.name, eq.name
                )));
            }
            labels_at(&h, &hel.eval(q)?)
        })
        .collect()
}

/// The energy-sign/helicity multiset of `gs` realized on `eq`, required to
/// be identical at every sample.
pub fn irrep_content(eq: &EquationSpec, gs: &GeneratorSet, samples: &[MomentumPoint]) -> Result<Vec<IrrepLabel>> {
    let all = content_by_sample(eq, gs, samples)?;
    let first = all.first().ok_or_else(|| Error::InvalidParams("no samples".into()))?;
    if all.iter().any(|c| c != first) {
        return Err(Error::ContentNotInvariant);
    }
    Ok(first.clone())
}

/// Member-wise distance between `u⁻¹·from·u` and `to`.
pub fn covariance_residual(
    from: &GeneratorSet,
    to: &GeneratorSet,
    u: &OperatorField,
    samples: &[MomentumPoint],
) -> Result<f64> {
    let image = from.conjugated(&to.name, u, samples)?;
    let mut worst: f64 = 0.0;
    for g in &image.generators {
        let target = to
            .get(&g.name)
            .ok_or_else(|| Error::DimensionMismatch(format!("{} lacks {}", to.name, g.name)))?;
        for q in samples {
            for &x0 in &X0_VALUES {
                worst = worst.max(g.op.eval(q, x0)?.dist(&target.eval(q, x0)?));
            }
        }
    }
    Ok(worst)
}

/// The chi-realization carried by the diagonalizing transform onto the
/// phi-realization.
pub fn chi_phi_covariance(samples: &[MomentumPoint], params: Params) -> Result<f64> {
    let u2 = catalog_unitary("U2", params)?;
    let chi = generator_set("chi", params)?;
    let phi = generator_set("phi", params)?;
    covariance_residual(&chi, &phi, &u2.closed.adjoint(), samples)
}
