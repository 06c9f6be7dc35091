use alloc::vec::Vec;

use super::field::OperatorField;
use super::scalar::Scalar;
use super::MomentumPoint;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, I};

/// `A(p) + Σₖ Bₖ(p)·(i∂/∂pₖ) + x₀·C(p)` with `x₀` a commuting formal scalar.
#[derive(Clone, Debug)]
pub struct DiffOp1 {
    pub a: OperatorField,
    pub b: Vec<OperatorField>,
    pub x0: OperatorField,
}

/// A first-order operator frozen at one momentum and one value of `x₀`:
/// `a + Σₖ bₖ·(i∂ₖ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointOp {
    pub a: CMatrix,
    pub b: Vec<CMatrix>,
}

impl PointOp {
    pub fn zero(dim: usize, arity: usize) -> Self {
        Self {
            a: CMatrix::zeros(dim),
            b: (0..arity).map(|_| CMatrix::zeros(dim)).collect(),
        }
    }

    /// Max entry difference over all parts.
    pub fn dist(&self, other: &Self) -> f64 {
        self.b
            .iter()
            .zip(&other.b)
            .fold(self.a.dist(&other.a), |m, (x, y)| m.max(x.dist(y)))
    }

    pub fn max_abs(&self) -> f64 {
        self.b.iter().fold(self.a.max_abs(), |m, x| m.max(x.max_abs()))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            a: self.a.scale(c),
            b: self.b.iter().map(|x| x.scale(c)).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: C64) {
        self.a += &other.a.scale(c);
        for (x, y) in self.b.iter_mut().zip(&other.b) {
            *x += &y.scale(c);
        }
    }

    /// All parts flattened row-major, `a` first.
    pub fn to_vec(&self) -> Vec<C64> {
        let mut v = self.a.to_vec();
        for x in &self.b {
            v.extend_from_slice(x.as_slice());
        }
        v
    }
}

/// Values and first derivatives of every coefficient of a [`DiffOp1`] at one
/// point, with `x₀` folded into the zeroth part.
#[derive(Clone, Debug)]
pub struct Jet {
    pub a: CMatrix,
    pub da: Vec<CMatrix>,
    pub b: Vec<CMatrix>,
    /// `db[k][l] = ∂_l Bₖ`.
    pub db: Vec<Vec<CMatrix>>,
}

impl Jet {
    pub fn point(&self) -> PointOp {
        PointOp {
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }
}

/// Result of [`diffop_commutator`].
#[derive(Clone, Debug)]
pub struct Commutator {
    pub op: PointOp,
    /// Largest entry of the symmetrized second-order coefficient; a genuine
    /// first-order result has zero here.
    pub second_order_residual: f64,
}

impl DiffOp1 {
    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn arity(&self) -> usize {
        self.a.arity()
    }

    /// Pure multiplication by a matrix field.
    pub fn multiplication(f: OperatorField) -> Self {
        let (dim, d) = (f.dim(), f.arity());
        Self {
            b: (0..d).map(|_| OperatorField::zero(dim, d)).collect(),
            x0: OperatorField::zero(dim, d),
            a: f,
        }
    }

    pub fn zero(dim: usize, d: usize) -> Self {
        Self::multiplication(OperatorField::zero(dim, d))
    }

    /// `x_{k+1} = i∂/∂p_{k+1}` times the identity.
    pub fn position(k: usize, dim: usize, d: usize) -> Self {
        let mut op = Self::zero(dim, d);
        op.b[k] = OperatorField::identity(dim, d);
        op
    }

    /// `p_{k+1}` times the identity.
    pub fn momentum(k: usize, dim: usize, d: usize) -> Self {
        Self::multiplication(OperatorField::scalar(&Scalar::coord(k), dim, d))
    }

    /// Orbital part `x_k p_l − x_l p_k` (zero-based axes, `k ≠ l`).
    pub fn orbital(k: usize, l: usize, dim: usize, d: usize) -> Self {
        let mut op = Self::zero(dim, d);
        op.b[k] = OperatorField::scalar(&Scalar::coord(l), dim, d);
        op.b[l] = OperatorField::scalar(&-Scalar::coord(k), dim, d);
        op
    }

    /// `x₀pₖ − ½[xₖ, H]₊ = x₀pₖ − H·(i∂ₖ) − ½ i∂ₖH`.
    pub fn boost(k: usize, h: &OperatorField) -> Self {
        let (dim, d) = (h.dim(), h.arity());
        let mut op = Self::zero(dim, d);
        op.a = h.partial(k).scaled_c(C64::new(0.0, -0.5));
        op.b[k] = h.neg();
        op.x0 = OperatorField::scalar(&Scalar::coord(k), dim, d);
        op
    }

    pub fn plus_matrix(&self, f: &OperatorField) -> Self {
        let mut op = self.clone();
        op.a = op.a.add(f);
        op
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            a: self.a.add(&other.a),
            b: self.b.iter().zip(&other.b).map(|(x, y)| x.add(y)).collect(),
            x0: self.x0.add(&other.x0),
        }
    }

    pub fn scale_c(&self, c: C64) -> Self {
        Self {
            a: self.a.scaled_c(c),
            b: self.b.iter().map(|x| x.scaled_c(c)).collect(),
            x0: self.x0.scaled_c(c),
        }
    }

    /// `f(p)·self`, with multiplication applied after the operator.
    pub fn left_mul(&self, f: &OperatorField) -> Self {
        Self {
            a: f.mul(&self.a),
            b: self.b.iter().map(|x| f.mul(x)).collect(),
            x0: f.mul(&self.x0),
        }
    }

    pub fn eval(&self, p: &[f64], x0: f64) -> Result<PointOp> {
        let mut a = self.a.eval(p)?;
        if !self.x0.is_zero() {
            a += &self.x0.eval(p)?.scale_re(x0);
        }
        Ok(PointOp {
            a,
            b: self.b.iter().map(|f| f.eval(p)).collect::<Result<_>>()?,
        })
    }

    /// Builds the derivative fields once so repeated jets are cheap.
    pub fn prepare(&self) -> PreparedOp {
        let d = self.arity();
        let partials = |f: &OperatorField| (0..d).map(|k| f.partial(k)).collect::<Vec<_>>();
        PreparedOp {
            op: self.clone(),
            da: partials(&self.a),
            dx0: partials(&self.x0),
            db: self.b.iter().map(partials).collect(),
        }
    }
}

/// A [`DiffOp1`] together with the symbolic partials of its coefficients.
#[derive(Clone, Debug)]
pub struct PreparedOp {
    pub op: DiffOp1,
    da: Vec<OperatorField>,
    dx0: Vec<OperatorField>,
    db: Vec<Vec<OperatorField>>,
}

impl PreparedOp {
    pub fn jet(&self, p: &[f64], x0: f64) -> Result<Jet> {
        let PointOp { a, b } = self.op.eval(p, x0)?;
        let mut da = Vec::with_capacity(self.da.len());
        for (fa, fc) in self.da.iter().zip(&self.dx0) {
            let mut v = fa.eval(p)?;
            if !fc.is_zero() {
                v += &fc.eval(p)?.scale_re(x0);
            }
            da.push(v);
        }
        let db = self
            .db
            .iter()
            .map(|row| row.iter().map(|f| f.eval(p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Jet { a, da, b, db })
    }
}

/// `[g1, g2]` from the jets of both operators at the same point.
pub fn commutator_of_jets(j1: &Jet, j2: &Jet) -> Commutator {
    let d = j1.b.len();
    let mut a = j1.a.commutator(&j2.a);
    for k in 0..d {
        a += &(&(&j1.b[k] * &j2.da[k]) - &(&j2.b[k] * &j1.da[k])).scale(I);
    }
    let mut b = Vec::with_capacity(d);
    for k in 0..d {
        let mut bk = &(&(&j1.a * &j2.b[k]) - &(&j2.b[k] * &j1.a))
            - &(&(&j2.a * &j1.b[k]) - &(&j1.b[k] * &j2.a));
        for l in 0..d {
            bk += &(&(&j1.b[l] * &j2.db[k][l]) - &(&j2.b[l] * &j1.db[k][l])).scale(I);
        }
        b.push(bk);
    }
    let mut second: f64 = 0.0;
    for k in 0..d {
        for l in k..d {
            let c = &(&(&j1.b[k] * &j2.b[l]) - &(&j2.b[k] * &j1.b[l]))
                + &(&(&j1.b[l] * &j2.b[k]) - &(&j2.b[l] * &j1.b[k]));
            second = second.max(0.5 * c.max_abs());
        }
    }
    Commutator {
        op: PointOp { a, b },
        second_order_residual: second,
    }
}

/// `[g1, g2]` at momentum `p` and time parameter `x0`.
pub fn diffop_commutator(g1: &DiffOp1, g2: &DiffOp1, p: &[f64], x0: f64) -> Result<Commutator> {
    if g1.dim() != g2.dim() || g1.arity() != g2.arity() {
        return Err(Error::DimensionMismatch(alloc::format!(
            "commutator of {}x{} (d={}) and {}x{} (d={}) operators",
            g1.dim(),
            g1.dim(),
            g1.arity(),
            g2.dim(),
            g2.dim(),
            g2.arity()
        )));
    }
    let j1 = g1.prepare().jet(p, x0)?;
    let j2 = g2.prepare().jet(p, x0)?;
    Ok(commutator_of_jets(&j1, &j2))
}

/// Unitarity residual above which a conjugating field is rejected.
pub const UNITARITY_GATE: f64 = 1e-8;

/// `u⁻¹ g u` for a unitary field `u`, checked at the probe momenta.
pub fn conjugate_by_unitary(
    u: &OperatorField,
    g: &DiffOp1,
    probes: &[MomentumPoint],
) -> Result<DiffOp1> {
    if u.dim() != g.dim() || u.arity() != g.arity() {
        return Err(Error::DimensionMismatch(alloc::format!(
            "conjugating a {}x{} operator by a {}x{} field",
            g.dim(),
            g.dim(),
            u.dim(),
            u.dim()
        )));
    }
    let mut worst: f64 = 0.0;
    for p in probes {
        worst = worst.max(u.eval(p)?.unitarity_residual());
    }
    if worst > UNITARITY_GATE {
        return Err(Error::NonUnitary(worst));
    }
    let ud = u.adjoint();
    let sandwich = |f: &OperatorField| ud.mul(f).mul(u);
    let drift = OperatorField::sum_or_zero(
        g.b.iter()
            .enumerate()
            .map(|(k, bk)| ud.mul(bk).mul(&u.partial(k)).scaled_c(I)),
        g.dim(),
        g.arity(),
    );
    Ok(DiffOp1 {
        a: sandwich(&g.a).add(&drift),
        b: g.b.iter().map(sandwich).collect(),
        x0: sandwich(&g.x0),
    })
}

#[cfg(test)]
mod tests {
    use super::super::scalar::named::*;
    use super::super::{sample_momenta, ExclusionRules};
    use super::*;
    use crate::clifford::sigma;
    use crate::linalg::ONE;

    fn pts(d: usize) -> Vec<MomentumPoint> {
        sample_momenta(d, 6, 11, &ExclusionRules::default())
    }

    #[test]
    fn canonical_pair() {
        let x1 = DiffOp1::position(0, 2, 3);
        let p1 = DiffOp1::momentum(0, 2, 3);
        let p2 = DiffOp1::momentum(1, 2, 3);
        let x2 = DiffOp1::position(1, 2, 3);
        for p in pts(3) {
            let c = diffop_commutator(&x1, &p1, &p, 0.0).unwrap();
            assert!(c.op.a.dist(&CMatrix::identity(2).scale(I)) < 1e-15);
            assert!(c.op.b.iter().all(|b| b.max_abs() == 0.0));
            let c = diffop_commutator(&x1, &p2, &p, 0.0).unwrap();
            assert_eq!(c.op.max_abs(), 0.0);
            let c = diffop_commutator(&x1, &x2, &p, 0.0).unwrap();
            assert_eq!(c.op.max_abs(), 0.0);
            assert_eq!(c.second_order_residual, 0.0);
        }
    }

    #[test]
    fn orbital_rotation_closes() {
        let l12 = DiffOp1::orbital(0, 1, 1, 3);
        let l23 = DiffOp1::orbital(1, 2, 1, 3);
        let l13 = DiffOp1::orbital(0, 2, 1, 3);
        for p in pts(3) {
            let c = diffop_commutator(&l12, &l23, &p, 0.0).unwrap();
            let want = l13.eval(&p, 0.0).unwrap().scale(-I);
            assert!(c.op.dist(&want) < 1e-12);
        }
    }

    #[test]
    fn antisymmetry() {
        let h = OperatorField::scalar_times(&p(1), sigma(1), 3)
            .add(&OperatorField::scalar_times(&abs_p3(), sigma(3), 3));
        let g1 = DiffOp1::boost(0, &h);
        let g2 = DiffOp1::orbital(0, 2, 2, 3).plus_matrix(&OperatorField::constant(sigma(2), 3));
        for p in pts(3) {
            for x0 in [0.0, 1.37] {
                let a = diffop_commutator(&g1, &g2, &p, x0).unwrap();
                let b = diffop_commutator(&g2, &g1, &p, x0).unwrap();
                assert!(a.op.dist(&b.op.scale(-ONE)) < 1e-12);
            }
        }
    }

    #[test]
    fn second_order_part_detected() {
        // x₁σ₁ and x₂σ₂ do not commute at second order
        let mut g1 = DiffOp1::zero(2, 3);
        g1.b[0] = OperatorField::constant(sigma(1), 3);
        let mut g2 = DiffOp1::zero(2, 3);
        g2.b[1] = OperatorField::constant(sigma(2), 3);
        let c = diffop_commutator(&g1, &g2, &[1.0, 1.0, 1.0], 0.0).unwrap();
        assert!(c.second_order_residual > 0.5);
    }

    #[test]
    fn conjugation_identity_and_momentum() {
        let probes = pts(3);
        let id = OperatorField::identity(2, 3);
        let x3 = DiffOp1::position(2, 2, 3);
        let same = conjugate_by_unitary(&id, &x3, &probes).unwrap();
        let p1 = DiffOp1::momentum(0, 2, 3);
        let theta = (transverse() / abs_p3()).atan();
        let u = OperatorField::scalar_times(&theta, sigma(2).scale(C64::new(0.0, 0.5)), 3).expm();
        let pc = conjugate_by_unitary(&u, &p1, &probes).unwrap();
        for p in &probes {
            assert!(same.eval(p, 0.0).unwrap().dist(&x3.eval(p, 0.0).unwrap()) < 1e-15);
            assert!(pc.eval(p, 0.0).unwrap().dist(&p1.eval(p, 0.0).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn conjugation_preserves_canonical_commutator() {
        let probes = pts(3);
        let theta = (transverse() / abs_p3()).atan();
        let u = OperatorField::scalar_times(&theta, sigma(1).scale(C64::new(0.0, 0.5)), 3).expm();
        for k in 0..3 {
            let xk = conjugate_by_unitary(&u, &DiffOp1::position(k, 2, 3), &probes).unwrap();
            for l in 0..3 {
                let pl = DiffOp1::momentum(l, 2, 3);
                for p in &probes {
                    let c = diffop_commutator(&xk, &pl, p, 0.0).unwrap();
                    let want = if k == l { I } else { C64::new(0.0, 0.0) };
                    assert!(c.op.a.dist(&CMatrix::identity(2).scale(want)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let u = OperatorField::scalar_times(&energy(), sigma(1), 3);
        let r = conjugate_by_unitary(&u, &DiffOp1::position(0, 2, 3), &pts(3));
        assert!(matches!(r, Err(Error::NonUnitary(_))));
    }
}
