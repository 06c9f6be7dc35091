//! Matrix-valued fields of momentum.
//!
//! An [`OperatorField`] is an expression tree over constant matrices, real
//! scalar coefficients, sums, products, adjoints, inverses and matrix
//! exponentials. Partial derivatives are produced symbolically, so they are
//! exact and can be nested to any order. The derivative of `exp(X)` uses the
//! block identity `exp([[X, X'], [0, X]]) = [[e^X, D], [0, e^X]]`, where `D`
//! is the directional derivative.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{expm, CMatrix, C64};

#[derive(Clone)]
pub struct OperatorField {
    dim: usize,
    arity: usize,
    node: Arc<Node>,
}

enum Node {
    Zero,
    Const(CMatrix),
    Scaled(Scalar, OperatorField),
    CScaled(C64, OperatorField),
    Sum(Vec<OperatorField>),
    Product(OperatorField, OperatorField),
    Adjoint(OperatorField),
    Inverse(OperatorField),
    Expm(OperatorField),
    UpperBlock(OperatorField, OperatorField),
    TopRight(OperatorField),
}

impl fmt::Debug for OperatorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Zero => write!(f, "0"),
            Node::Const(_) => write!(f, "M{}", self.dim),
            Node::Scaled(s, g) => write!(f, "{s:?}·{g:?}"),
            Node::CScaled(c, g) => write!(f, "({c})·{g:?}"),
            Node::Sum(v) => f.debug_list().entries(v.iter()).finish(),
            Node::Product(a, b) => write!(f, "({a:?})({b:?})"),
            Node::Adjoint(a) => write!(f, "({a:?})†"),
            Node::Inverse(a) => write!(f, "({a:?})⁻¹"),
            Node::Expm(a) => write!(f, "exp({a:?})"),
            Node::UpperBlock(a, b) => write!(f, "[[{a:?}, {b:?}], [0, ·]]"),
            Node::TopRight(a) => write!(f, "tr({a:?})"),
        }
    }
}

impl OperatorField {
    fn new(dim: usize, arity: usize, node: Node) -> Self {
        Self {
            dim,
            arity,
            node: Arc::new(node),
        }
    }

    pub fn zero(dim: usize, arity: usize) -> Self {
        Self::new(dim, arity, Node::Zero)
    }

    pub fn constant(m: CMatrix, arity: usize) -> Self {
        Self::new(m.dim(), arity, Node::Const(m))
    }

    pub fn identity(dim: usize, arity: usize) -> Self {
        Self::constant(CMatrix::identity(dim), arity)
    }

    /// `s(p)·M` for a constant matrix `M`.
    pub fn scalar_times(s: &Scalar, m: CMatrix, arity: usize) -> Self {
        Self::constant(m, arity).scaled(s)
    }

    /// `s(p)·1`.
    pub fn scalar(s: &Scalar, dim: usize, arity: usize) -> Self {
        Self::identity(dim, arity).scaled(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Momentum dimension `d`.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        matches!(*self.node, Node::Zero)
    }

    fn check_compatible(&self, other: &Self, op: &str) {
        assert!(
            self.dim == other.dim && self.arity == other.arity,
            "{op}: incompatible fields ({}x{}, d={}) vs ({}x{}, d={})",
            self.dim,
            self.dim,
            self.arity,
            other.dim,
            other.dim,
            other.arity
        );
    }

    pub fn scaled(&self, s: &Scalar) -> Self {
        if s.is_zero() || self.is_zero() {
            return Self::zero(self.dim, self.arity);
        }
        if s.as_const() == Some(1.0) {
            return self.clone();
        }
        Self::new(self.dim, self.arity, Node::Scaled(s.clone(), self.clone()))
    }

    pub fn scaled_c(&self, c: C64) -> Self {
        if c == C64::new(0.0, 0.0) || self.is_zero() {
            return Self::zero(self.dim, self.arity);
        }
        if c == C64::new(1.0, 0.0) {
            return self.clone();
        }
        if let Node::Const(m) = &*self.node {
            return Self::constant(m.scale(c), self.arity);
        }
        Self::new(self.dim, self.arity, Node::CScaled(c, self.clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::sum([self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled_c(C64::new(-1.0, 0.0)))
    }

    pub fn neg(&self) -> Self {
        self.scaled_c(C64::new(-1.0, 0.0))
    }

    /// Sum of fields; zero terms are dropped and nested sums flattened.
    pub fn sum(terms: impl IntoIterator<Item = Self>) -> Self {
        let mut shape: Option<(usize, usize)> = None;
        let mut out: Vec<Self> = Vec::new();
        for t in terms {
            match shape {
                Some((dim, arity)) => assert!(
                    t.dim == dim && t.arity == arity,
                    "sum: incompatible fields ({dim}x{dim}, d={arity}) vs ({}x{}, d={})",
                    t.dim,
                    t.dim,
                    t.arity
                ),
                None => shape = Some((t.dim, t.arity)),
            }
            match &*t.node {
                Node::Zero => {}
                Node::Sum(inner) => out.extend(inner.iter().cloned()),
                _ => out.push(t),
            }
        }
        let (dim, arity) = shape.expect("sum of an empty field list has no dimension");
        match out.len() {
            0 => Self::zero(dim, arity),
            1 => out.pop().unwrap(),
            _ => Self::new(dim, arity, Node::Sum(out)),
        }
    }

    /// Sum that tolerates an empty list by returning zero of the given shape.
    pub fn sum_or_zero(terms: impl IntoIterator<Item = Self>, dim: usize, arity: usize) -> Self {
        Self::sum(core::iter::once(Self::zero(dim, arity)).chain(terms))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other, "mul");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.dim, self.arity);
        }
        if let (Node::Const(a), Node::Const(b)) = (&*self.node, &*other.node) {
            return Self::constant(a * b, self.arity);
        }
        Self::new(self.dim, self.arity, Node::Product(self.clone(), other.clone()))
    }

    pub fn adjoint(&self) -> Self {
        match &*self.node {
            Node::Zero => self.clone(),
            Node::Const(m) => Self::constant(m.adjoint(), self.arity),
            Node::Adjoint(inner) => inner.clone(),
            _ => Self::new(self.dim, self.arity, Node::Adjoint(self.clone())),
        }
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.dim, self.arity, Node::Inverse(self.clone()))
    }

    pub fn expm(&self) -> Self {
        Self::new(self.dim, self.arity, Node::Expm(self.clone()))
    }

    /// `[[a, b], [0, a]]`, dimension doubled.
    fn upper_block(a: &Self, b: &Self) -> Self {
        a.check_compatible(b, "upper_block");
        if a.is_zero() && b.is_zero() {
            return Self::zero(2 * a.dim, a.arity);
        }
        Self::new(2 * a.dim, a.arity, Node::UpperBlock(a.clone(), b.clone()))
    }

    fn top_right(f: &Self) -> Self {
        if f.is_zero() {
            return Self::zero(f.dim / 2, f.arity);
        }
        Self::new(f.dim / 2, f.arity, Node::TopRight(f.clone()))
    }

    pub fn eval(&self, p: &[f64]) -> Result<CMatrix> {
        if p.len() != self.arity {
            return Err(Error::DimensionMismatch(alloc::format!(
                "field on {}-dimensional momenta evaluated at a {}-vector",
                self.arity,
                p.len()
            )));
        }
        let m = self.eval_unchecked(p)?;
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::SingularPoint)
        }
    }

    fn eval_unchecked(&self, p: &[f64]) -> Result<CMatrix> {
        Ok(match &*self.node {
            Node::Zero => CMatrix::zeros(self.dim),
            Node::Const(m) => m.clone(),
            Node::Scaled(s, f) => f.eval_unchecked(p)?.scale_re(s.eval(p)?),
            Node::CScaled(c, f) => f.eval_unchecked(p)?.scale(*c),
            Node::Sum(terms) => {
                let mut acc = terms[0].eval_unchecked(p)?;
                for t in &terms[1..] {
                    acc += &t.eval_unchecked(p)?;
                }
                acc
            }
            Node::Product(a, b) => &a.eval_unchecked(p)? * &b.eval_unchecked(p)?,
            Node::Adjoint(a) => a.eval_unchecked(p)?.adjoint(),
            Node::Inverse(a) => a
                .eval_unchecked(p)?
                .inverse()
                .map_err(|_| Error::SingularPoint)?,
            Node::Expm(a) => expm(&a.eval_unchecked(p)?).map_err(|_| Error::SingularPoint)?,
            Node::UpperBlock(a, b) => {
                let av = a.eval_unchecked(p)?;
                let bv = b.eval_unchecked(p)?;
                CMatrix::from_blocks(&av, &bv, &CMatrix::zeros(a.dim), &av)
            }
            Node::TopRight(f) => f.eval_unchecked(p)?.block(0, 1),
        })
    }

    /// Exact partial derivative field ∂f/∂p_{k+1}.
    pub fn partial(&self, k: usize) -> Self {
        let (dim, arity) = (self.dim, self.arity);
        match &*self.node {
            Node::Zero | Node::Const(_) => Self::zero(dim, arity),
            Node::Scaled(s, f) => f.scaled(&s.diff(k)).add(&f.partial(k).scaled(s)),
            Node::CScaled(c, f) => f.partial(k).scaled_c(*c),
            Node::Sum(terms) => Self::sum_or_zero(terms.iter().map(|t| t.partial(k)), dim, arity),
            Node::Product(a, b) => a.partial(k).mul(b).add(&a.mul(&b.partial(k))),
            Node::Adjoint(a) => a.partial(k).adjoint(),
            Node::Inverse(a) => {
                let da = a.partial(k);
                if da.is_zero() {
                    return Self::zero(dim, arity);
                }
                self.mul(&da).mul(self).neg()
            }
            Node::Expm(a) => {
                let da = a.partial(k);
                if da.is_zero() {
                    return Self::zero(dim, arity);
                }
                Self::top_right(&Self::upper_block(a, &da).expm())
            }
            Node::UpperBlock(a, b) => Self::upper_block(&a.partial(k), &b.partial(k)),
            Node::TopRight(f) => Self::top_right(&f.partial(k)),
        }
    }

    /// Value of ∂f/∂p_{k+1} at `p`.
    pub fn deriv(&self, p: &[f64], k: usize) -> Result<CMatrix> {
        self.partial(k).eval(p)
    }
}

#[cfg(test)]
mod tests {
    use super::super::scalar::named::*;
    use super::*;
    use crate::clifford::sigma;

    fn fd(f: &OperatorField, p: &[f64], k: usize, h: f64) -> CMatrix {
        let mut a = p.to_vec();
        let mut b = p.to_vec();
        a[k] += h;
        b[k] -= h;
        (&f.eval(&a).unwrap() - &f.eval(&b).unwrap()).scale_re(0.5 / h)
    }

    #[test]
    fn product_rule_matches_finite_difference() {
        let f = OperatorField::scalar_times(&p(1), sigma(1), 3)
            .add(&OperatorField::scalar_times(&(energy() * abs_p3()), sigma(2), 3));
        let g = OperatorField::scalar_times(&(Scalar::constant(1.0) / (energy() + abs_p3())), sigma(3), 3);
        let h = f.mul(&g);
        let pt = [0.4, -1.3, -0.8];
        for k in 0..3 {
            let exact = h.deriv(&pt, k).unwrap();
            assert!(exact.dist(&fd(&h, &pt, k, 1e-6)) < 1e-7);
        }
    }

    #[test]
    fn expm_derivative_is_exact() {
        // exp(i·atan(p1/p3)·σ₂/2) has a closed-form derivative
        let theta = (p(1) / p(3)).atan();
        let x = OperatorField::scalar_times(&theta, sigma(2).scale(C64::new(0.0, 0.5)), 3);
        let u = x.expm();
        let pt = [0.7, 0.2, 1.1];
        for k in 0..3 {
            let exact = u.deriv(&pt, k).unwrap();
            assert!(exact.dist(&fd(&u, &pt, k, 1e-6)) < 1e-8);
        }
        // second derivative through nested blocks
        let uu = u.partial(0).partial(0);
        let v = uu.eval(&pt).unwrap();
        let fd2 = fd(&u.partial(0), &pt, 0, 1e-6);
        assert!(v.dist(&fd2) < 1e-7);
    }

    #[test]
    fn inverse_and_adjoint_derivatives() {
        let a = OperatorField::identity(2, 3)
            .scaled(&energy())
            .add(&OperatorField::scalar_times(&p(2), sigma(2).scale(C64::new(0.0, 1.0)), 3));
        let pt = [1.0, 0.5, -0.3];
        for f in [a.inverse(), a.adjoint()] {
            for k in 0..3 {
                assert!(f.deriv(&pt, k).unwrap().dist(&fd(&f, &pt, k, 1e-6)) < 1e-8);
            }
        }
    }

    #[test]
    fn zero_folding() {
        let c = OperatorField::constant(sigma(1), 3);
        assert!(c.partial(0).is_zero());
        let u1 = OperatorField::scalar_times(&e3(), sigma(3), 3);
        assert!(u1.partial(2).is_zero());
        assert!(c.mul(&OperatorField::zero(2, 3)).is_zero());
    }

    #[test]
    fn singular_points_are_reported() {
        let f = OperatorField::scalar_times(&e3(), sigma(3), 3);
        assert_eq!(f.eval(&[1.0, 1.0, 0.0]), Err(Error::SingularPoint));
        assert!(matches!(f.eval(&[1.0, 1.0]), Err(Error::DimensionMismatch(_))));
    }
}
