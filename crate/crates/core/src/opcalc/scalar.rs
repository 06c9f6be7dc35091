//! Real scalar expressions of momentum with symbolic differentiation.

use alloc::sync::Arc;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A real-valued function of the momentum components, kept as an expression
/// tree so it can be differentiated exactly to any order.
#[derive(Clone)]
pub struct Scalar(Arc<Node>);

#[derive(Debug)]
enum Node {
    Const(f64),
    Coord(usize),
    Add(Scalar, Scalar),
    Mul(Scalar, Scalar),
    Div(Scalar, Scalar),
    Neg(Scalar),
    Sqrt(Scalar),
    Abs(Scalar),
    Sign(Scalar),
    Atan(Scalar),
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "{c}"),
            Node::Coord(k) => write!(f, "p{}", k + 1),
            Node::Add(a, b) => write!(f, "({a:?} + {b:?})"),
            Node::Mul(a, b) => write!(f, "{a:?}·{b:?}"),
            Node::Div(a, b) => write!(f, "({a:?})/({b:?})"),
            Node::Neg(a) => write!(f, "−{a:?}"),
            Node::Sqrt(a) => write!(f, "√({a:?})"),
            Node::Abs(a) => write!(f, "|{a:?}|"),
            Node::Sign(a) => write!(f, "sgn({a:?})"),
            Node::Atan(a) => write!(f, "atan({a:?})"),
        }
    }
}

impl From<f64> for Scalar {
    fn from(c: f64) -> Self {
        Scalar::constant(c)
    }
}

impl Scalar {
    fn node(n: Node) -> Self {
        Scalar(Arc::new(n))
    }

    pub fn constant(c: f64) -> Self {
        Self::node(Node::Const(c))
    }

    /// Momentum component `p_{k+1}` (zero-based axis).
    pub fn coord(k: usize) -> Self {
        Self::node(Node::Coord(k))
    }

    pub fn as_const(&self) -> Option<f64> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn sqrt(&self) -> Self {
        match self.as_const() {
            Some(c) if c >= 0.0 => Self::constant(libm::sqrt(c)),
            _ => Self::node(Node::Sqrt(self.clone())),
        }
    }

    pub fn abs(&self) -> Self {
        match self.as_const() {
            Some(c) => Self::constant(libm::fabs(c)),
            None => Self::node(Node::Abs(self.clone())),
        }
    }

    /// Sign function; undefined (singular) at zero.
    pub fn sign(&self) -> Self {
        match self.as_const() {
            Some(c) if c != 0.0 => Self::constant(c.signum()),
            _ => Self::node(Node::Sign(self.clone())),
        }
    }

    pub fn atan(&self) -> Self {
        match self.as_const() {
            Some(c) => Self::constant(libm::atan(c)),
            None => Self::node(Node::Atan(self.clone())),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Evaluates at `p`; singular points (sign or division at zero, negative
    /// square roots, non-finite intermediate values) are errors.
    pub fn eval(&self, p: &[f64]) -> Result<f64> {
        let v = match &*self.0 {
            Node::Const(c) => *c,
            Node::Coord(k) => *p.get(*k).ok_or_else(|| {
                Error::DimensionMismatch(alloc::format!(
                    "axis {k} of a {}-dimensional momentum",
                    p.len()
                ))
            })?,
            Node::Add(a, b) => a.eval(p)? + b.eval(p)?,
            Node::Mul(a, b) => a.eval(p)? * b.eval(p)?,
            Node::Div(a, b) => {
                let den = b.eval(p)?;
                if den == 0.0 {
                    return Err(Error::SingularPoint);
                }
                a.eval(p)? / den
            }
            Node::Neg(a) => -a.eval(p)?,
            Node::Sqrt(a) => {
                let x = a.eval(p)?;
                if x < 0.0 {
                    return Err(Error::SingularPoint);
                }
                libm::sqrt(x)
            }
            Node::Abs(a) => libm::fabs(a.eval(p)?),
            Node::Sign(a) => {
                let x = a.eval(p)?;
                if x == 0.0 {
                    return Err(Error::SingularPoint);
                }
                x.signum()
            }
            Node::Atan(a) => libm::atan(a.eval(p)?),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::SingularPoint)
        }
    }

    /// Exact partial derivative with respect to axis `k`.
    pub fn diff(&self, k: usize) -> Self {
        match &*self.0 {
            Node::Const(_) | Node::Sign(_) => Self::constant(0.0),
            Node::Coord(j) => Self::constant(if *j == k { 1.0 } else { 0.0 }),
            Node::Add(a, b) => a.diff(k) + b.diff(k),
            Node::Mul(a, b) => &(&a.diff(k) * b) + &(a * &b.diff(k)),
            Node::Div(a, b) => {
                let num = &(&a.diff(k) * b) - &(a * &b.diff(k));
                &num / &b.square()
            }
            Node::Neg(a) => -a.diff(k),
            Node::Sqrt(a) => &a.diff(k) / &(&Scalar::constant(2.0) * self),
            Node::Abs(a) => &a.sign() * &a.diff(k),
            Node::Atan(a) => &a.diff(k) / &(&Scalar::constant(1.0) + &a.square()),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Scalar::constant(a + b),
            (Some(0.0), _) => rhs.clone(),
            (_, Some(0.0)) => self.clone(),
            _ => Scalar::node(Node::Add(self.clone(), rhs.clone())),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Scalar::constant(a * b),
            (Some(0.0), _) => Scalar::constant(0.0),
            (_, Some(0.0)) => Scalar::constant(0.0),
            (Some(1.0), _) => rhs.clone(),
            (_, Some(1.0)) => self.clone(),
            _ => Scalar::node(Node::Mul(self.clone(), rhs.clone())),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self.as_const(), rhs.as_const()) {
            (Some(0.0), _) => Scalar::constant(0.0),
            (Some(a), Some(b)) if b != 0.0 => Scalar::constant(a / b),
            (_, Some(1.0)) => self.clone(),
            _ => Scalar::node(Node::Div(self.clone(), rhs.clone())),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &*self.0 {
            Node::Const(c) => Scalar::constant(-c),
            Node::Neg(a) => a.clone(),
            _ => Scalar::node(Node::Neg(self.clone())),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
        impl $tr<f64> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: f64) -> Scalar { self.$m(&Scalar::constant(rhs)) }
        }
        impl $tr<f64> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: f64) -> Scalar { (&self).$m(&Scalar::constant(rhs)) }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Named momentum scalars shared by the catalog.
pub mod named {
    use super::Scalar;

    pub fn p(k: usize) -> Scalar {
        Scalar::coord(k - 1)
    }

    /// `E = √(p₁² + p₂² + p₃²)`.
    pub fn energy() -> Scalar {
        (p(1).square() + p(2).square() + p(3).square()).sqrt()
    }

    /// `√(p₁² + p₂²)`.
    pub fn transverse() -> Scalar {
        (p(1).square() + p(2).square()).sqrt()
    }

    /// `|p₃|`.
    pub fn abs_p3() -> Scalar {
        p(3).abs()
    }

    /// `e₃ = p₃/|p₃|`.
    pub fn e3() -> Scalar {
        p(3).sign()
    }

    /// `q₃ = √(p₃² + m²)`.
    pub fn q3(mass: f64) -> Scalar {
        (p(3).square() + mass * mass).sqrt()
    }

    /// Euclidean norm over all `d` components.
    pub fn norm(d: usize) -> Scalar {
        (1..=d)
            .map(|k| p(k).square())
            .reduce(|a, b| a + b)
            .unwrap_or_else(|| Scalar::constant(0.0))
            .sqrt()
    }
}
