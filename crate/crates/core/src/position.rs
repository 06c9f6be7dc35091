//! Position operators obtained by conjugating `x_k = i∂/∂p_k` with the
//! diagonalizing transforms, and their closed forms.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::clifford::{gamma_set_for, sigma, spin, Representation};
use crate::equations::{catalog_unitary, Params};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, I};
use crate::opcalc::scalar::named::{abs_p3, e3, energy, p};
use crate::opcalc::{
    conjugate_by_unitary, diffop_commutator, DiffOp1, MomentumPoint, OperatorField, PointOp, Scalar,
};

/// Agreement threshold between closed forms and conjugation-built operators.
pub const POSITION_TOL: f64 = 1e-9;
/// Threshold on `[X_j, p_k] = iδ_jk`.
pub const CANONICAL_TOL: f64 = 1e-10;

pub const POSITIONS: &[&str] = &["Xchi", "Xpsi", "Xchi2", "XW"];

/// Three components `x_k + A_k(p)`.
#[derive(Clone, Debug)]
pub struct PositionOperator {
    pub name: String,
    pub components: Vec<DiffOp1>,
}

impl PositionOperator {
    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }
}

/// The catalog transform whose inverse conjugation yields `name`.
pub fn position_unitary(name: &str) -> Result<&'static str> {
    match name {
        "Xchi" => Ok("U2"),
        "Xpsi" => Ok("U21"),
        "Xchi2" => Ok("V1"),
        "XW" => Ok("V"),
        _ => Err(Error::UnknownPosition(name.to_string())),
    }
}

/// `X_k = u⁻¹ x_k u` for every axis.
pub fn position_from_unitary(
    name: &str,
    u: &OperatorField,
    probes: &[MomentumPoint],
) -> Result<PositionOperator> {
    let (dim, d) = (u.dim(), u.arity());
    let components = (0..d)
        .map(|k| conjugate_by_unitary(u, &DiffOp1::position(k, dim, d), probes))
        .collect::<Result<Vec<_>>>()?;
    Ok(PositionOperator {
        name: name.to_string(),
        components,
    })
}

/// Conjugation-built operator for a catalog name.
pub fn position_by_conjugation(name: &str, probes: &[MomentumPoint], params: Params) -> Result<PositionOperator> {
    let u = catalog_unitary(position_unitary(name)?, params)?;
    position_from_unitary(name, &u.closed, probes)
}

fn with_matrix_parts(name: &str, parts: [OperatorField; 3]) -> PositionOperator {
    let dim = parts[0].dim();
    PositionOperator {
        name: name.to_string(),
        components: parts
            .into_iter()
            .enumerate()
            .map(|(k, f)| DiffOp1::position(k, dim, 3).plus_matrix(&f))
            .collect(),
    }
}

fn term(s: Scalar, m: CMatrix) -> OperatorField {
    OperatorField::scalar_times(&s, m, 3)
}

fn sum(terms: Vec<OperatorField>) -> OperatorField {
    let dim = terms[0].dim();
    OperatorField::sum_or_zero(terms, dim, 3)
}

/// The closed-form position operator.
pub fn position_closed_form(name: &str) -> Result<PositionOperator> {
    let e = energy();
    let den = e.clone() * (e.clone() + abs_p3());
    let e2 = e.square();
    let one = Scalar::constant(1.0);
    let transverse = [1usize, 2];
    match name {
        "Xchi" | "Xpsi" => {
            let g = gamma_set_for(Representation::Rep26);
            let s5 = |c| spin(&g, 5, c);
            let g3 = g.gamma(3).clone();
            // Σ_c S₅c p_c
            let s5p = |pre: &CMatrix, w: Scalar| {
                sum(transverse.iter().map(|&c| term(p(c) * w.clone(), pre * &s5(c))).collect())
            };
            let lead = if name == "Xchi" {
                CMatrix::identity(4)
            } else {
                g3.clone()
            };
            let lateral = |a: usize| {
                let mut parts = Vec::new();
                if name == "Xchi" {
                    parts.push(term(-(one.clone() / e.clone()), s5(a)));
                    parts.push(s5p(&lead, p(a) / (e2.clone() * (e.clone() + abs_p3()))));
                } else {
                    parts.push(term(e3() / e.clone(), &g3 * &s5(a)));
                    parts.push(s5p(&lead, -(e3() * p(a)) / (e2.clone() * (e.clone() + abs_p3()))));
                }
                for &c in &transverse {
                    if c != a {
                        parts.push(term(p(c) / den.clone(), spin(&g, a, c)));
                    }
                }
                sum(parts)
            };
            let axial = if name == "Xchi" {
                s5p(&lead, e3() / e2.clone())
            } else {
                s5p(&lead, -(one.clone() / e2.clone()))
            };
            Ok(with_matrix_parts(name, [lateral(1), lateral(2), axial]))
        }
        "Xchi2" | "XW" => {
            let sg = sigma;
            let comm = |a: usize, c: usize| (&(&sg(a) * &sg(c)) - &(&sg(c) * &sg(a))).scale(C64::new(0.0, -0.25));
            let lateral = |a: usize| {
                let mut parts = Vec::new();
                let (lead, tail): (CMatrix, Scalar) = if name == "Xchi2" {
                    (sg(a).scale_re(-0.5), one.clone() / e.clone())
                } else {
                    ((&sg(3) * &sg(a)).scale(C64::new(0.0, 0.5)), e3() / e.clone())
                };
                parts.push(term(tail, lead));
                for &c in &transverse {
                    let m = if name == "Xchi2" {
                        sg(c).scale_re(0.5)
                    } else {
                        (&sg(3) * &sg(c)).scale(C64::new(0.0, -0.5))
                    };
                    let w = if name == "Xchi2" { p(c) * p(a) } else { e3() * p(c) * p(a) };
                    parts.push(term(w / (e2.clone() * (e.clone() + abs_p3())), m));
                    if c != a {
                        parts.push(term(p(c) / den.clone(), comm(a, c)));
                    }
                }
                sum(parts)
            };
            let axial = sum(
                transverse
                    .iter()
                    .map(|&c| {
                        if name == "Xchi2" {
                            term(e3() * p(c) / e2.clone(), sg(c).scale_re(0.5))
                        } else {
                            term(p(c) / e2.clone(), (&sg(3) * &sg(c)).scale(C64::new(0.0, -0.5)))
                        }
                    })
                    .collect(),
            );
            Ok(with_matrix_parts(name, [lateral(1), lateral(2), axial]))
        }
        _ => Err(Error::UnknownPosition(name.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PositionReport {
    pub name: String,
    pub unitary: String,
    /// Closed form against conjugation.
    pub residual: f64,
    /// Deviation of `[X_j, p_k]` from `iδ_jk`.
    pub canonical: f64,
    /// Largest `|[X_j, X_k]|`, informational.
    pub noncommutativity: f64,
    /// Largest anti-Hermitian part of the matrix parts, informational.
    pub hermiticity: f64,
    pub samples_used: usize,
    pub pass: bool,
}

fn canonical_deviation(x: &PositionOperator, q: &[f64]) -> Result<f64> {
    let (dim, d) = (x.dim(), q.len());
    let mut worst: f64 = 0.0;
    for (j, xj) in x.components.iter().enumerate() {
        for k in 0..d {
            let c = diffop_commutator(xj, &DiffOp1::momentum(k, dim, d), q, 0.0)?;
            let mut expected = PointOp::zero(dim, d);
            if j == k {
                expected.a = CMatrix::identity(dim).scale(I);
            }
            worst = worst.max(c.op.dist(&expected));
        }
    }
    Ok(worst)
}

/// Compares the closed form with the conjugation-built operator and checks
/// the canonical relations.
pub fn verify_position(name: &str, samples: &[MomentumPoint], params: Params) -> Result<PositionReport> {
    let built = position_by_conjugation(name, samples, params)?;
    let closed = position_closed_form(name)?;
    let (mut residual, mut canonical, mut noncomm, mut herm) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for q in samples {
        for (b, c) in built.components.iter().zip(&closed.components) {
            let pb = b.eval(q, 0.0)?;
            residual = residual.max(pb.dist(&c.eval(q, 0.0)?));
            herm = herm.max(pb.a.hermiticity_residual());
        }
        canonical = canonical.max(canonical_deviation(&built, q)?);
        for j in 0..3 {
            for k in j + 1..3 {
                let c = diffop_commutator(&built.components[j], &built.components[k], q, 0.0)?;
                noncomm = noncomm.max(c.op.max_abs());
            }
        }
    }
    Ok(PositionReport {
        name: name.to_string(),
        unitary: position_unitary(name)?.to_string(),
        residual,
        canonical,
        noncommutativity: noncomm,
        hermiticity: herm,
        samples_used: samples.len(),
        pass: residual <= POSITION_TOL && canonical <= CANONICAL_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcalc::{sample_momenta, ExclusionRules};

    fn samples() -> Vec<MomentumPoint> {
        sample_momenta(3, 12, 42, &ExclusionRules::default())
    }

    #[test]
    fn identity_gives_plain_position() {
        let u = OperatorField::identity(2, 3);
        let x = position_from_unitary("x", &u, &samples()).unwrap();
        for (k, c) in x.components.iter().enumerate() {
            let pt = c.eval(&samples()[0], 0.0).unwrap();
            assert_eq!(pt.a.max_abs(), 0.0);
            assert!(pt.b[k].dist(&CMatrix::identity(2)) == 0.0);
        }
    }

    #[test]
    fn closed_forms_match_conjugation() {
        for name in POSITIONS {
            let r = verify_position(name, &samples(), Params::default()).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn both_p3_signs_sampled() {
        let s = samples();
        assert!(s.iter().any(|q| q[2] > 0.0) && s.iter().any(|q| q[2] < 0.0));
    }

    #[test]
    fn axial_component_of_xchi() {
        let g = gamma_set_for(Representation::Rep26);
        let x = position_by_conjugation("Xchi", &samples(), Params::default()).unwrap();
        for q in samples() {
            let e2 = q.energy() * q.energy();
            let sg = q[2].signum();
            let s51 = spin(&g, 5, 1);
            let s52 = spin(&g, 5, 2);
            assert!(s51.dist(&g.gamma(1).scale(C64::new(0.0, -0.5))) < 1e-15);
            let want = (&s51.scale_re(q[0]) + &s52.scale_re(q[1])).scale_re(sg / e2);
            assert!(x.components[2].eval(&q, 0.0).unwrap().a.dist(&want) < 1e-12);
        }
    }

    #[test]
    fn axial_component_of_xw() {
        let x = position_by_conjugation("XW", &samples(), Params::default()).unwrap();
        for q in samples() {
            let e2 = q.energy() * q.energy();
            let sb = &sigma(1).scale_re(q[0]) + &sigma(2).scale_re(q[1]);
            let want = (&sigma(3) * &sb).scale(C64::new(0.0, -1.0 / (2.0 * e2)));
            assert!(x.components[2].eval(&q, 0.0).unwrap().a.dist(&want) < 1e-12);
        }
    }

    #[test]
    fn canonical_pairs() {
        let x = position_by_conjugation("Xchi", &samples(), Params::default()).unwrap();
        let q = &samples()[3];
        let c = diffop_commutator(&x.components[0], &DiffOp1::momentum(0, 4, 3), q, 0.0).unwrap();
        assert!(c.op.a.dist(&CMatrix::identity(4).scale(I)) < 1e-12);
        let c = diffop_commutator(&x.components[0], &DiffOp1::momentum(1, 4, 3), q, 0.0).unwrap();
        assert!(c.op.max_abs() < 1e-12);
    }

    #[test]
    fn perturbed_closed_form_detected() {
        let s = samples();
        let built = position_by_conjugation("Xchi2", &s, Params::default()).unwrap();
        let mut closed = position_closed_form("Xchi2").unwrap();
        closed.components[0] = closed.components[0].plus_matrix(&term(p(2) / energy().square(), sigma(3).scale_re(1e-6)));
        let r = s
            .iter()
            .map(|q| built.components[0].eval(q, 0.0).unwrap().dist(&closed.components[0].eval(q, 0.0).unwrap()))
            .fold(0.0f64, f64::max);
        assert!(r > POSITION_TOL);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(position_closed_form("Y"), Err(Error::UnknownPosition(_))));
        assert!(position_unitary("Y").is_err());
    }
}
