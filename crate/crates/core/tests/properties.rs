use proptest::prelude::*;
use wavesym_core::equations::{catalog_equation, catalog_unitary, Params, EQUATIONS};
use wavesym_core::linalg::{expm, svd_nullspace, CMatrix, RectMatrix, C64};
use wavesym_core::opcalc::{conjugate_by_unitary, diffop_commutator, DiffOp1, MomentumPoint};
use wavesym_core::poincare::{generator_set, helicity_field, GENERATOR_SETS};
use wavesym_core::symmetry::{solve_intertwiner, SolveConfig, SymmetryElement};

fn matrix(n: usize, bound: f64) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |v| {
        let m = CMatrix::from_fn(n, |r, c| C64::new(v[r * n + c].0, v[r * n + c].1));
        let f = m.frobenius();
        if f > bound {
            m.scale_re(bound / f)
        } else {
            m
        }
    })
}

/// Momenta away from the excluded hyperplane `p₃ = 0`.
fn momentum() -> impl Strategy<Value = [f64; 3]> {
    (-3.0..3.0f64, -3.0..3.0f64, 0.05..3.0f64, any::<bool>()).prop_map(|(a, b, c, s)| [a, b, if s { c } else { -c }])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expm_inverts(m in matrix(4, 5.0)) {
        let prod = &expm(&m).unwrap() * &expm(&m.scale_re(-1.0)).unwrap();
        prop_assert!(prod.dist(&CMatrix::identity(4)) <= 1e-11);
    }

    #[test]
    fn expm_of_anti_hermitian_is_unitary(m in matrix(4, 5.0)) {
        let a = &m - &m.adjoint();
        prop_assert!(expm(&a).unwrap().unitarity_residual() <= 1e-11);
    }

    #[test]
    fn nullspace_vectors_are_annihilated(m in matrix(4, 3.0), rank in 1usize..4) {
        // Zeroing trailing rows leaves a nullspace of known minimal size.
        let mut rows = RectMatrix::new(4);
        for r in 0..rank {
            rows.push_row(&(0..4).map(|c| m[(r, c)]).collect::<Vec<_>>());
        }
        let tol = 1e-8;
        let ns = svd_nullspace(&rows, tol).unwrap();
        prop_assert!(ns.vectors.len() >= 4 - rank);
        for v in &ns.vectors {
            let r = rows.apply(v).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(r <= 10.0 * tol * ns.sigma_max());
        }
    }

    #[test]
    fn commutator_is_antisymmetric(p in momentum(), x0 in -2.0..2.0f64, set in 0usize..GENERATOR_SETS.len()) {
        let gs = generator_set(GENERATOR_SETS[set], Params::default()).unwrap();
        let ops: Vec<&DiffOp1> = gs.generators.iter().map(|g| &g.op).collect();
        let q = &p[..gs.d];
        for (i, a) in ops.iter().enumerate() {
            for b in &ops[i..] {
                let ab = diffop_commutator(a, b, q, x0).unwrap().op;
                let ba = diffop_commutator(b, a, q, x0).unwrap().op;
                prop_assert!(ab.a.dist(&ba.a.scale_re(-1.0)) <= 1e-12);
                for (x, y) in ab.b.iter().zip(&ba.b) {
                    prop_assert!(x.dist(&y.scale_re(-1.0)) <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn translations_commute(p in momentum(), set in 0usize..GENERATOR_SETS.len()) {
        let gs = generator_set(GENERATOR_SETS[set], Params::default()).unwrap();
        let mut ops = vec![gs.get("H").unwrap()];
        for k in 1..=gs.d {
            ops.push(gs.get(&format!("P{k}")).unwrap());
        }
        let q = &p[..gs.d];
        for (i, a) in ops.iter().enumerate() {
            for b in &ops[i + 1..] {
                let c = diffop_commutator(a, b, q, 1.37).unwrap();
                prop_assert!(c.op.a.max_abs() <= 1e-12);
                prop_assert!(c.op.b.iter().all(|m| m.max_abs() <= 1e-12));
            }
        }
    }

    #[test]
    fn hamiltonians_square_to_a_scalar(p in momentum(), p4 in -3.0..3.0f64, mass in 0.5..3.0f64, kappa in 0.5..3.0f64) {
        let params = Params { mass, kappa };
        let full = [p[0], p[1], p[2], p4];
        for name in EQUATIONS {
            let eq = catalog_equation(name, params).unwrap();
            if eq.dispersion.is_none() {
                continue;
            }
            let h = eq.hamiltonian.eval(&full[..eq.d]).unwrap();
            let sq = &h * &h;
            let s = sq[(0, 0)];
            prop_assert!(s.im.abs() <= 1e-10 && s.re > 0.0, "{name}");
            prop_assert!(sq.dist(&CMatrix::identity(eq.dim).scale(s)) <= 1e-10 * s.re.max(1.0), "{name}");
        }
    }

    #[test]
    fn helicity_is_half_integral_and_conserved(p in momentum()) {
        for name in ["psi", "chi", "phi", "chi2", "weyl"] {
            let gs = generator_set(name, Params::default()).unwrap();
            let lam = helicity_field(&gs).unwrap().eval(&p).unwrap();
            let h = gs.hamiltonian.eval(&p).unwrap();
            prop_assert!(lam.commutator(&h).max_abs() <= 1e-10, "{name}");
            let id = CMatrix::identity(gs.dim);
            prop_assert!((&lam * &lam).dist(&id.scale_re(0.25)) <= 1e-10, "{name}");
        }
    }

    #[test]
    fn conjugation_keeps_canonical_commutators(p in momentum()) {
        let probes = [MomentumPoint::new(p.to_vec())];
        for name in ["U1", "U2", "V1", "V", "U21"] {
            let u = catalog_unitary(name, Params::default()).unwrap();
            if u.d != 3 {
                continue;
            }
            for k in 0..3 {
                let x = conjugate_by_unitary(&u.closed, &DiffOp1::position(k, u.dim, 3), &probes).unwrap();
                for l in 0..3 {
                    let c = diffop_commutator(&x, &DiffOp1::momentum(l, u.dim, 3), &p, 0.0).unwrap();
                    let want = CMatrix::identity(u.dim).scale(C64::new(0.0, if k == l { 1.0 } else { 0.0 }));
                    prop_assert!(c.op.a.dist(&want) <= 1e-9, "{name}");
                }
            }
        }
    }
}

#[test]
fn irreducible_intertwiners_are_unique() {
    let cfg = SolveConfig::default();
    for name in ["weyl_plus", "weyl_minus", "chi_plus", "chi_minus", "flat_plus", "flat_minus"] {
        let eq = catalog_equation(name, Params::default()).unwrap();
        for g in SymmetryElement::all(eq.d) {
            if let Some(m) = solve_intertwiner(&eq, &g, &cfg).unwrap().intertwiner() {
                assert_eq!(m.nullity, 1, "{name} {}", g.label());
            }
        }
    }
}
