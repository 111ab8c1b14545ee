mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use symspace::{build_algebra, AlgebraElement, Family, LieAlgebraRealization};

fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

/// Killing form of the classical families as a multiple of the trace form
/// of the defining (for su: realified) representation.
fn killing_constant(fam: Family, params: &[usize]) -> f64 {
    match fam {
        Family::Sl => 2.0 * params[0] as f64,
        Family::So => (params[0] + params[1]) as f64 - 2.0,
        Family::Sp => 2.0 * params[0] as f64 + 2.0,
        Family::Su => (params[0] + params[1]) as f64,
    }
}

#[test]
fn killing_form_matches_trace_form() {
    for s in common::SPACES {
        let sp = common::space(s);
        let alg = &sp.alg;
        let c = killing_constant(alg.family, &alg.params);
        for i in 0..alg.dim_g {
            for j in 0..alg.dim_g {
                let tr = (&alg.basis[i] * &alg.basis[j]).trace();
                assert!(
                    (alg.killing_gram[(i, j)] - c * tr).abs() < 1e-10 * c.max(1.0),
                    "{s}: B({i},{j})"
                );
            }
        }
    }
}

#[test]
fn dimensions() {
    // (dim g, dim t, dim p)
    for (s, dims) in [
        ("sl:2", (3, 1, 2)),
        ("sl:3", (8, 3, 5)),
        ("sl:4", (15, 6, 9)),
        ("so:3,1", (6, 3, 3)),
        ("so:4,1", (10, 6, 4)),
        ("so:3,2", (10, 4, 6)),
        ("su:2,1", (8, 4, 4)),
        ("sp:2", (10, 4, 6)),
    ] {
        let sp = common::space(s);
        assert_eq!((sp.alg.dim_g, sp.dec.dim_t, sp.dec.dim_p), dims, "{s}");
    }
}

#[test]
fn structural_residuals() {
    for s in common::SPACES {
        let alg = common::space(s).alg;
        assert!(alg.antisymmetry_residual() < 1e-12, "{s}");
        assert!(alg.jacobi_residual() < 1e-10, "{s}");
        assert!(alg.involution_automorphism_residual() < 1e-10, "{s}");
        assert!(alg.killing_invariance_residual() < 1e-10, "{s}");
    }
}

#[test]
fn rejects_compact_and_degenerate_parameters() {
    for (fam, params) in [
        (Family::Sl, vec![1]),
        (Family::So, vec![3, 0]),
        (Family::Su, vec![2, 0]),
        (Family::So, vec![1, 1]),
        (Family::Sp, vec![0]),
        (Family::So, vec![1, 2]),
    ] {
        assert!(build_algebra(fam, &params).is_err(), "{fam}:{params:?}");
    }
}

fn algebra_strategy() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>)> {
    (0usize..common::SPACES.len()).prop_flat_map(|i| {
        let dim = common::space(common::SPACES[i]).alg.dim_g;
        (
            Just(i),
            proptest::collection::vec(-2.0f64..2.0, dim),
            proptest::collection::vec(-2.0f64..2.0, dim),
        )
    })
}

fn alg_for(i: usize) -> LieAlgebraRealization {
    common::space(common::SPACES[i]).alg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_matrix_commutator((i, x, y) in algebra_strategy()) {
        let alg = alg_for(i);
        let x = AlgebraElement::from_slice(&x);
        let y = AlgebraElement::from_slice(&y);
        let b = alg.to_matrix(&alg.bracket(&x, &y).unwrap());
        let c = commutator(&alg.to_matrix(&x), &alg.to_matrix(&y));
        prop_assert!((b - c).amax() < 1e-10);
    }

    #[test]
    fn bracket_antisymmetric((i, x, y) in algebra_strategy()) {
        let alg = alg_for(i);
        let x = AlgebraElement::from_slice(&x);
        let y = AlgebraElement::from_slice(&y);
        let xy = alg.bracket(&x, &y).unwrap();
        let yx = alg.bracket(&y, &x).unwrap();
        prop_assert!((&xy + &yx).coeffs.amax() < 1e-12);
    }

    #[test]
    fn killing_form_symmetric((i, x, y) in algebra_strategy()) {
        let alg = alg_for(i);
        let x = AlgebraElement::from_slice(&x);
        let y = AlgebraElement::from_slice(&y);
        let a = alg.killing_form(&x, &y).unwrap();
        let b = alg.killing_form(&y, &x).unwrap();
        prop_assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn involution_squares_to_identity((i, x, _y) in algebra_strategy()) {
        let alg = alg_for(i);
        let x = AlgebraElement::from_slice(&x);
        let s2 = alg.cartan_involution(&alg.cartan_involution(&x).unwrap()).unwrap();
        prop_assert!((&s2 - &x).coeffs.amax() < 1e-12);
        // and it is -transpose on matrices
        let m = alg.to_matrix(&alg.cartan_involution(&x).unwrap());
        prop_assert!((m + alg.to_matrix(&x).transpose()).amax() < 1e-12);
    }

    #[test]
    fn metric_is_positive((i, x, _y) in algebra_strategy()) {
        let alg = alg_for(i);
        let x = AlgebraElement::from_slice(&x);
        let n2 = alg.inner_product(&x, &x).unwrap();
        // <X, X> = -B(sX, X) and sX = -X^T, so it is c * tr(X X^T) > 0
        let c = killing_constant(alg.family, &alg.params);
        let m = alg.to_matrix(&x);
        prop_assert!((n2 - c * (&m * m.transpose()).trace()).abs() < 1e-9 * n2.max(1.0));
    }
}
