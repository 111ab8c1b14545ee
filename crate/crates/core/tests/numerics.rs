mod common;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symspace::invariants::random_unit;
use symspace::numerics::busemann::{busemann_probe, default_step};
use symspace::numerics::spd::*;
use symspace::numerics::volume::{entropy_estimate, volume_ball};
use symspace::numerics::{jacobi_verify, sinh_ratio, sqrt_coth};
use symspace::AlgebraElement;

fn unit_h(sp: &symspace::SymmetricSpace) -> AlgebraElement {
    let h = sp.h().clone();
    &h * (1.0 / sp.alg.norm(&h))
}

#[test]
fn kernel_examples() {
    assert_eq!(sinh_ratio(0.0, 3.0).unwrap(), 3.0);
    assert_eq!(sqrt_coth(0.0, 4.0).unwrap(), 0.25);
    assert!((sinh_ratio(0.5, 5.0).unwrap() - 2f64.sqrt() * (5.0 / 2f64.sqrt()).sinh()).abs() < 1e-12);
}

#[test]
fn jacobi_examples() {
    let sl2 = common::space("sl:2");
    let e = jacobi_verify(&sl2.alg, &sl2.dec, &unit_h(&sl2), 5.0, 5000).unwrap();
    assert!(e < 1e-6, "{e}");
    let sl3 = common::space("sl:3");
    let e = jacobi_verify(&sl3.alg, &sl3.dec, &unit_h(&sl3), 5.0, 5000).unwrap();
    assert!(e < 1e-6, "{e}");
    assert!(jacobi_verify(&sl3.alg, &sl3.dec, &unit_h(&sl3), 5.0, 50).is_err());
}

#[test]
fn volume_matches_hyperbolic_plane() {
    let sp = common::space("sl:2");
    // V(r) = 4 pi (cosh(r / sqrt 2) - 1) for curvature -1/2
    let exact = |r: f64| (4.0 * std::f64::consts::PI * ((r / 2f64.sqrt()).cosh() - 1.0)).ln();
    let v5 = volume_ball(&sp, 5.0, 2000, 1, 1).unwrap();
    assert!((v5.log_v.exp() / exact(5.0).exp() - 1.0).abs() < 0.02);
    let small = volume_ball(&sp, 0.01, 2000, 1, 1).unwrap();
    let flat = (std::f64::consts::PI * 0.01f64 * 0.01).ln();
    assert!((small.log_v.exp() / flat.exp() - 1.0).abs() < 0.01);
    let v6 = volume_ball(&sp, 6.0, 2000, 1, 1).unwrap();
    assert!(v5.log_v < v6.log_v);
}

#[test]
fn volume_of_rank_two_ball_is_deterministic_and_flagged_sanely() {
    let sp = common::space("sl:3");
    let a = volume_ball(&sp, 4.0, 4000, 7, 1).unwrap();
    let b = volume_ball(&sp, 4.0, 4000, 7, 4).unwrap();
    assert_eq!(a, b);
    assert!(!a.insufficient);
    let c = volume_ball(&sp, 4.0, 4000, 8, 1).unwrap();
    assert_ne!(a.log_v, c.log_v);
}

#[test]
fn entropy_curve_properties() {
    let sp = common::space("so:3,1");
    let curve = entropy_estimate(&sp, 10.0, 20.0, 2000, 42, 2).unwrap();
    assert!(curve.log_v.windows(2).all(|w| w[1] > w[0]));
    assert!((curve.entropy_estimate - 1.0).abs() < 0.05);
    assert!(curve.slopes().iter().all(|&s| s >= 0.95));
    assert_eq!(curve.r_grid.first(), Some(&10.0));
    assert_eq!(curve.r_grid.last(), Some(&20.0));
}

#[test]
fn spd_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sl3 = common::space("sl:3");
    let o = SpdPoint::identity(3);
    for _ in 0..3 {
        let xi = sl3.alg.to_matrix(&sl3.p_element(&random_unit(5, &mut rng)));
        let u = algebra_tangent(&xi);
        for t in [1.0, 2.0, 5.0] {
            let p = spd_geodesic(&o, &u, t).unwrap();
            assert!((spd_distance(&o, &p).unwrap() - t).abs() < 1e-10);
            // log(geodesic(o, u, t)) = t u
            let l = spd_log(&o, &p).unwrap();
            assert!((&l - &u * t).amax() < 1e-9);
            let back = spd_geodesic(&p, &spd_log(&p, &o).unwrap(), 1.0).unwrap();
            assert!((back.matrix() - o.matrix()).amax() < 1e-10);
        }
    }
    let s = 0.9f64;
    let b = SpdPoint::new(DMatrix::from_diagonal(&DVector::from_vec(vec![s.exp(), (-s).exp()]))).unwrap();
    assert!((spd_distance(&SpdPoint::identity(2), &b).unwrap() - 2f64.sqrt() * s).abs() < 1e-14);
    assert!(SpdPoint::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).is_err());
}

#[test]
fn busemann_examples() {
    let sp = common::space("sl:2");
    let xi = unit_h(&sp);
    let o = SpdPoint::identity(2);
    let at_o = busemann_probe(&sp, &xi, &o, 100, 1e-3).unwrap();
    assert!(at_o.b_k_value.abs() < 1e-12);
    let off = sp.alg.to_matrix(&sp.dec.p_basis[1]);
    let x = spd_geodesic(&o, &algebra_tangent(&off), 1.0).unwrap();
    assert!((spd_distance(&o, &x).unwrap() - 1.0).abs() < 1e-12);
    let p = busemann_probe(&sp, &xi, &x, 100, default_step(&x)).unwrap();
    assert!((p.fd_laplacian - 0.5f64.sqrt()).abs() < 0.02 * 0.5f64.sqrt());
    assert!(p.formula_rel_error() < 1e-3);
    assert!(p.b_k_value.abs() <= 1.0 + 1e-12);

    // b_k is nonincreasing in k and bounded by d(o, x)
    let sl3 = common::space("sl:3");
    let xi3 = unit_h(&sl3);
    let x3 = spd_geodesic(
        &SpdPoint::identity(3),
        &algebra_tangent(&sl3.alg.to_matrix(&sl3.dec.p_basis[0])),
        1.0,
    )
    .unwrap();
    let mut prev = f64::INFINITY;
    for k in [10, 20, 50, 100] {
        let p = busemann_probe(&sl3, &xi3, &x3, k, 1e-3).unwrap();
        assert!(p.b_k_value <= prev + 1e-12 && p.b_k_value.abs() <= 1.0 + 1e-12);
        prev = p.b_k_value;
    }
}
