//! Root data against literature tables and a brute-force eigensolve of
//! `ad_H` on the whole algebra.

mod common;

use nalgebra::{DVector, SymmetricEigen};
use symspace::root_space::choose_positive;
use symspace::SymmetricSpace;

/// Sorted multiplicities of the positive roots, from the classification.
fn literature_multiplicities(s: &str) -> (usize, Vec<usize>) {
    match s {
        "sl:2" => (1, vec![1]),
        "sl:3" => (2, vec![1; 3]),
        "sl:4" => (3, vec![1; 6]),
        "so:3,1" => (1, vec![2]),
        "so:4,1" => (1, vec![3]),
        "so:3,2" => (2, vec![1; 4]),
        "su:2,1" => (1, vec![1, 2]),
        "sp:2" => (2, vec![1; 4]),
        _ => unreachable!(),
    }
}

#[test]
fn multiplicities_match_classification() {
    for s in common::SPACES {
        let sp = common::space(s);
        let (rank, mut expected) = literature_multiplicities(s);
        assert_eq!(sp.rank(), rank, "{s}");
        let mut got: Vec<usize> = sp.roots.positive.iter().map(|&i| sp.roots.roots[i].multiplicity).collect();
        got.sort();
        expected.sort();
        assert_eq!(got, expected, "{s}");
        assert_eq!(sp.roots.roots.len(), 2 * expected.len(), "{s}");
        assert_eq!(sp.roots.dim_g0 + sp.roots.total_multiplicity(), sp.alg.dim_g, "{s}");
    }
}

#[test]
fn so_p1_has_one_root_pair_of_multiplicity_p_minus_1() {
    for p in 2..=5 {
        let sp = SymmetricSpace::parse(&format!("so:{p},1")).unwrap();
        assert_eq!(sp.roots.roots.len(), 2);
        assert!(sp.roots.roots.iter().all(|r| r.multiplicity == p - 1));
    }
}

#[test]
fn su21_has_alpha_and_two_alpha() {
    let sp = common::space("su:2,1");
    let labels = sp.roots.positive_labels();
    let mut named: Vec<(String, usize)> = labels
        .into_iter()
        .map(|(i, l)| (l, sp.roots.roots[i].multiplicity))
        .collect();
    named.sort();
    assert_eq!(named, vec![("2α".to_string(), 1), ("α".to_string(), 2)]);
}

#[test]
fn brute_force_ad_spectrum() {
    // ad_H on g in an orthonormal frame, eigensolved by nalgebra: its
    // eigenvalues are alpha(H) with multiplicity m_alpha and 0 with dim g0
    for s in common::SPACES {
        let sp = common::space(s);
        let c = DVector::from_fn(sp.rank(), |i, _| 0.37 + 0.611 * i as f64 + 0.1 * (i * i) as f64);
        let h = sp.a_element(&c);
        let ad = sp.alg.ad_matrix(&h).unwrap();
        let m = sp.dec.to_frame(&sp.alg, &ad);
        let sym = (&m + m.transpose()) * 0.5;
        let mut oracle: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().cloned().collect();
        oracle.sort_by(f64::total_cmp);
        let mut ours = vec![0.0; sp.roots.dim_g0];
        for r in &sp.roots.roots {
            ours.extend(std::iter::repeat_n(r.alpha.dot(&c), r.multiplicity));
        }
        ours.sort_by(f64::total_cmp);
        assert_eq!(ours.len(), oracle.len(), "{s}");
        for (a, b) in ours.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10, "{s}: {a} vs {b}");
        }
    }
}

#[test]
fn norm_h_oracles() {
    let cases = [
        ("sl:2", 0.5f64.sqrt()),
        ("sl:3", 2.0 / 3f64.sqrt()),
        ("sl:4", 2.5f64.sqrt()),
        ("so:3,1", 1.0),
        ("so:4,1", 1.5f64.sqrt()),
        ("su:2,1", 2.0 / 3f64.sqrt()),
    ];
    for (s, h) in cases {
        assert!((common::space(s).norm_h() - h).abs() < 1e-10, "{s}");
    }
    // so(n,1): (n-1) sqrt(1/(2(n-1)))
    for n in 2..=6 {
        let sp = SymmetricSpace::parse(&format!("hyperbolic:{n}")).unwrap();
        let expect = ((n as f64 - 1.0) / 2.0).sqrt();
        assert!((sp.norm_h() - expect).abs() < 1e-10, "n={n}");
    }
}

#[test]
fn sl3_h_is_diag_third_zero_minus_third() {
    let sp = common::space("sl:3");
    let m = sp.alg.to_matrix(sp.h());
    let mut d: Vec<f64> = (0..3).map(|i| m[(i, i)]).collect();
    d.sort_by(f64::total_cmp);
    assert!((d[0] + 1.0 / 3.0).abs() < 1e-12 && d[1].abs() < 1e-12 && (d[2] - 1.0 / 3.0).abs() < 1e-12);
    // H is diagonal here because a is
    assert!((m[(0, 1)].abs() + m[(1, 2)].abs() + m[(0, 2)].abs()) < 1e-12);
}

#[test]
fn norm_h_is_chamber_independent() {
    for s in common::SPACES {
        let sp = common::space(s);
        let base = sp.norm_h();
        for seed in 0..10 {
            let other = choose_positive(&sp.roots, None, 1000 + seed).unwrap();
            assert!((other.norm_h().unwrap() - base).abs() < 1e-10 * base, "{s}");
        }
        let w = sp.roots.chamber_witness.clone().unwrap();
        let neg = choose_positive(&sp.roots, Some(&-&w), 0).unwrap();
        let hn = neg.h_coords().unwrap();
        assert!((&hn + sp.h_coords()).amax() < 1e-12, "{s}: H -> -H");
    }
}

#[test]
fn structural_root_checks() {
    for s in common::SPACES {
        let sp = common::space(s);
        let (worst, mult_ok) = sp.roots.negation_check();
        assert!(worst < 1e-8 && mult_ok, "{s}");
        assert!(sp.roots.eigen_residual(&sp.alg).unwrap() < 1e-8, "{s}");
        assert!(sp.roots.involution_pairing_residual(&sp.alg).unwrap() < 1e-8, "{s}");
        assert!(sp.roots.bracket_closure_residual(&sp.alg, 40, 3).unwrap() < 1e-8, "{s}");
    }
}
