//! Jacobi fields along a geodesic of a symmetric space.
//!
//! The curvature tensor is parallel, so in a parallel frame the Jacobi
//! equation along `gamma_xi` is the constant-coefficient system
//! `x'' = R_xi x`. Integrating it with RK4 and comparing against
//! `sinh(sqrt(lambda) t) / sqrt(lambda)` checks the closed form.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::invariants::curvature_operator;
use crate::lie_core::{AlgebraElement, CartanDecomposition, LieAlgebraRealization};
use crate::linalg::sym_eigen;
use crate::numerics::kernels::sinh_ratio;

/// One RK4 trajectory of `x'' = r x`, `x(0) = 0`, `x'(0) = v0`. Returns
/// `|x(t_k)|` on the uniform grid `t_k = k t_max / steps`, `k = 1..=steps`.
pub fn integrate_jacobi_field(
    r: &DMatrix<f64>,
    v0: &DVector<f64>,
    t_max: f64,
    steps: usize,
) -> Vec<f64> {
    let h = t_max / steps as f64;
    let mut x = DVector::zeros(v0.len());
    let mut v = v0.clone();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let k1x = v.clone();
        let k1v = r * &x;
        let x2 = &x + &k1x * (h / 2.0);
        let v2 = &v + &k1v * (h / 2.0);
        let k2x = v2.clone();
        let k2v = r * &x2;
        let x3 = &x + &k2x * (h / 2.0);
        let v3 = &v + &k2v * (h / 2.0);
        let k3x = v3.clone();
        let k3v = r * &x3;
        let x4 = &x + &k3x * h;
        let v4 = &v + &k3v * h;
        let k4x = v4;
        let k4v = r * &x4;
        x += (&k1x + &k2x * 2.0 + &k3x * 2.0 + &k4x) * (h / 6.0);
        v += (&k1v + &k2v * 2.0 + &k3v * 2.0 + &k4v) * (h / 6.0);
        out.push(x.norm());
    }
    out
}

/// Max relative error of RK4 Jacobi fields against the closed form, over
/// every curvature eigendirection of the unit vector along `xi` and every
/// grid point in `(0, t_max]`.
pub fn jacobi_verify(
    alg: &LieAlgebraRealization,
    dec: &CartanDecomposition,
    xi: &AlgebraElement,
    t_max: f64,
    steps: usize,
) -> Result<f64> {
    if !(t_max > 0.0) {
        return Err(Error::Precondition(format!("t_max must be positive, got {t_max}")));
    }
    if steps < 100 {
        return Err(Error::Precondition(format!("need at least 100 steps, got {steps}")));
    }
    let n = alg.norm(xi);
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    let r = curvature_operator(alg, dec, &(xi * (1.0 / n)))?;
    let eig = sym_eigen(&r);
    let h = t_max / steps as f64;
    let mut worst: f64 = 0.0;
    for (i, &lambda) in eig.values.iter().enumerate() {
        let e = eig.vectors.column(i).into_owned();
        let lambda = lambda.max(0.0);
        let norms = integrate_jacobi_field(&r, &e, t_max, steps);
        for (k, got) in norms.iter().enumerate() {
            let t = (k + 1) as f64 * h;
            let want = sinh_ratio(lambda, t)?;
            worst = worst.max((got - want).abs() / want);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_field_is_linear() {
        let r = DMatrix::zeros(3, 3);
        let v0 = DVector::from_vec(vec![0.0, 1.0, 0.0]);
        let norms = integrate_jacobi_field(&r, &v0, 2.0, 200);
        for (k, n) in norms.iter().enumerate() {
            let t = (k + 1) as f64 * 0.01;
            assert!((n - t).abs() < 1e-13);
        }
    }

    #[test]
    fn scalar_field_matches_sinh() {
        let r = DMatrix::from_element(1, 1, 0.5);
        let v0 = DVector::from_element(1, 1.0);
        let norms = integrate_jacobi_field(&r, &v0, 5.0, 5000);
        let last = norms[norms.len() - 1];
        let want = sinh_ratio(0.5, 5.0).unwrap();
        assert!((last - want).abs() / want < 1e-10);
    }
}
