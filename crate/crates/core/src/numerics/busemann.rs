//! Finite-difference Laplacian of `b_k(x) = d(x, p_k) - k` in the SPD
//! model, compared with the curvature formula at finite `k` and with the
//! limit `l(xi) = <xi, H>`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::curvature_spectrum;
use crate::lie_core::{AlgebraElement, Family};
use crate::numerics::kernels::sqrt_coth;
use crate::numerics::spd::{
    algebra_tangent, spd_distance, spd_geodesic, spd_log, tangent_to_algebra, DistanceField, SpdPoint,
};
use crate::space::SymmetricSpace;

/// Relative disagreement between the `h` and `h/2` second differences,
/// after extrapolation, above which the step is rejected.
pub const RICHARDSON_TOL: f64 = 1e-3;
const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct BusemannProbe {
    /// Coordinates of `xi` on the orthonormal basis of `a`.
    pub xi: Vec<f64>,
    #[serde(skip)]
    pub x: SpdPoint,
    pub k: u32,
    pub b_k_value: f64,
    pub fd_laplacian: f64,
    pub dbk_rhs: f64,
    pub l_xi: f64,
}

impl BusemannProbe {
    pub fn limit_error(&self) -> f64 {
        (self.fd_laplacian - self.l_xi).abs()
    }

    pub fn formula_rel_error(&self) -> f64 {
        (self.fd_laplacian - self.dbk_rhs).abs() / self.dbk_rhs.abs()
    }
}

/// Default finite-difference step `1e-3 (1 + d(o, x))`, clamped to the
/// accepted range.
pub fn default_step(x: &SpdPoint) -> f64 {
    let d = spd_distance(&SpdPoint::identity(x.dim()), x).unwrap_or(0.0);
    (1e-3 * (1.0 + d)).clamp(1e-4, 1e-2)
}

fn check_xi(space: &SymmetricSpace, xi: &AlgebraElement) -> Result<()> {
    let norm = space.alg.norm(xi);
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::Precondition(format!("xi must be a unit vector, |xi| = {norm}")));
    }
    let c = space.roots.a.coords(&space.alg, xi);
    let off = (&space.a_element(&c) - xi).coeffs.norm();
    if off > UNIT_TOL {
        return Err(Error::Precondition(format!("xi is not in a (off by {off:.3e})")));
    }
    for &i in &space.roots.positive {
        let v = space.roots.roots[i].alpha.dot(&c);
        if v < -UNIT_TOL {
            return Err(Error::ChamberViolation(v));
        }
    }
    Ok(())
}

/// Probe `b_k` at `x` for the ray from `o` with unit velocity `xi` in the
/// closed positive chamber. Only the `sl:n` family has an SPD model.
pub fn busemann_probe(space: &SymmetricSpace, xi: &AlgebraElement, x: &SpdPoint, k: u32, h: f64) -> Result<BusemannProbe> {
    if space.alg.family != Family::Sl {
        return Err(Error::Precondition(format!(
            "Busemann probes need the SPD model (sl:n), got {}",
            space.spec
        )));
    }
    let n = space.alg.d_rep;
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.dim(),
        });
    }
    if !(1e-4..=1e-2).contains(&h) {
        return Err(Error::Precondition(format!("step h = {h} outside [1e-4, 1e-2]")));
    }
    check_xi(space, xi)?;
    let o = SpdPoint::identity(n);
    let d_ox = spd_distance(&o, x)?;
    if d_ox > k as f64 / 4.0 {
        return Err(Error::Precondition(format!(
            "d(o, x) = {d_ox} exceeds k/4 = {}",
            k as f64 / 4.0
        )));
    }

    let xi_m = space.alg.to_matrix(xi);
    let p_k = spd_geodesic(&o, &algebra_tangent(&xi_m), k as f64)?;
    // second differences only see d(., p_k) - d(o, p_k), which stays O(1)
    let field = DistanceField::new(&p_k);
    let f = |y: &SpdPoint| field.excess(y);
    let f0 = f(x)?;
    let b_k_value = (field.reference() - k as f64) + f0;

    // orthonormal frame at x: x^{1/2} (2 F_i) x^{1/2} with F_i Killing-orthonormal in p
    let frame: Vec<DMatrix<f64>> = space
        .dec
        .p_basis
        .iter()
        .map(|p| algebra_tangent(&space.alg.to_matrix(p)))
        .collect();
    let s = x.sqrt();
    let second_difference = |step: f64| -> Result<f64> {
        let mut acc = 0.0;
        for w in &frame {
            let e = &s * w * &s;
            let plus = f(&spd_geodesic(x, &e, step)?)?;
            let minus = f(&spd_geodesic(x, &e, -step)?)?;
            acc += (plus - 2.0 * f0 + minus) / (step * step);
        }
        Ok(acc)
    };
    let coarse = second_difference(h)?;
    let fine = second_difference(h / 2.0)?;
    let fd_laplacian = (4.0 * fine - coarse) / 3.0;
    let disagreement = (fd_laplacian - fine).abs() / fd_laplacian.abs().max(f64::MIN_POSITIVE);
    if disagreement > RICHARDSON_TOL {
        return Err(Error::StepTooLarge(disagreement));
    }

    // unit direction at x pointing away from p_k, carried back to o
    let away = -tangent_to_algebra(x, &spd_log(x, &p_k)?);
    let v = space.alg.from_matrix(&away)?;
    let spec = curvature_spectrum(&space.alg, &space.dec, &v)?;
    let r = b_k_value + k as f64;
    let dbk_rhs = spec
        .transverse()
        .iter()
        .map(|&l| sqrt_coth(l.max(0.0), r))
        .sum::<Result<f64>>()?;

    let l_xi = space.alg.inner_product(xi, space.h())?;
    Ok(BusemannProbe {
        xi: space.roots.a.coords(&space.alg, xi).iter().cloned().collect(),
        x: x.clone(),
        k,
        b_k_value,
        fd_laplacian,
        dbk_rhs,
        l_xi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(n: usize) -> SymmetricSpace {
        SymmetricSpace::new(Family::Sl, &[n]).unwrap()
    }

    fn unit_h(space: &SymmetricSpace) -> AlgebraElement {
        let h = space.h().clone();
        let n = space.alg.norm(&h);
        &h * (1.0 / n)
    }

    #[test]
    fn base_point_has_zero_b_k() {
        let sp = sl(2);
        let xi = unit_h(&sp);
        let p = busemann_probe(&sp, &xi, &SpdPoint::identity(2), 20, 1e-3).unwrap();
        assert!(p.b_k_value.abs() < 1e-12);
    }

    #[test]
    fn sl2_matches_hyperbolic_plane() {
        // curvature -1/2: Laplacian of distance r is coth(r/sqrt2)/sqrt2
        let sp = sl(2);
        let xi = unit_h(&sp);
        let off = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]) * (1.0 / 8f64.sqrt());
        let x = spd_geodesic(&SpdPoint::identity(2), &algebra_tangent(&off), 1.0).unwrap();
        let p = busemann_probe(&sp, &xi, &x, 30, default_step(&x)).unwrap();
        let r = p.b_k_value + 30.0;
        let exact = (r / 2f64.sqrt()).cosh() / (r / 2f64.sqrt()).sinh() / 2f64.sqrt();
        assert!((p.fd_laplacian - exact).abs() < 1e-6, "{} vs {}", p.fd_laplacian, exact);
        assert!((p.dbk_rhs - exact).abs() < 1e-12);
        assert!((p.l_xi - 0.5f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn preconditions() {
        let sp = sl(2);
        let xi = unit_h(&sp);
        let o = SpdPoint::identity(2);
        assert!(busemann_probe(&sp, &xi, &o, 10, 1e-1).is_err());
        assert!(busemann_probe(&sp, &(&xi * 2.0), &o, 10, 1e-3).is_err());
        assert!(matches!(
            busemann_probe(&sp, &(-&xi), &o, 10, 1e-3),
            Err(Error::ChamberViolation(_))
        ));
        let far = spd_geodesic(&o, &algebra_tangent(&sp.alg.to_matrix(&xi)), 5.0).unwrap();
        assert!(busemann_probe(&sp, &xi, &far, 10, 1e-3).is_err());
        let h3 = SymmetricSpace::new(Family::So, &[3, 1]).unwrap();
        let xi3 = unit_h(&h3);
        assert!(busemann_probe(&h3, &xi3, &SpdPoint::identity(4), 10, 1e-3).is_err());
    }
}
