//! Curvature spectra and the headline invariants.
//!
//! For a unit `xi` in `p` the curvature operator is `R_xi = ad_xi ad_xi`
//! restricted to `p`, and `l(xi) = sum_i sqrt(lambda_i(xi))`. On the positive
//! chamber `l(xi) = <xi, H>`, and the isoperimetric constant, the volume
//! entropy and `2 sqrt(lambda_0)` all equal `|H|`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_core::{AlgebraElement, CartanDecomposition, LieAlgebraRealization};
use crate::linalg::{expm, sym_eigen};
use crate::root_space::RootSystem;
use crate::space::SymmetricSpace;

/// Eigenvalues of magnitude up to this are treated as exact zeros.
pub const ZERO_EIGEN_TOL: f64 = 1e-10;
const NOT_IN_P_TOL: f64 = 1e-10;

pub fn sqrt_clamped(lambda: f64) -> f64 {
    if lambda <= ZERO_EIGEN_TOL {
        0.0
    } else {
        lambda.sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct CurvatureSpectrum {
    /// Unit direction in `p`.
    pub xi: AlgebraElement,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub zero_count: usize,
}

impl CurvatureSpectrum {
    pub fn mean_curvature(&self) -> f64 {
        self.eigenvalues.iter().map(|&l| sqrt_clamped(l)).sum()
    }

    /// The `n - 1` eigenvalues on the orthogonal complement of `xi` (one zero
    /// belongs to `xi` itself).
    pub fn transverse(&self) -> &[f64] {
        &self.eigenvalues[1..]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceInvariants {
    pub dim_m: usize,
    pub rank: usize,
    pub norm_h: f64,
    pub isoperimetric: f64,
    pub entropy: f64,
    pub lambda0: f64,
    /// 1.0 is the Killing normalization.
    pub metric_scale: f64,
}

fn check_in_p(
    alg: &LieAlgebraRealization,
    dec: &CartanDecomposition,
    xi: &AlgebraElement,
) -> Result<()> {
    let t = dec.t_coords(alg, xi).norm();
    if t > NOT_IN_P_TOL * alg.norm(xi).max(1.0) {
        return Err(Error::NotInP(t));
    }
    Ok(())
}

/// `R_xi = ad_xi ∘ ad_xi` on `p`, in the orthonormal `p_basis`.
pub fn curvature_operator(
    alg: &LieAlgebraRealization,
    dec: &CartanDecomposition,
    xi: &AlgebraElement,
) -> Result<DMatrix<f64>> {
    check_in_p(alg, dec, xi)?;
    let ad = alg.ad_matrix(xi)?;
    let full = dec.to_frame(alg, &(&ad * &ad));
    let t = dec.dim_t;
    let block = full.view((t, t), (dec.dim_p, dec.dim_p)).into_owned();
    Ok((&block + block.transpose()) * 0.5)
}

fn unit(alg: &LieAlgebraRealization, xi: &AlgebraElement) -> Result<AlgebraElement> {
    let n = alg.norm(xi);
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(xi * (1.0 / n))
}

pub fn curvature_spectrum(
    alg: &LieAlgebraRealization,
    dec: &CartanDecomposition,
    xi: &AlgebraElement,
) -> Result<CurvatureSpectrum> {
    let xi = unit(alg, xi)?;
    let r = curvature_operator(alg, dec, &xi)?;
    let eigenvalues: Vec<f64> = sym_eigen(&r).values.iter().cloned().collect();
    let top = eigenvalues.last().cloned().unwrap_or(0.0).max(1.0);
    let zero_count = eigenvalues
        .iter()
        .filter(|l| l.abs() <= ZERO_EIGEN_TOL * top)
        .count();
    Ok(CurvatureSpectrum {
        xi,
        eigenvalues,
        zero_count,
    })
}

/// `l(xi) = sum_i sqrt(lambda_i(xi))` for the unit vector along `xi`.
pub fn mean_curvature_l(
    alg: &LieAlgebraRealization,
    dec: &CartanDecomposition,
    xi: &AlgebraElement,
) -> Result<f64> {
    Ok(curvature_spectrum(alg, dec, xi)?.mean_curvature())
}

/// `tr sqrt(R_xi)` with `R_xi = ad_xi^2` on the whole algebra, for unit
/// `xi`. Half of it is the trace over `p`.
pub fn trace_sqrt_full(
    alg: &LieAlgebraRealization,
    dec: &CartanDecomposition,
    xi: &AlgebraElement,
) -> Result<f64> {
    let xi = unit(alg, xi)?;
    check_in_p(alg, dec, &xi)?;
    let ad = alg.ad_matrix(&xi)?;
    let full = dec.to_frame(alg, &(&ad * &ad));
    let eig = sym_eigen(&((&full + full.transpose()) * 0.5));
    Ok(eig.values.iter().map(|&l| sqrt_clamped(l)).sum())
}

/// The multiset `{0 × rank} ∪ {alpha(xi)^2 × m_alpha : alpha positive}`
/// for `xi` in `a` (orthonormal coordinates), sorted. Computed purely from
/// root data.
pub fn root_formula_spectrum(rs: &RootSystem, xi_a: &DVector<f64>) -> Vec<f64> {
    let mut out = vec![0.0; rs.a.rank];
    for &i in &rs.positive {
        let r = &rs.roots[i];
        let v = r.alpha.dot(xi_a);
        out.extend(std::iter::repeat_n(v * v, r.multiplicity));
    }
    out.sort_by(f64::total_cmp);
    out
}

/// `sum over all roots of |alpha(xi)| m_alpha`, from root data.
pub fn root_abs_sum(rs: &RootSystem, xi_a: &DVector<f64>) -> f64 {
    rs.roots
        .iter()
        .map(|r| r.alpha.dot(xi_a).abs() * r.multiplicity as f64)
        .sum()
}

/// `K(xi, eta) = -|[xi, eta]|^2 / (|xi|^2 |eta|^2 - <xi, eta>^2)`.
pub fn sectional_curvature(
    alg: &LieAlgebraRealization,
    xi: &AlgebraElement,
    eta: &AlgebraElement,
) -> Result<f64> {
    let xx = alg.inner_product(xi, xi)?;
    let yy = alg.inner_product(eta, eta)?;
    let xy = alg.inner_product(xi, eta)?;
    let area2 = xx * yy - xy * xy;
    if area2 < 1e-12 * (xx * yy).max(1e-300) || area2 < 1e-12 {
        return Err(Error::DegeneratePlane(area2));
    }
    let b = alg.bracket(xi, eta)?;
    Ok(-alg.inner_product(&b, &b)? / area2)
}

pub fn space_invariants(space: &SymmetricSpace) -> SpaceInvariants {
    let norm_h = space.norm_h();
    SpaceInvariants {
        dim_m: space.dim_m(),
        rank: space.rank(),
        norm_h,
        isoperimetric: norm_h,
        entropy: norm_h,
        lambda0: 0.25 * norm_h * norm_h,
        metric_scale: 1.0,
    }
}

/// Invariants of the metric `c g`: lengths scale by `sqrt c`, so `I`, `v`
/// and `|H|` scale by `1/sqrt c` and `lambda_0` by `1/c`.
pub fn rescale_invariants(inv: &SpaceInvariants, c: f64) -> Result<SpaceInvariants> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::NonpositiveScale(c));
    }
    let s = c.sqrt().recip();
    Ok(SpaceInvariants {
        norm_h: inv.norm_h * s,
        isoperimetric: inv.isoperimetric * s,
        entropy: inv.entropy * s,
        lambda0: inv.lambda0 / c,
        metric_scale: inv.metric_scale * c,
        ..*inv
    })
}

/// Largest sectional curvature of a rank-one space in the Killing metric.
/// The isotropy group is transitive on unit directions, so the planes
/// through one unit `xi ∈ a` already realize every value.
pub fn max_sectional_curvature_rank_one(space: &SymmetricSpace) -> Result<f64> {
    if space.rank() != 1 {
        return Err(Error::Precondition(format!(
            "{} has rank {}; sectional curvature pinching needs rank one",
            space.spec,
            space.rank()
        )));
    }
    let xi = space.p_coords(&space.roots.a.a_basis[0]);
    let spec = space.curvature.spectrum(&xi);
    let smallest_positive = spec[1..]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    Ok(-smallest_positive)
}

/// Rescale so that the largest sectional curvature becomes `kappa < 0`.
pub fn normalize_curvature(
    space: &SymmetricSpace,
    inv: &SpaceInvariants,
    kappa: f64,
) -> Result<SpaceInvariants> {
    if !(kappa < 0.0) {
        return Err(Error::DomainError(format!(
            "target curvature must be negative, got {kappa}"
        )));
    }
    let kmax = max_sectional_curvature_rank_one(space)?;
    rescale_invariants(inv, kmax / kappa)
}

/// Extremes `(min, max)` of sectional curvature over planes through
/// `samples` random unit directions. Through a fixed `xi` the plane
/// curvatures are `-lambda_i(xi)` on `xi^⊥`, so the extremes come from the
/// transverse spectrum.
pub fn sectional_curvature_range(space: &SymmetricSpace, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = space.dim_m();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..samples.max(1) {
        let v = random_unit(n, &mut rng);
        let spec = space.curvature.spectrum(&v);
        let tr = &spec[1..];
        lo = lo.min(-tr[tr.len() - 1]);
        hi = hi.max(-tr[0].max(0.0));
    }
    (lo, hi)
}

pub fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    loop {
        let v: DVector<f64> = DVector::from_fn(n, |_, _| StandardNormal.sample(rng));
        let nrm = v.norm();
        if nrm > 1e-12 {
            return v / nrm;
        }
    }
}

/// `exp(ad_t) xi`, the isotropy action of `exp(t)` for `t ∈ t`.
pub fn isotropy_rotate(
    alg: &LieAlgebraRealization,
    t: &AlgebraElement,
    xi: &AlgebraElement,
) -> Result<AlgebraElement> {
    let e = expm(&alg.ad_matrix(t)?);
    Ok(AlgebraElement::new(e * &xi.coeffs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupDomain {
    /// All unit vectors of `p`.
    P,
    /// Unit vectors of the maximal abelian subspace.
    A,
}

#[derive(Debug, Clone)]
pub struct SupResult {
    pub value: f64,
    pub argmax: AlgebraElement,
}

const SUP_ITERATIONS: usize = 50;
const SUP_FD_STEP: f64 = 1e-5;
const SUP_STARTS: usize = 4;

/// Maximize `l` over unit vectors by random sampling followed by projected
/// gradient ascent on the sphere from the best few samples.
pub fn numeric_sup_l(space: &SymmetricSpace, samples: usize, seed: u64, domain: SupDomain) -> SupResult {
    let dim = match domain {
        SupDomain::P => space.dim_m(),
        SupDomain::A => space.rank(),
    };
    let a_in_p: Option<DMatrix<f64>> = match domain {
        SupDomain::P => None,
        SupDomain::A => {
            let cols: Vec<DVector<f64>> = space
                .roots
                .a
                .a_basis
                .iter()
                .map(|h| space.p_coords(h))
                .collect();
            Some(DMatrix::from_columns(&cols))
        }
    };
    let to_p = |v: &DVector<f64>| match &a_in_p {
        Some(m) => m * v,
        None => v.clone(),
    };
    let l_of = |v: &DVector<f64>| {
        let u = v / v.norm();
        space
            .curvature
            .spectrum(&to_p(&u))
            .iter()
            .map(|&l| sqrt_clamped(l))
            .sum::<f64>()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<(f64, DVector<f64>)> = Vec::with_capacity(SUP_STARTS + 1);
    for _ in 0..samples.max(1) {
        let v = random_unit(dim, &mut rng);
        let val = l_of(&v);
        if best.len() < SUP_STARTS || val > best[best.len() - 1].0 {
            best.push((val, v));
            best.sort_by(|x, y| y.0.total_cmp(&x.0));
            best.truncate(SUP_STARTS);
        }
    }

    let mut winner = best[0].clone();
    for (mut val, mut v) in best {
        let mut step = 1.0;
        for _ in 0..SUP_ITERATIONS {
            let mut g = DVector::zeros(dim);
            for j in 0..dim {
                let mut plus = v.clone();
                let mut minus = v.clone();
                plus[j] += SUP_FD_STEP;
                minus[j] -= SUP_FD_STEP;
                // l is 1-homogeneous; evaluate unnormalized to keep the
                // directional derivative exact
                g[j] = (l_of(&plus) * plus.norm() - l_of(&minus) * minus.norm()) / (2.0 * SUP_FD_STEP);
            }
            let radial = g.dot(&v);
            let tangent = &g - &v * radial;
            if tangent.norm() < 1e-12 {
                break;
            }
            let mut improved = false;
            let mut s = step * 2.0;
            for _ in 0..40 {
                let cand = &v + &tangent * s;
                let cand = &cand / cand.norm();
                let cv = l_of(&cand);
                if cv > val {
                    v = cand;
                    val = cv;
                    step = s;
                    improved = true;
                    break;
                }
                s *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if val > winner.0 {
            winner = (val, v);
        }
    }
    let argmax = space.p_element(&to_p(&winner.1));
    SupResult {
        value: winner.0,
        argmax,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::Family;

    #[test]
    fn sl2_curvature_values() {
        let sp = SymmetricSpace::new(Family::Sl, &[2]).unwrap();
        let h = sp
            .alg
            .from_matrix(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]))
            .unwrap();
        let xi = &h * (1.0 / 8f64.sqrt());
        let spec = curvature_spectrum(&sp.alg, &sp.dec, &xi).unwrap();
        assert!(spec.eigenvalues[0].abs() < 1e-14);
        assert!((spec.eigenvalues[1] - 0.5).abs() < 1e-13);
        assert_eq!(spec.zero_count, 1);
        let l = mean_curvature_l(&sp.alg, &sp.dec, &xi).unwrap();
        assert!((l - 0.5f64.sqrt()).abs() < 1e-13);
        let zero = curvature_operator(&sp.alg, &sp.dec, &AlgebraElement::zeros(3)).unwrap();
        assert_eq!(zero.amax(), 0.0);
    }

    #[test]
    fn rejects_t_direction() {
        let sp = SymmetricSpace::new(Family::Sl, &[2]).unwrap();
        let t = sp.dec.t_basis[0].clone();
        assert!(matches!(
            curvature_operator(&sp.alg, &sp.dec, &t),
            Err(Error::NotInP(_))
        ));
        assert!(matches!(
            curvature_spectrum(&sp.alg, &sp.dec, &AlgebraElement::zeros(3)),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn sectional_curvature_cases() {
        let sl2 = SymmetricSpace::new(Family::Sl, &[2]).unwrap();
        let k = sectional_curvature(&sl2.alg, &sl2.dec.p_basis[0], &sl2.dec.p_basis[1]).unwrap();
        assert!((k + 0.5).abs() < 1e-13);
        let p0 = sl2.dec.p_basis[0].clone();
        assert!(matches!(
            sectional_curvature(&sl2.alg, &p0, &(&p0 * 2.0)),
            Err(Error::DegeneratePlane(_))
        ));

        let sl3 = SymmetricSpace::new(Family::Sl, &[3]).unwrap();
        let a = &sl3.roots.a.a_basis;
        let k = sectional_curvature(&sl3.alg, &a[0], &a[1]).unwrap();
        assert!(k.abs() < 1e-14);
    }

    #[test]
    fn rescaling() {
        let sp = SymmetricSpace::new(Family::Sl, &[2]).unwrap();
        let inv = space_invariants(&sp);
        assert_eq!(rescale_invariants(&inv, 1.0).unwrap(), inv);
        let half = rescale_invariants(&inv, 0.5).unwrap();
        assert!((half.isoperimetric - 1.0).abs() < 1e-13);
        assert!((half.lambda0 - 0.25).abs() < 1e-13);
        assert!(matches!(rescale_invariants(&inv, 0.0), Err(Error::NonpositiveScale(_))));
        assert!(matches!(rescale_invariants(&inv, -2.0), Err(Error::NonpositiveScale(_))));
    }

    #[test]
    fn normalize_curvature_rank_checks() {
        let sl3 = SymmetricSpace::new(Family::Sl, &[3]).unwrap();
        let inv = space_invariants(&sl3);
        assert!(matches!(
            normalize_curvature(&sl3, &inv, -1.0),
            Err(Error::Precondition(_))
        ));
        let h3 = SymmetricSpace::new(Family::So, &[3, 1]).unwrap();
        let inv = space_invariants(&h3);
        assert!(normalize_curvature(&h3, &inv, 1.0).is_err());
        let n = normalize_curvature(&h3, &inv, -1.0).unwrap();
        assert!((n.isoperimetric - 2.0).abs() < 1e-12);
    }
}
