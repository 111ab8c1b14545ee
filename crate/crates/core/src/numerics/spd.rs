//! The SPD model of `SL(n,R)/SO(n)`: unit-determinant symmetric positive
//! definite matrices with base point `o = I`.
//!
//! `G` acts by `g . P = g P g^T`, so the point `exp(X) . o` is `exp(2X)`.
//! The Riemannian metric is `(n/2) tr(P^{-1} U P^{-1} V)`, which makes this
//! action an isometry from the Killing metric. A Killing-unit `X ∈ p`
//! corresponds to the tangent matrix `2X` at `o` (see [`algebra_tangent`]).
//!
//! Distances to far-away points involve matrices whose eigenvalues span
//! dozens of orders of magnitude, so the congruence `A^{-1/2} B A^{-1/2}` is
//! never formed explicitly; its logarithm comes from the one-sided Jacobi SVD
//! of the column-graded factor `A^{-1/2} Q Λ^{1/2}` instead.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{expm, one_sided_jacobi, spd_inv_sqrt, spd_sqrt, sym_eigen, symmetrize};

const SYM_TOL: f64 = 1e-12;
const DET_TOL: f64 = 1e-10;
const TANGENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SpdPoint {
    matrix: DMatrix<f64>,
}

impl SpdPoint {
    /// Validate symmetry, positivity and `det = 1`.
    ///
    /// The determinant is checked through `ln det = sum ln(mu_i)`, relative
    /// to the spread of `ln(mu_i)`, so that far-away points whose entries
    /// reach `1e30` are not rejected for roundoff.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() < 2 {
            return Err(Error::NotSpd(format!("shape {:?}", matrix.shape())));
        }
        let scale = matrix.amax().max(f64::MIN_POSITIVE);
        let asym = (&matrix - matrix.transpose()).amax() / scale;
        if asym > SYM_TOL {
            return Err(Error::NotSpd(format!("asymmetry {asym:.3e}")));
        }
        let sym = symmetrize(&matrix);
        if sym.clone().cholesky().is_none() {
            return Err(Error::NotSpd("not positive definite".into()));
        }
        let eig = sym_eigen(&sym);
        if eig.values[0] <= 0.0 {
            return Err(Error::NotSpd("not positive definite".into()));
        }
        let logs: Vec<f64> = eig.values.iter().map(|m| m.ln()).collect();
        let logdet: f64 = logs.iter().sum();
        let spread = logs.iter().fold(1.0f64, |m, l| m.max(l.abs()));
        if logdet.abs() > DET_TOL * spread {
            return Err(Error::NotSpd(format!("det - 1 = {:.3e}", logdet.exp_m1())));
        }
        Ok(Self { matrix: sym })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn sqrt(&self) -> DMatrix<f64> {
        spd_sqrt(&self.matrix)
    }

    pub fn inv_sqrt(&self) -> DMatrix<f64> {
        spd_inv_sqrt(&self.matrix)
    }

    /// Spread of the spectrum, `ln(mu_max / mu_min)`.
    fn log_condition(&self) -> f64 {
        let v = sym_eigen(&self.matrix).values;
        (v[v.len() - 1] / v[0]).ln()
    }
}

/// Tangent matrix at `o` of the geodesic `t -> exp(tX) . o` for a symmetric
/// traceless `X ∈ p`.
pub fn algebra_tangent(x: &DMatrix<f64>) -> DMatrix<f64> {
    x * 2.0
}

/// Inverse of [`algebra_tangent`] after transporting the tangent `u` at `x`
/// back to `o` by `x^{-1/2}`.
pub fn tangent_to_algebra(x: &SpdPoint, u: &DMatrix<f64>) -> DMatrix<f64> {
    let r = x.inv_sqrt();
    symmetrize(&(&r * u * &r)) * 0.5
}

/// Length of the tangent `u` at `x`.
pub fn spd_tangent_norm(x: &SpdPoint, u: &DMatrix<f64>) -> f64 {
    let n = x.dim() as f64;
    let r = x.inv_sqrt();
    (n / 2.0).sqrt() * (&r * u * &r).norm()
}

/// `x^{1/2} exp(t x^{-1/2} u x^{-1/2}) x^{1/2}`.
pub fn spd_geodesic(x: &SpdPoint, u: &DMatrix<f64>, t: f64) -> Result<SpdPoint> {
    if u.shape() != x.matrix.shape() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: u.nrows(),
        });
    }
    let scale = u.amax().max(1.0);
    let asym = (u - u.transpose()).amax();
    if asym > TANGENT_TOL * scale {
        return Err(Error::NotSymmetric(asym));
    }
    let s = x.sqrt();
    let r = x.inv_sqrt();
    let w = symmetrize(&(&r * u * &r));
    let tr = w.trace();
    if tr.abs() > TANGENT_TOL * w.amax().max(1.0) {
        return Err(Error::NotTraceless(tr));
    }
    let e = expm(&(w * t));
    Ok(SpdPoint {
        matrix: symmetrize(&(&s * e * &s)),
    })
}

/// `(U, ln s_i)` with `A^{-1/2} B A^{-1/2} = U diag(s_i^2) U^T`.
fn graded_log_factor(a: &SpdPoint, b: &SpdPoint) -> (DMatrix<f64>, Vec<f64>) {
    let eb = sym_eigen(&b.matrix);
    let d = eb.values.map(|m| m.sqrt());
    let g = a.inv_sqrt() * &eb.vectors * DMatrix::from_diagonal(&d);
    let (u, s) = one_sided_jacobi(&g);
    (u, s.iter().map(|x| x.ln()).collect())
}

/// `sqrt(n/2) * ||log(A^{-1/2} B A^{-1/2})||_F`.
pub fn spd_distance(a: &SpdPoint, b: &SpdPoint) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    // the better-conditioned point supplies the inverse square root
    let (a, b) = if a.log_condition() <= b.log_condition() { (a, b) } else { (b, a) };
    let (_, ls) = graded_log_factor(a, b);
    let n = a.dim() as f64;
    Ok((n / 2.0).sqrt() * 2.0 * ls.iter().map(|l| l * l).sum::<f64>().sqrt())
}

/// Initial velocity at `a` of the geodesic reaching `b` at `t = 1`; its
/// length is `spd_distance(a, b)`.
pub fn spd_log(a: &SpdPoint, b: &SpdPoint) -> Result<DMatrix<f64>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let (u, ls) = graded_log_factor(a, b);
    let l2: Vec<f64> = ls.iter().map(|l| 2.0 * l).collect();
    let log_c = &u * DMatrix::from_diagonal(&DVector::from_vec(l2)) * u.transpose();
    let s = a.sqrt();
    Ok(symmetrize(&(&s * log_c * &s)))
}

/// Distance to a fixed, possibly very distant, point `p`, reported as the
/// excess `d(y, p) - d(o, p)` with absolute (not relative) accuracy.
///
/// With `p = Q diag(d_i^2) Q^T` and `ln s_i` the logs of the singular
/// values of `y^{-1/2} Q diag(d_i)`, the excess is
/// `2n sum_i ln(s_i/d_i) (ln s_i + ln d_i) / (d(y,p) + d(o,p))`,
/// which never subtracts two numbers of size `d(o, p)`.
#[derive(Debug, Clone)]
pub struct DistanceField {
    q: DMatrix<f64>,
    d: DVector<f64>,
    ln_d: Vec<f64>,
    reference: f64,
}

impl DistanceField {
    pub fn new(target: &SpdPoint) -> Self {
        let eig = sym_eigen(&target.matrix);
        let d = eig.values.map(|m| m.sqrt());
        let ln_d: Vec<f64> = eig.values.iter().map(|m| 0.5 * m.ln()).collect();
        let n = target.dim() as f64;
        let reference = (2.0 * n).sqrt() * ln_d.iter().map(|l| l * l).sum::<f64>().sqrt();
        Self {
            q: eig.vectors,
            d,
            ln_d,
            reference,
        }
    }

    /// `d(o, p)`.
    pub fn reference(&self) -> f64 {
        self.reference
    }

    /// `d(y, p) - d(o, p)`.
    pub fn excess(&self, y: &SpdPoint) -> Result<f64> {
        if y.dim() != self.q.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.q.nrows(),
                got: y.dim(),
            });
        }
        let g = y.inv_sqrt() * &self.q * DMatrix::from_diagonal(&self.d);
        let (_, s) = one_sided_jacobi(&g);
        let n = y.dim() as f64;
        let mut diff_sq = 0.0;
        let mut norm_sq = 0.0;
        for j in 0..s.len() {
            let ln_s = s[j].ln();
            diff_sq += (s[j] / self.d[j]).ln() * (ln_s + self.ln_d[j]);
            norm_sq += ln_s * ln_s;
        }
        let dist = (2.0 * n * norm_sq).sqrt();
        let denom = dist + self.reference;
        if denom == 0.0 {
            return Ok(0.0);
        }
        Ok(2.0 * n * diff_sq / denom)
    }

    pub fn distance(&self, y: &SpdPoint) -> Result<f64> {
        Ok(self.reference + self.excess(y)?)
    }
}
