//! Dense numerical kernels shared by every module.
//!
//! Everything here works on `nalgebra` dynamic matrices. The symmetric
//! eigensolver is a cyclic Jacobi iteration with a relative off-diagonal
//! test, which keeps small eigenvalues of graded positive definite
//! matrices accurate (the SPD model relies on that).

use nalgebra::{DMatrix, DVector};

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: DVector<f64>,
    /// Column `i` is the unit eigenvector for `values[i]`.
    pub vectors: DMatrix<f64>,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver.
///
/// A rotation is applied to `(p, q)` whenever
/// `|a_pq| > eps * sqrt(|a_pp * a_qq|)`, so the iteration stops only when
/// every off-diagonal entry is negligible relative to its diagonal pair.
pub fn sym_eigen(a: &DMatrix<f64>) -> SymEigen {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "sym_eigen needs a square matrix");
    let mut m = a.clone();
    // symmetrize; callers pass matrices that are symmetric up to rounding
    for i in 0..n {
        for j in (i + 1)..n {
            let s = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = s;
            m[(j, i)] = s;
        }
    }
    let mut v = DMatrix::<f64>::identity(n, n);
    let eps = f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                if apq.abs() <= eps * (app * aqq).abs().sqrt() || apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_infinite() {
                    0.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    let nkp = c * mkp - s * mkq;
                    let nkq = s * mkp + c * mkq;
                    m[(k, p)] = nkp;
                    m[(p, k)] = nkp;
                    m[(k, q)] = nkq;
                    m[(q, k)] = nkq;
                }
                m[(p, p)] = app - t * apq;
                m[(q, q)] = aqq + t * apq;
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| m[(i, i)]));
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    SymEigen { values, vectors }
}

/// Left singular vectors and singular values of `g` by one-sided (Hestenes)
/// Jacobi. Accurate in the relative sense for column-graded inputs
/// `g = B * D` with `B` well conditioned.
///
/// Returns `(u, s)` with `g * g^T = u * diag(s^2) * u^T`; singular values
/// are unsorted.
pub fn one_sided_jacobi(g: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let (rows, cols) = g.shape();
    let mut w = g.clone();
    let eps = f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dot(&w.column(j));
                if gamma == 0.0 || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let wi = w[(k, i)];
                    let wj = w[(k, j)];
                    w[(k, i)] = c * wi - s * wj;
                    w[(k, j)] = s * wi + c * wj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s = DVector::<f64>::zeros(cols);
    let mut u = DMatrix::<f64>::zeros(rows, cols);
    for j in 0..cols {
        let nrm = w.column(j).norm();
        s[j] = nrm;
        if nrm > 0.0 {
            u.set_column(j, &(w.column(j) / nrm));
        }
    }
    (u, s)
}

/// Apply a scalar function to a symmetric matrix through its eigenbasis.
pub fn sym_apply(a: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = sym_eigen(a);
    let fv = eig.values.map(f);
    let q = &eig.vectors;
    q * DMatrix::from_diagonal(&fv) * q.transpose()
}

pub fn spd_sqrt(a: &DMatrix<f64>) -> DMatrix<f64> {
    sym_apply(a, f64::sqrt)
}

pub fn spd_inv_sqrt(a: &DMatrix<f64>) -> DMatrix<f64> {
    sym_apply(a, |x| 1.0 / x.sqrt())
}

pub fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let ident = DMatrix::<f64>::identity(n, n);
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    if norm1 == 0.0 {
        return ident;
    }
    let s = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * 2f64.powi(-s);
    let b = &PADE13;
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9])
        + &a6 * b[7]
        + &a4 * b[5]
        + &a2 * b[3]
        + &ident * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &ident * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular after scaling");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Principal square root by the Denman–Beavers iteration.
pub fn sqrtm_denman_beavers(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = DMatrix::<f64>::identity(n, n);
    for _ in 0..100 {
        let yi = y.clone().try_inverse().expect("Denman–Beavers: singular iterate");
        let zi = z.clone().try_inverse().expect("Denman–Beavers: singular iterate");
        let y_next = (&y + zi) * 0.5;
        let z_next = (&z + yi) * 0.5;
        let delta = (&y_next - &y).norm() / y_next.norm();
        y = y_next;
        z = z_next;
        if delta < 1e-15 {
            break;
        }
    }
    y
}

/// Principal logarithm by inverse scaling and squaring: take Denman–Beavers
/// square roots until the argument is close to the identity, then sum the
/// Mercator series and undo the scaling.
pub fn logm_iss(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let ident = DMatrix::<f64>::identity(n, n);
    let mut x = a.clone();
    let mut k = 0;
    while (&x - &ident).norm() > 0.05 && k < 64 {
        x = sqrtm_denman_beavers(&x);
        k += 1;
    }
    let e = &x - &ident;
    let mut term = e.clone();
    let mut sum = e.clone();
    for j in 2..80 {
        term = &term * &e;
        let contrib = &term * ((if j % 2 == 0 { -1.0 } else { 1.0 }) / j as f64);
        sum += &contrib;
        if contrib.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum * 2f64.powi(k)
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Modified Gram–Schmidt with one re-orthogonalization pass under the inner
/// product `x^T g y`. Vectors whose residual norm falls below `drop_tol`
/// times the largest input norm are discarded.
pub fn gram_schmidt(
    vectors: &[DVector<f64>],
    gram: &DMatrix<f64>,
    drop_tol: f64,
) -> Vec<DVector<f64>> {
    let ip = |x: &DVector<f64>, y: &DVector<f64>| (gram * y).dot(x);
    let scale = vectors
        .iter()
        .map(|v| ip(v, v).max(0.0).sqrt())
        .fold(0.0, f64::max);
    let mut out: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = ip(q, &w);
                w -= q * c;
            }
        }
        let nrm = ip(&w, &w).max(0.0).sqrt();
        if nrm > drop_tol * scale {
            out.push(w / nrm);
        }
    }
    out
}

pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}
