//! Matrix realizations of the classical noncompact real forms.
//!
//! A realization carries a basis of real matrices, the structure constants
//! obtained by projecting commutators back onto that basis, the Cartan
//! involution `X -> -X^T` in coefficient form, the Killing form computed
//! from traces of adjoint operators, and the metric `<X, Y> = -B(sX, Y)`.
//! `su(p,q)` is realified, so every family goes through one real code path.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::gram_schmidt;

/// Residual above which a commutator is considered to have left the basis
/// span during construction.
const BUILD_CLOSURE_TOL: f64 = 1e-10;
/// Residual above which `bracket` reports a broken basis.
const BRACKET_CLOSURE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Sl,
    So,
    Su,
    Sp,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Sl => "sl",
            Family::So => "so",
            Family::Su => "su",
            Family::Sp => "sp",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sl" => Ok(Family::Sl),
            "so" => Ok(Family::So),
            "su" => Ok(Family::Su),
            "sp" => Ok(Family::Sp),
            other => Err(Error::UnsupportedFamily(other.to_string())),
        }
    }
}

/// An element of the algebra in coordinates of the realization basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub coeffs: DVector<f64>,
}

impl AlgebraElement {
    pub fn new(coeffs: DVector<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            coeffs: DVector::zeros(dim),
        }
    }

    pub fn from_slice(c: &[f64]) -> Self {
        Self {
            coeffs: DVector::from_column_slice(c),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(&self.coeffs + &rhs.coeffs)
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(&self.coeffs - &rhs.coeffs)
    }
}

impl Mul<f64> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: f64) -> AlgebraElement {
        AlgebraElement::new(&self.coeffs * rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement::new(-&self.coeffs)
    }
}

#[derive(Debug, Clone)]
pub struct LieAlgebraRealization {
    pub family: Family,
    pub params: Vec<usize>,
    pub d_rep: usize,
    pub dim_g: usize,
    pub basis: Vec<DMatrix<f64>>,
    /// `ad_basis[i]` is the coordinate matrix of `ad_{b_i}`: column `j`
    /// holds the coefficients of `[b_i, b_j]`, i.e. entry `(k, j)` is
    /// `c_{ij}^k`.
    ad_basis: Vec<DMatrix<f64>>,
    pub involution_matrix: DMatrix<f64>,
    pub killing_gram: DMatrix<f64>,
    pub metric_gram: DMatrix<f64>,
    frobenius_inv: DMatrix<f64>,
}

/// Entry point matching the operation name used throughout the docs.
pub fn build_algebra(family: Family, params: &[usize]) -> Result<LieAlgebraRealization> {
    LieAlgebraRealization::new(family, params)
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// Real 2d x 2d form of the complex matrix `re + i im`.
fn realify(re: &DMatrix<f64>, im: &DMatrix<f64>) -> DMatrix<f64> {
    let d = re.nrows();
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    m.view_mut((0, 0), (d, d)).copy_from(re);
    m.view_mut((d, d), (d, d)).copy_from(re);
    m.view_mut((0, d), (d, d)).copy_from(&(-im));
    m.view_mut((d, 0), (d, d)).copy_from(im);
    m
}

fn validate(family: Family, params: &[usize]) -> Result<()> {
    let want = match family {
        Family::Sl | Family::Sp => 1,
        Family::So | Family::Su => 2,
    };
    if params.len() != want {
        return Err(Error::DegenerateParams(format!(
            "{family} takes {want} parameter(s), got {}",
            params.len()
        )));
    }
    match family {
        Family::Sl if params[0] < 2 => Err(Error::DegenerateParams(format!(
            "sl:{} is trivial",
            params[0]
        ))),
        Family::Sp if params[0] < 1 => Err(Error::DegenerateParams("sp:0 is trivial".into())),
        Family::So | Family::Su => {
            let (p, q) = (params[0], params[1]);
            if q == 0 {
                Err(Error::DegenerateParams(format!(
                    "{family}:{p},0 gives a compact space"
                )))
            } else if p < q {
                Err(Error::DegenerateParams(format!(
                    "{family}:{p},{q} must be written with p >= q"
                )))
            } else if family == Family::So && p + q < 3 {
                Err(Error::DegenerateParams(format!(
                    "so:{p},{q} is abelian (flat space)"
                )))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

fn family_basis(family: Family, params: &[usize]) -> (usize, Vec<DMatrix<f64>>) {
    match family {
        Family::Sl => {
            let n = params[0];
            let mut b = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        b.push(unit(n, i, j));
                    }
                }
            }
            for i in 0..n - 1 {
                b.push(unit(n, i, i) - unit(n, i + 1, i + 1));
            }
            (n, b)
        }
        Family::So => {
            let (p, q) = (params[0], params[1]);
            let n = p + q;
            let mut b = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let same_block = (i < p) == (j < p);
                    if same_block {
                        b.push(unit(n, i, j) - unit(n, j, i));
                    } else {
                        b.push(unit(n, i, j) + unit(n, j, i));
                    }
                }
            }
            (n, b)
        }
        Family::Su => {
            let (p, q) = (params[0], params[1]);
            let n = p + q;
            let zero = DMatrix::<f64>::zeros(n, n);
            let mut b = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let same_block = (i < p) == (j < p);
                    if same_block {
                        b.push(realify(&(unit(n, i, j) - unit(n, j, i)), &zero));
                        b.push(realify(&zero, &(unit(n, i, j) + unit(n, j, i))));
                    } else {
                        b.push(realify(&(unit(n, i, j) + unit(n, j, i)), &zero));
                        b.push(realify(&zero, &(unit(n, i, j) - unit(n, j, i))));
                    }
                }
            }
            for k in 0..n - 1 {
                b.push(realify(&zero, &(unit(n, k, k) - unit(n, k + 1, k + 1))));
            }
            (2 * n, b)
        }
        Family::Sp => {
            let n = params[0];
            let d = 2 * n;
            let mut b = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    b.push(unit(d, i, j) - unit(d, n + j, n + i));
                }
            }
            for i in 0..n {
                for j in i..n {
                    let mut upper = unit(d, i, n + j);
                    let mut lower = unit(d, n + i, j);
                    if i != j {
                        upper += unit(d, j, n + i);
                        lower += unit(d, n + j, i);
                    }
                    b.push(upper);
                    b.push(lower);
                }
            }
            (d, b)
        }
    }
}

fn frob(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

impl LieAlgebraRealization {
    pub fn new(family: Family, params: &[usize]) -> Result<Self> {
        validate(family, params)?;
        let (d_rep, basis) = family_basis(family, params);
        let dim_g = basis.len();

        let frob_gram = DMatrix::from_fn(dim_g, dim_g, |i, j| frob(&basis[i], &basis[j]));
        let frobenius_inv = frob_gram
            .cholesky()
            .expect("basis matrices are linearly independent")
            .inverse();

        let mut alg = Self {
            family,
            params: params.to_vec(),
            d_rep,
            dim_g,
            basis,
            ad_basis: Vec::new(),
            involution_matrix: DMatrix::zeros(dim_g, dim_g),
            killing_gram: DMatrix::zeros(dim_g, dim_g),
            metric_gram: DMatrix::zeros(dim_g, dim_g),
            frobenius_inv,
        };

        let mut ad_basis = vec![DMatrix::zeros(dim_g, dim_g); dim_g];
        for i in 0..dim_g {
            for j in 0..dim_g {
                let comm = &alg.basis[i] * &alg.basis[j] - &alg.basis[j] * &alg.basis[i];
                let (c, residual) = alg.project(&comm);
                if residual > BUILD_CLOSURE_TOL {
                    return Err(Error::ClosureViolation { residual });
                }
                ad_basis[i].set_column(j, &c);
            }
        }
        alg.ad_basis = ad_basis;

        let mut sigma = DMatrix::zeros(dim_g, dim_g);
        for j in 0..dim_g {
            let (c, residual) = alg.project(&(-alg.basis[j].transpose()));
            if residual > BUILD_CLOSURE_TOL {
                return Err(Error::ClosureViolation { residual });
            }
            sigma.set_column(j, &c);
        }
        alg.involution_matrix = sigma;

        let killing = DMatrix::from_fn(dim_g, dim_g, |i, j| {
            frob(&alg.ad_basis[i], &alg.ad_basis[j].transpose())
        });
        alg.metric_gram = -(alg.involution_matrix.transpose() * &killing);
        alg.metric_gram = (&alg.metric_gram + alg.metric_gram.transpose()) * 0.5;
        alg.killing_gram = killing;
        Ok(alg)
    }

    /// Short name such as `sl:3` or `su:2,1`.
    pub fn label(&self) -> String {
        let p: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        format!("{}:{}", self.family, p.join(","))
    }

    /// Least-squares coefficients of `m` in the basis and the Frobenius norm
    /// of what is left over.
    pub fn project(&self, m: &DMatrix<f64>) -> (DVector<f64>, f64) {
        let rhs = DVector::from_iterator(self.dim_g, self.basis.iter().map(|b| frob(b, m)));
        let c = &self.frobenius_inv * rhs;
        let recon = self.matrix_of(&c);
        let residual = (m - recon).norm();
        (c, residual)
    }

    fn matrix_of(&self, c: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.d_rep, self.d_rep);
        for (ci, b) in c.iter().zip(&self.basis) {
            if *ci != 0.0 {
                m += b * *ci;
            }
        }
        m
    }

    pub fn to_matrix(&self, x: &AlgebraElement) -> DMatrix<f64> {
        self.matrix_of(&x.coeffs)
    }

    /// Element with the given matrix, or `ClosureViolation` if the matrix is
    /// not in the algebra.
    pub fn from_matrix(&self, m: &DMatrix<f64>) -> Result<AlgebraElement> {
        let (c, residual) = self.project(m);
        if residual > BRACKET_CLOSURE_TOL * m.norm().max(1.0) {
            return Err(Error::ClosureViolation { residual });
        }
        Ok(AlgebraElement::new(c))
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        let mut c = DVector::zeros(self.dim_g);
        c[i] = 1.0;
        AlgebraElement::new(c)
    }

    fn check_dim(&self, x: &AlgebraElement) -> Result<()> {
        if x.dim() != self.dim_g {
            return Err(Error::DimensionMismatch {
                expected: self.dim_g,
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// `c_{ij}^k`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.ad_basis[i][(k, j)]
    }

    pub fn ad_matrix(&self, x: &AlgebraElement) -> Result<DMatrix<f64>> {
        self.check_dim(x)?;
        let mut m = DMatrix::zeros(self.dim_g, self.dim_g);
        for (ci, adi) in x.coeffs.iter().zip(&self.ad_basis) {
            if *ci != 0.0 {
                m += adi * *ci;
            }
        }
        Ok(m)
    }

    /// Matrix commutator re-expanded in the basis.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mx = self.to_matrix(x);
        let my = self.to_matrix(y);
        let comm = &mx * &my - &my * &mx;
        let (c, residual) = self.project(&comm);
        let scale = (mx.norm() * my.norm()).max(1.0);
        if residual > BRACKET_CLOSURE_TOL * scale {
            return Err(Error::ClosureViolation { residual });
        }
        Ok(AlgebraElement::new(c))
    }

    /// `B(X, Y) = tr(ad_X ad_Y)`, from the structure constants.
    pub fn killing_form(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok((&self.killing_gram * &y.coeffs).dot(&x.coeffs))
    }

    pub fn cartan_involution(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_dim(x)?;
        Ok(AlgebraElement::new(&self.involution_matrix * &x.coeffs))
    }

    /// `<X, Y> = -B(sX, Y)`.
    pub fn inner_product(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok((&self.metric_gram * &y.coeffs).dot(&x.coeffs))
    }

    pub fn norm(&self, x: &AlgebraElement) -> f64 {
        (&self.metric_gram * &x.coeffs).dot(&x.coeffs).max(0.0).sqrt()
    }

    pub fn cartan_decompose(&self) -> Result<CartanDecomposition> {
        let n = self.dim_g;
        let ident = DMatrix::<f64>::identity(n, n);
        let s = &self.involution_matrix;
        if (s * s - &ident).norm() > 1e-10 {
            return Err(Error::InvolutionNotDiagonalizable);
        }
        let plus = (&ident + s) * 0.5;
        let minus = (&ident - s) * 0.5;
        let cols = |m: &DMatrix<f64>| -> Vec<DVector<f64>> {
            (0..n).map(|j| m.column(j).into_owned()).collect()
        };
        let t = gram_schmidt(&cols(&plus), &self.metric_gram, 1e-8);
        let p = gram_schmidt(&cols(&minus), &self.metric_gram, 1e-8);
        if t.len() + p.len() != n {
            return Err(Error::InvolutionNotDiagonalizable);
        }
        let t_basis: Vec<AlgebraElement> = t.into_iter().map(AlgebraElement::new).collect();
        let p_basis: Vec<AlgebraElement> = p.into_iter().map(AlgebraElement::new).collect();
        Ok(CartanDecomposition {
            dim_t: t_basis.len(),
            dim_p: p_basis.len(),
            t_basis,
            p_basis,
        })
    }

    /// Largest `|c_ij^k + c_ji^k|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim_g;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = &self.ad_basis[i].column(j) + &self.ad_basis[j].column(i);
                worst = worst.max(d.amax());
            }
        }
        worst
    }

    /// Jacobi identity on all basis triples, written as
    /// `[ad_i, ad_j] = ad_{[b_i, b_j]}`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim_g;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = &self.ad_basis[i] * &self.ad_basis[j] - &self.ad_basis[j] * &self.ad_basis[i];
                let c = AlgebraElement::new(self.ad_basis[i].column(j).into_owned());
                let rhs = self.ad_matrix(&c).expect("dimension is internal");
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }

    /// `s[b_i, b_j] - [s b_i, s b_j]` over all basis pairs.
    pub fn involution_automorphism_residual(&self) -> f64 {
        let n = self.dim_g;
        let s = &self.involution_matrix;
        let sigma_ad: Vec<DMatrix<f64>> = (0..n)
            .map(|i| {
                self.ad_matrix(&AlgebraElement::new(s.column(i).into_owned()))
                    .expect("dimension is internal")
            })
            .collect();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let lhs = s * self.ad_basis[i].column(j);
                let rhs = &sigma_ad[i] * s.column(j);
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }

    /// `|B(sX, sY) - B(X, Y)|` and asymmetry of B, combined.
    pub fn killing_invariance_residual(&self) -> f64 {
        let s = &self.involution_matrix;
        let b = &self.killing_gram;
        let inv = (s.transpose() * b * s - b).amax();
        let sym = (b - b.transpose()).amax();
        inv.max(sym)
    }
}

#[derive(Debug, Clone)]
pub struct CartanDecomposition {
    /// Orthonormal basis of the fixed algebra `t` (s = +1).
    pub t_basis: Vec<AlgebraElement>,
    /// Orthonormal basis of `p` (s = -1), identified with the tangent space.
    pub p_basis: Vec<AlgebraElement>,
    pub dim_t: usize,
    pub dim_p: usize,
}

impl CartanDecomposition {
    /// Columns are the coefficient vectors of `t_basis` followed by `p_basis`;
    /// an orthonormal frame of the whole algebra.
    pub fn frame(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self
            .t_basis
            .iter()
            .chain(&self.p_basis)
            .map(|e| e.coeffs.clone())
            .collect();
        DMatrix::from_columns(&cols)
    }

    pub fn p_frame(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self.p_basis.iter().map(|e| e.coeffs.clone()).collect();
        DMatrix::from_columns(&cols)
    }

    pub fn t_frame(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self.t_basis.iter().map(|e| e.coeffs.clone()).collect();
        DMatrix::from_columns(&cols)
    }

    /// Coordinates of `x` in the orthonormal `p_basis` (the `t` part is
    /// dropped).
    pub fn p_coords(&self, alg: &LieAlgebraRealization, x: &AlgebraElement) -> DVector<f64> {
        self.p_frame().transpose() * (&alg.metric_gram * &x.coeffs)
    }

    pub fn t_coords(&self, alg: &LieAlgebraRealization, x: &AlgebraElement) -> DVector<f64> {
        self.t_frame().transpose() * (&alg.metric_gram * &x.coeffs)
    }

    pub fn from_p_coords(&self, v: &DVector<f64>) -> AlgebraElement {
        AlgebraElement::new(self.p_frame() * v)
    }

    /// Matrix of a linear operator (given in basis coefficients) written in
    /// the orthonormal frame `t ⊕ p`.
    pub fn to_frame(&self, alg: &LieAlgebraRealization, op: &DMatrix<f64>) -> DMatrix<f64> {
        let q = self.frame();
        q.transpose() * &alg.metric_gram * op * q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> LieAlgebraRealization {
        build_algebra(Family::Sl, &[2]).unwrap()
    }

    /// h = diag(1, -1), e = E_12, f = E_21 in the sl(2) basis.
    fn sl2_hef(alg: &LieAlgebraRealization) -> (AlgebraElement, AlgebraElement, AlgebraElement) {
        let h = alg
            .from_matrix(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]))
            .unwrap();
        let e = alg
            .from_matrix(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]))
            .unwrap();
        let f = alg
            .from_matrix(&DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]))
            .unwrap();
        (h, e, f)
    }

    #[test]
    fn dimensions() {
        let cases: &[(Family, &[usize], usize, usize)] = &[
            (Family::Sl, &[2], 3, 2),
            (Family::Sl, &[3], 8, 3),
            (Family::So, &[4, 1], 10, 5),
            (Family::Su, &[2, 1], 8, 6),
            (Family::Sp, &[2], 10, 4),
        ];
        for &(fam, params, dim, d_rep) in cases {
            let alg = build_algebra(fam, params).unwrap();
            assert_eq!(alg.dim_g, dim, "{}", alg.label());
            assert_eq!(alg.d_rep, d_rep, "{}", alg.label());
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(matches!(
            build_algebra(Family::So, &[3, 0]),
            Err(Error::DegenerateParams(_))
        ));
        assert!(matches!(
            build_algebra(Family::So, &[1, 1]),
            Err(Error::DegenerateParams(_))
        ));
        assert!(matches!(
            build_algebra(Family::Sl, &[1]),
            Err(Error::DegenerateParams(_))
        ));
        assert!(matches!(
            build_algebra(Family::Su, &[1, 2]),
            Err(Error::DegenerateParams(_))
        ));
        assert!(matches!("g2".parse::<Family>(), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn sl2_bracket_and_killing() {
        let alg = sl2();
        let (h, e, f) = sl2_hef(&alg);
        let he = alg.bracket(&h, &e).unwrap();
        assert!((&he - &(&e * 2.0)).coeffs.amax() < 1e-14);
        let ef = alg.bracket(&e, &f).unwrap();
        assert!((&ef - &h).coeffs.amax() < 1e-14);
        assert!(alg.bracket(&h, &h).unwrap().coeffs.amax() < 1e-15);
        assert!((alg.killing_form(&h, &h).unwrap() - 8.0).abs() < 1e-13);
        assert!((alg.inner_product(&h, &h).unwrap() - 8.0).abs() < 1e-13);
        let eig = alg.ad_matrix(&h).unwrap().eigenvalues().map(|v| {
            let mut v: Vec<f64> = v.iter().cloned().collect();
            v.sort_by(f64::total_cmp);
            v
        });
        if let Some(v) = eig {
            assert!((v[0] + 2.0).abs() < 1e-13 && v[1].abs() < 1e-13 && (v[2] - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn involution_on_sl3() {
        let alg = build_algebra(Family::Sl, &[3]).unwrap();
        let skew = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, -2.0, -1.0, 0.0, 0.5, 2.0, -0.5, 0.0]);
        let sym = DMatrix::from_row_slice(3, 3, &[1.0, 0.3, 0.2, 0.3, -2.0, 0.7, 0.2, 0.7, 1.0]);
        let xs = alg.from_matrix(&skew).unwrap();
        let xp = alg.from_matrix(&sym).unwrap();
        assert!((&alg.cartan_involution(&xs).unwrap() - &xs).coeffs.amax() < 1e-14);
        assert!((&alg.cartan_involution(&xp).unwrap() + &xp).coeffs.amax() < 1e-14);
        assert!(alg.inner_product(&xs, &xp).unwrap().abs() < 1e-13);
    }

    #[test]
    fn decomposition_dimensions() {
        for (fam, params, dt, dp) in [
            (Family::Sl, vec![3], 3, 5),
            (Family::So, vec![4, 1], 6, 4),
            (Family::Su, vec![2, 1], 4, 4),
            (Family::Sp, vec![2], 4, 6),
        ] {
            let alg = build_algebra(fam, &params).unwrap();
            let dec = alg.cartan_decompose().unwrap();
            assert_eq!((dec.dim_t, dec.dim_p), (dt, dp), "{}", alg.label());
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let alg = sl2();
        let bad = AlgebraElement::zeros(5);
        assert!(matches!(
            alg.killing_form(&bad, &bad),
            Err(Error::DimensionMismatch { expected: 3, got: 5 })
        ));
    }
}
