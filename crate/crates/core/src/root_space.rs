//! Restricted roots of a maximal abelian subspace `a ⊂ p`.
//!
//! Root covectors are stored in the orthonormal `a_basis`, so `e_alpha` has
//! the same coordinates as `alpha`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::lie_core::{AlgebraElement, CartanDecomposition, Family, LieAlgebraRealization};
use crate::linalg::{gram_schmidt, sym_eigen};

/// Relative tolerance used to cluster joint eigenvalues into roots.
pub const CLUSTER_TOL: f64 = 1e-7;
const WITNESS_TOL: f64 = 1e-8;
const MAX_WITNESS_DRAWS: usize = 100;

#[derive(Debug, Clone)]
pub struct MaximalAbelian {
    pub a_basis: Vec<AlgebraElement>,
    pub rank: usize,
}

impl MaximalAbelian {
    /// Coordinates `<H_i, x>` of `x` against the orthonormal basis.
    pub fn coords(&self, alg: &LieAlgebraRealization, x: &AlgebraElement) -> DVector<f64> {
        DVector::from_iterator(
            self.rank,
            self.a_basis
                .iter()
                .map(|h| alg.inner_product(h, x).expect("same realization")),
        )
    }

    pub fn element(&self, coords: &DVector<f64>) -> AlgebraElement {
        let dim = self.a_basis[0].dim();
        let mut c = DVector::zeros(dim);
        for (ci, h) in coords.iter().zip(&self.a_basis) {
            c += &h.coeffs * *ci;
        }
        AlgebraElement::new(c)
    }
}

#[derive(Debug, Clone)]
pub struct RestrictedRoot {
    /// Values `alpha(H_i)` on the orthonormal `a_basis`.
    pub alpha: DVector<f64>,
    pub e_alpha: AlgebraElement,
    pub multiplicity: usize,
    /// Orthonormal (for `<.,.>`) basis of the root space.
    pub root_space_basis: Vec<AlgebraElement>,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub a: MaximalAbelian,
    pub roots: Vec<RestrictedRoot>,
    /// Indices into `roots`; empty until a chamber is chosen.
    pub positive: Vec<usize>,
    pub chamber_witness: Option<DVector<f64>>,
    pub h: Option<AlgebraElement>,
    pub dim_g0: usize,
    pub g0_basis: Vec<AlgebraElement>,
}

fn canonical_abelian_matrices(alg: &LieAlgebraRealization) -> Vec<DMatrix<f64>> {
    let d = alg.d_rep;
    let unit = |n: usize, i: usize, j: usize| {
        let mut m = DMatrix::<f64>::zeros(n, n);
        m[(i, j)] = 1.0;
        m
    };
    match alg.family {
        Family::Sl => (0..d - 1)
            .map(|i| unit(d, i, i) - unit(d, i + 1, i + 1))
            .collect(),
        Family::So => {
            let (p, q) = (alg.params[0], alg.params[1]);
            (0..q)
                .map(|i| unit(d, i, p + i) + unit(d, p + i, i))
                .collect()
        }
        Family::Su => {
            // real boosts, realified block-diagonally
            let (p, q) = (alg.params[0], alg.params[1]);
            let n = p + q;
            (0..q)
                .map(|i| {
                    let b = unit(n, i, p + i) + unit(n, p + i, i);
                    let mut m = DMatrix::zeros(d, d);
                    m.view_mut((0, 0), (n, n)).copy_from(&b);
                    m.view_mut((n, n), (n, n)).copy_from(&b);
                    m
                })
                .collect()
        }
        Family::Sp => {
            let n = alg.params[0];
            (0..n).map(|i| unit(d, i, i) - unit(d, n + i, n + i)).collect()
        }
    }
}

/// Dimension of `{v in p : [v, H_i] = 0 for all i}`.
fn centralizer_dim_in_p(
    alg: &LieAlgebraRealization,
    dec: &CartanDecomposition,
    a_basis: &[AlgebraElement],
) -> Result<usize> {
    let n = dec.dim_p;
    let mut acc = DMatrix::<f64>::zeros(n, n);
    let frame = dec.frame();
    let pf = dec.p_frame();
    for h in a_basis {
        let ad = alg.ad_matrix(h)?;
        // ad_h applied to p, expressed in the orthonormal frame of g
        let m = frame.transpose() * &alg.metric_gram * ad * &pf;
        acc += m.transpose() * m;
    }
    let eig = sym_eigen(&acc);
    let top = eig.values.iter().cloned().fold(0.0, f64::max).max(1.0);
    Ok(eig.values.iter().filter(|&&v| v.abs() <= 1e-10 * top).count())
}

pub fn maximal_abelian(
    alg: &LieAlgebraRealization,
    dec: &CartanDecomposition,
) -> Result<MaximalAbelian> {
    let raw: Vec<DVector<f64>> = canonical_abelian_matrices(alg)
        .iter()
        .map(|m| alg.from_matrix(m).map(|e| e.coeffs))
        .collect::<Result<_>>()?;
    let onb = gram_schmidt(&raw, &alg.metric_gram, 1e-10);
    let a_basis: Vec<AlgebraElement> = onb.into_iter().map(AlgebraElement::new).collect();
    let rank = a_basis.len();
    for h in &a_basis {
        let t = dec.t_coords(alg, h).norm();
        if t > 1e-10 {
            return Err(Error::NotInP(t));
        }
    }
    let found = centralizer_dim_in_p(alg, dec, &a_basis)?;
    if found != rank {
        return Err(Error::MaximalityFailure { rank, found });
    }
    Ok(MaximalAbelian { a_basis, rank })
}

/// Generic fixed weights for the separating operator; fractional parts of
/// square roots of primes.
fn generic_weights(r: usize) -> Vec<f64> {
    const PRIMES: [f64; 12] = [2., 3., 5., 7., 11., 13., 17., 19., 23., 29., 31., 37.];
    (0..r)
        .map(|i| {
            let p = PRIMES[i % PRIMES.len()] + (i / PRIMES.len()) as f64 * 41.0;
            0.5 + p.sqrt().fract()
        })
        .collect()
}

/// Groups of indices of sorted values whose neighbours lie within `tol`.
fn cluster_sorted(values: &[f64], tol: f64) -> Result<Vec<Vec<usize>>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if (v - values[*g.last().unwrap()]).abs() <= tol => g.push(i),
            _ => {
                if let Some(g) = groups.last() {
                    let gap = (v - values[*g.last().unwrap()]).abs();
                    if gap <= 10.0 * tol {
                        return Err(Error::ClusteringAmbiguity(gap));
                    }
                }
                groups.push(vec![i]);
            }
        }
    }
    Ok(groups)
}

/// Split the orthonormal column block `u` into joint eigenspaces of the
/// symmetric operators `ops`, starting at operator `start`.
fn refine(
    u: DMatrix<f64>,
    ops: &[DMatrix<f64>],
    tols: &[f64],
    start: usize,
    out: &mut Vec<DMatrix<f64>>,
) -> Result<()> {
    if start == ops.len() {
        out.push(u);
        return Ok(());
    }
    let m = u.transpose() * &ops[start] * &u;
    let eig = sym_eigen(&m);
    let vals: Vec<f64> = eig.values.iter().cloned().collect();
    let groups = cluster_sorted(&vals, tols[start])?;
    if groups.len() == 1 {
        return refine(u, ops, tols, start + 1, out);
    }
    for g in groups {
        let cols: Vec<DVector<f64>> = g.iter().map(|&j| &u * eig.vectors.column(j)).collect();
        refine(DMatrix::from_columns(&cols), ops, tols, start + 1, out)?;
    }
    Ok(())
}

pub fn restricted_roots(
    alg: &LieAlgebraRealization,
    dec: &CartanDecomposition,
    a: &MaximalAbelian,
) -> Result<RootSystem> {
    let n = alg.dim_g;
    let frame = dec.frame();
    let ops: Vec<DMatrix<f64>> = a
        .a_basis
        .iter()
        .map(|h| {
            let m = dec.to_frame(alg, &alg.ad_matrix(h)?);
            Ok((&m + m.transpose()) * 0.5)
        })
        .collect::<Result<_>>()?;
    let scale_of = |m: &DMatrix<f64>| m.amax().max(f64::MIN_POSITIVE);

    let w = generic_weights(a.rank);
    let mut sep = DMatrix::<f64>::zeros(n, n);
    for (wi, op) in w.iter().zip(&ops) {
        sep += op * *wi;
    }
    let eig = sym_eigen(&sep);
    let vals: Vec<f64> = eig.values.iter().cloned().collect();
    let sep_tol = CLUSTER_TOL * scale_of(&sep);
    let groups = cluster_sorted(&vals, sep_tol)?;
    let tols: Vec<f64> = ops.iter().map(|m| CLUSTER_TOL * scale_of(m)).collect();

    let mut blocks = Vec::new();
    for g in groups {
        let cols: Vec<DVector<f64>> = g.iter().map(|&j| eig.vectors.column(j).into_owned()).collect();
        refine(DMatrix::from_columns(&cols), &ops, &tols, 0, &mut blocks)?;
    }

    let zero_tol = tols.iter().cloned().fold(0.0, f64::max);
    let mut roots = Vec::new();
    let mut g0_basis = Vec::new();
    for u in blocks {
        let mult = u.ncols();
        let alpha = DVector::from_iterator(
            a.rank,
            ops.iter().map(|op| (u.transpose() * op * &u).trace() / mult as f64),
        );
        let basis: Vec<AlgebraElement> = (0..mult)
            .map(|j| AlgebraElement::new(&frame * u.column(j)))
            .collect();
        if alpha.amax() <= zero_tol {
            g0_basis.extend(basis);
        } else {
            roots.push(RestrictedRoot {
                e_alpha: a.element(&alpha),
                alpha,
                multiplicity: mult,
                root_space_basis: basis,
            });
        }
    }
    roots.sort_by(|x, y| {
        x.alpha
            .iter()
            .zip(y.alpha.iter())
            .map(|(p, q)| p.total_cmp(q))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(RootSystem {
        a: a.clone(),
        roots,
        positive: Vec::new(),
        chamber_witness: None,
        h: None,
        dim_g0: g0_basis.len(),
        g0_basis,
    })
}

/// `e_alpha` from its values on `a`, through the Gram system of `<.,.>`
/// restricted to `a`.
pub fn root_vector(
    alg: &LieAlgebraRealization,
    a: &MaximalAbelian,
    alpha: &DVector<f64>,
) -> AlgebraElement {
    let r = a.rank;
    let gram = DMatrix::from_fn(r, r, |i, j| {
        alg.inner_product(&a.a_basis[i], &a.a_basis[j])
            .expect("same realization")
    });
    let c = gram
        .lu()
        .solve(alpha)
        .expect("a_basis is linearly independent");
    a.element(&c)
}

fn is_generic(rs: &RootSystem, w: &DVector<f64>) -> bool {
    let wn = w.norm();
    wn > 0.0
        && rs
            .roots
            .iter()
            .all(|r| r.alpha.dot(w).abs() > WITNESS_TOL * r.alpha.norm() * wn)
}

/// Fix the positive chamber containing `witness` (coordinates in the
/// orthonormal `a_basis`), or one drawn at random from `seed`.
pub fn choose_positive(
    rs: &RootSystem,
    witness: Option<&DVector<f64>>,
    seed: u64,
) -> Result<RootSystem> {
    let w = match witness {
        Some(w) => {
            if w.len() != rs.a.rank {
                return Err(Error::DimensionMismatch {
                    expected: rs.a.rank,
                    got: w.len(),
                });
            }
            if !is_generic(rs, w) {
                return Err(Error::DegenerateWitness);
            }
            w.clone()
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found = None;
            for _ in 0..MAX_WITNESS_DRAWS {
                let w = DVector::from_fn(rs.a.rank, |_, _| StandardNormal.sample(&mut rng));
                if is_generic(rs, &w) {
                    found = Some(w);
                    break;
                }
            }
            found.ok_or(Error::DegenerateWitness)?
        }
    };
    let mut out = rs.clone();
    out.positive = rs
        .roots
        .iter()
        .enumerate()
        .filter(|(_, r)| r.alpha.dot(&w) > 0.0)
        .map(|(i, _)| i)
        .collect();
    out.chamber_witness = Some(w);
    out.h = Some(compute_h(&out)?);
    Ok(out)
}

/// `H = sum over positive roots of m_alpha e_alpha`.
pub fn compute_h(rs: &RootSystem) -> Result<AlgebraElement> {
    if rs.positive.is_empty() {
        return Err(Error::ChamberViolation(0.0));
    }
    let mut coords = DVector::zeros(rs.a.rank);
    for &i in &rs.positive {
        let r = &rs.roots[i];
        coords += &r.alpha * r.multiplicity as f64;
    }
    let min = rs
        .positive
        .iter()
        .map(|&i| rs.roots[i].alpha.dot(&coords))
        .fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        return Err(Error::ChamberViolation(min));
    }
    Ok(rs.a.element(&coords))
}

impl RootSystem {
    /// `H` in `a_basis` coordinates.
    pub fn h_coords(&self) -> Option<DVector<f64>> {
        if self.positive.is_empty() {
            return None;
        }
        let mut coords = DVector::zeros(self.a.rank);
        for &i in &self.positive {
            let r = &self.roots[i];
            coords += &r.alpha * r.multiplicity as f64;
        }
        Some(coords)
    }

    pub fn norm_h(&self) -> Option<f64> {
        self.h_coords().map(|c| c.norm())
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    fn find_root(&self, alpha: &DVector<f64>) -> Option<usize> {
        let tol = 1e-6 * alpha.norm().max(1e-300);
        self.roots
            .iter()
            .position(|r| (&r.alpha - alpha).amax() <= tol)
    }

    /// Worst covector mismatch of `-alpha` against the closest root, and
    /// whether every pair has equal multiplicities.
    pub fn negation_check(&self) -> (f64, bool) {
        let mut worst: f64 = 0.0;
        let mut mult_ok = true;
        for r in &self.roots {
            let neg = -&r.alpha;
            let best = self
                .roots
                .iter()
                .map(|s| ((&s.alpha - &neg).amax(), s.multiplicity))
                .min_by(|x, y| x.0.total_cmp(&y.0))
                .expect("at least one root");
            worst = worst.max(best.0);
            mult_ok &= best.1 == r.multiplicity;
        }
        (worst, mult_ok)
    }

    /// Largest `|ad_H X - alpha(H) X|` over root-space basis vectors and
    /// `H` in the `a_basis`.
    pub fn eigen_residual(&self, alg: &LieAlgebraRealization) -> Result<f64> {
        let ads: Vec<DMatrix<f64>> = self
            .a
            .a_basis
            .iter()
            .map(|h| alg.ad_matrix(h))
            .collect::<Result<_>>()?;
        let mut worst: f64 = 0.0;
        for r in &self.roots {
            for x in &r.root_space_basis {
                for (i, ad) in ads.iter().enumerate() {
                    let d = AlgebraElement::new(ad * &x.coeffs - &x.coeffs * r.alpha[i]);
                    worst = worst.max(alg.norm(&d));
                }
            }
        }
        Ok(worst)
    }

    /// Residual of `s(g_alpha) ⊂ g_{-alpha}`.
    pub fn involution_pairing_residual(&self, alg: &LieAlgebraRealization) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for r in &self.roots {
            let j = self.find_root(&(-&r.alpha)).ok_or(Error::ChamberViolation(0.0))?;
            let target = &self.roots[j].root_space_basis;
            for x in &r.root_space_basis {
                let sx = alg.cartan_involution(x)?;
                let mut proj = AlgebraElement::zeros(alg.dim_g);
                for u in target {
                    proj = &proj + &(u * alg.inner_product(u, &sx)?);
                }
                worst = worst.max(alg.norm(&(&sx - &proj)));
            }
        }
        Ok(worst)
    }

    /// Residual of `[g_alpha, g_beta] ⊂ g_{alpha+beta}` on random pairs of
    /// root vectors (including `g_0`).
    pub fn bracket_closure_residual(
        &self,
        alg: &LieAlgebraRealization,
        pairs: usize,
        seed: u64,
    ) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ads: Vec<DMatrix<f64>> = self
            .a
            .a_basis
            .iter()
            .map(|h| alg.ad_matrix(h))
            .collect::<Result<_>>()?;
        let mut spaces: Vec<(DVector<f64>, &Vec<AlgebraElement>)> = self
            .roots
            .iter()
            .map(|r| (r.alpha.clone(), &r.root_space_basis))
            .collect();
        spaces.push((DVector::zeros(self.a.rank), &self.g0_basis));
        let random_in = |basis: &Vec<AlgebraElement>, rng: &mut ChaCha8Rng| {
            let mut c = DVector::zeros(alg.dim_g);
            for b in basis {
                let w: f64 = StandardNormal.sample(rng);
                c += &b.coeffs * w;
            }
            AlgebraElement::new(c)
        };
        let mut worst: f64 = 0.0;
        for _ in 0..pairs {
            let i = rand::Rng::random_range(&mut rng, 0..spaces.len());
            let j = rand::Rng::random_range(&mut rng, 0..spaces.len());
            let x = random_in(spaces[i].1, &mut rng);
            let y = random_in(spaces[j].1, &mut rng);
            let z = alg.bracket(&x, &y)?;
            let sum = &spaces[i].0 + &spaces[j].0;
            let scale = (alg.norm(&x) * alg.norm(&y)).max(1e-300);
            for (k, ad) in ads.iter().enumerate() {
                let d = AlgebraElement::new(ad * &z.coeffs - &z.coeffs * sum[k]);
                worst = worst.max(alg.norm(&d) / scale);
            }
        }
        Ok(worst)
    }

    /// Simple roots of the chosen chamber: positive roots that are not a sum
    /// of two positive roots.
    pub fn simple_roots(&self) -> Vec<usize> {
        let pos = &self.positive;
        pos.iter()
            .cloned()
            .filter(|&i| {
                let target = &self.roots[i].alpha;
                let tol = 1e-6 * target.norm();
                !pos.iter().any(|&j| {
                    pos.iter()
                        .any(|&k| (&self.roots[j].alpha + &self.roots[k].alpha - target).amax() <= tol)
                })
            })
            .collect()
    }

    /// Integer coordinates of every positive root in the simple roots, as
    /// `(root index, coefficients)`.
    pub fn simple_expansions(&self) -> Vec<(usize, Vec<i64>)> {
        let simple = self.simple_roots();
        if simple.is_empty() {
            return Vec::new();
        }
        let cols: Vec<DVector<f64>> = simple.iter().map(|&i| self.roots[i].alpha.clone()).collect();
        let s = DMatrix::from_columns(&cols);
        let normal = s.transpose() * &s;
        let lu = normal.lu();
        self.positive
            .iter()
            .map(|&i| {
                let c = lu
                    .solve(&(s.transpose() * &self.roots[i].alpha))
                    .unwrap_or_else(|| DVector::zeros(simple.len()));
                (i, c.iter().map(|x| x.round() as i64).collect())
            })
            .collect()
    }

    /// Human-readable names of the positive roots, e.g. `2α` or `α1+α2`.
    pub fn positive_labels(&self) -> Vec<(usize, String)> {
        let rank_one = self.simple_roots().len() == 1;
        self.simple_expansions()
            .into_iter()
            .map(|(i, c)| {
                let mut parts = Vec::new();
                for (k, &ck) in c.iter().enumerate() {
                    if ck == 0 {
                        continue;
                    }
                    let name = if rank_one {
                        "α".to_string()
                    } else {
                        format!("α{}", k + 1)
                    };
                    if ck == 1 {
                        parts.push(name);
                    } else {
                        parts.push(format!("{ck}{name}"));
                    }
                }
                (i, parts.join("+"))
            })
            .collect()
    }
}
