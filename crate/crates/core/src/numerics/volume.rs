//! Monte Carlo volume of geodesic balls and the volume entropy.
//!
//! In polar coordinates at the base point the volume density along the
//! direction `xi` is the product of the Jacobi factors
//! `sinh(sqrt(lambda_i) t) / sqrt(lambda_i)` over the `n - 1` curvature
//! eigenvalues on `xi^⊥`. The direction average is estimated by Monte Carlo
//! over the unit sphere of `p`, the radial integral by Gauss–Legendre, and
//! all accumulation happens in log space.
//!
//! Samples are split into fixed batches, each with its own ChaCha stream
//! `(seed, batch)`, so results do not depend on the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::random_unit;
use crate::linalg::{gauss_legendre, logsumexp};
use crate::numerics::kernels::log_sinh_ratio;
use crate::space::SymmetricSpace;

pub const BATCHES: usize = 8;
pub const QUAD_NODES: usize = 64;
/// Relative standard error above which a volume estimate is flagged.
pub const MAX_REL_STD_ERR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub log_v: f64,
    pub rel_std_err: f64,
    /// Set when `rel_std_err` exceeds [`MAX_REL_STD_ERR`].
    pub insufficient: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeGrowthCurve {
    pub r_grid: Vec<f64>,
    pub log_v: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub entropy_estimate: f64,
    pub half_width: f64,
    pub insufficient: bool,
}

impl VolumeGrowthCurve {
    /// Finite-difference slopes of `log V` between consecutive grid radii.
    pub fn slopes(&self) -> Vec<f64> {
        self.r_grid
            .windows(2)
            .zip(self.log_v.windows(2))
            .map(|(r, v)| (v[1] - v[0]) / (r[1] - r[0]))
            .collect()
    }
}

/// `ln` of the area of the unit sphere `S^{n-1} ⊂ R^n`.
pub fn ln_sphere_area(n: usize) -> f64 {
    use std::f64::consts::PI;
    // |S^0| = 2, |S^1| = 2 pi, |S^{n-1}| = 2 pi |S^{n-3}| / (n - 2)
    let mut area = if n % 2 == 1 { 2.0f64.ln() } else { (2.0 * PI).ln() };
    let mut k = if n % 2 == 1 { 1 } else { 2 };
    while k < n {
        k += 2;
        area += (2.0 * PI / (k - 2) as f64).ln();
    }
    area
}

/// Transverse curvature spectra of uniformly random unit directions,
/// grouped by batch.
fn sample_spectra(space: &SymmetricSpace, samples: usize, seed: u64, threads: usize) -> Vec<Vec<Vec<f64>>> {
    let n = space.dim_m();
    let sizes: Vec<usize> = (0..BATCHES)
        .map(|b| samples / BATCHES + usize::from(b < samples % BATCHES))
        .collect();
    let work = |b: usize| -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        (0..sizes[b])
            .map(|_| {
                let xi = random_unit(n, &mut rng);
                let spec = space.curvature.spectrum(&xi);
                spec[1..].iter().map(|&l| l.max(0.0)).collect()
            })
            .collect()
    };
    run_batches(threads, work)
}

fn run_batches<T: Send>(threads: usize, work: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    if threads <= 1 {
        return (0..BATCHES).map(work).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| (0..BATCHES).into_par_iter().map(&work).collect()),
        Err(_) => (0..BATCHES).map(work).collect(),
    }
}

struct Quadrature {
    nodes: Vec<f64>,
    ln_weights: Vec<f64>,
}

impl Quadrature {
    fn new() -> Self {
        let (nodes, weights) = gauss_legendre(QUAD_NODES);
        Self {
            nodes,
            ln_weights: weights.iter().map(|w| w.ln()).collect(),
        }
    }

    /// `ln ∫_0^r prod_i sinh_ratio(lambda_i, t) dt`.
    fn ln_radial(&self, transverse: &[f64], r: f64, buf: &mut Vec<f64>) -> f64 {
        buf.clear();
        let half = 0.5 * r;
        for (x, lw) in self.nodes.iter().zip(&self.ln_weights) {
            let t = half * (x + 1.0);
            let mut acc = lw + half.ln();
            for &l in transverse {
                acc += log_sinh_ratio(l, t).expect("clamped spectrum is nonnegative");
            }
            buf.push(acc);
        }
        logsumexp(buf)
    }
}

/// Per-batch `(ln sum_j exp(ln I_j), count)` at every radius.
fn batch_log_sums(spectra: &[Vec<Vec<f64>>], radii: &[f64], threads: usize) -> Vec<Vec<(f64, usize)>> {
    let quad = Quadrature::new();
    let work = |b: usize| -> Vec<(f64, usize)> {
        let mut buf = Vec::with_capacity(QUAD_NODES);
        let mut per_sample = Vec::with_capacity(spectra[b].len());
        radii
            .iter()
            .map(|&r| {
                per_sample.clear();
                for tr in &spectra[b] {
                    per_sample.push(quad.ln_radial(tr, r, &mut buf));
                }
                (logsumexp(&per_sample), spectra[b].len())
            })
            .collect()
    };
    run_batches(threads, work)
}

/// Combine batch sums at radius index `k` into `(log V, relative std err,
/// per-batch log V)`.
fn combine(ln_area: f64, sums: &[Vec<(f64, usize)>], k: usize) -> (f64, f64, Vec<f64>) {
    let total: usize = sums.iter().map(|s| s[k].1).sum();
    let logs: Vec<f64> = sums.iter().map(|s| s[k].0).collect();
    let log_mean = logsumexp(&logs) - (total as f64).ln();
    let per_batch: Vec<f64> = sums
        .iter()
        .map(|s| s[k].0 - (s[k].1 as f64).ln() + ln_area)
        .collect();
    let ratios: Vec<f64> = per_batch.iter().map(|lb| (lb - ln_area - log_mean).exp()).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let var = ratios.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (ratios.len() - 1) as f64;
    let rel_se = (var / ratios.len() as f64).sqrt();
    (ln_area + log_mean, rel_se, per_batch)
}

/// Monte Carlo estimate of `ln V(r)` for the geodesic ball of radius `r`.
pub fn volume_ball(
    space: &SymmetricSpace,
    r: f64,
    samples: usize,
    seed: u64,
    threads: usize,
) -> Result<VolumeEstimate> {
    if !(r > 0.0) {
        return Err(Error::Precondition(format!("radius must be positive, got {r}")));
    }
    if samples < 1000 {
        return Err(Error::Precondition(format!("need at least 1000 samples, got {samples}")));
    }
    let spectra = sample_spectra(space, samples, seed, threads);
    let sums = batch_log_sums(&spectra, &[r], threads);
    let (log_v, rel_std_err, _) = combine(ln_sphere_area(space.dim_m()), &sums, 0);
    Ok(VolumeEstimate {
        log_v,
        rel_std_err,
        insufficient: rel_std_err > MAX_REL_STD_ERR,
    })
}

/// Two-radius slope of `ln V` between `r1` and `r2`, with `ln V` also
/// tabulated on an even grid in between. The same directions are used at
/// every radius.
pub fn entropy_estimate(
    space: &SymmetricSpace,
    r1: f64,
    r2: f64,
    samples: usize,
    seed: u64,
    threads: usize,
) -> Result<VolumeGrowthCurve> {
    if !(5.0 <= r1 && r1 < r2) {
        return Err(Error::Precondition(format!("need 5 <= r1 < r2, got r1={r1}, r2={r2}")));
    }
    if samples < 1000 {
        return Err(Error::Precondition(format!("need at least 1000 samples, got {samples}")));
    }
    const GRID: usize = 6;
    let r_grid: Vec<f64> = (0..GRID)
        .map(|i| r1 + (r2 - r1) * i as f64 / (GRID - 1) as f64)
        .collect();
    let spectra = sample_spectra(space, samples, seed, threads);
    let sums = batch_log_sums(&spectra, &r_grid, threads);
    let ln_area = ln_sphere_area(space.dim_m());
    let mut log_v = Vec::with_capacity(GRID);
    let mut insufficient = false;
    let mut first = Vec::new();
    let mut last = Vec::new();
    for k in 0..GRID {
        let (lv, se, per_batch) = combine(ln_area, &sums, k);
        insufficient |= se > MAX_REL_STD_ERR;
        log_v.push(lv);
        if k == 0 {
            first = per_batch;
        } else if k == GRID - 1 {
            last = per_batch;
        }
    }
    let entropy = (log_v[GRID - 1] - log_v[0]) / (r2 - r1);
    let slopes: Vec<f64> = first
        .iter()
        .zip(&last)
        .map(|(a, b)| (b - a) / (r2 - r1))
        .collect();
    let m = slopes.iter().sum::<f64>() / slopes.len() as f64;
    let sd = (slopes.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (slopes.len() - 1) as f64).sqrt();
    Ok(VolumeGrowthCurve {
        r_grid,
        log_v,
        samples,
        seed,
        entropy_estimate: entropy,
        half_width: 1.96 * sd / (slopes.len() as f64).sqrt(),
        insufficient,
    })
}
