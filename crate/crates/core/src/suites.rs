//! Check suites behind `symspace verify`. Every suite returns a list of
//! [`Check`]s; nothing here prints.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::invariants::{
    curvature_spectrum, isotropy_rotate, numeric_sup_l, random_unit, rescale_invariants, root_abs_sum,
    root_formula_spectrum, sectional_curvature, sectional_curvature_range, space_invariants, SupDomain,
};
use crate::lie_core::{AlgebraElement, Family};
use crate::linalg::sym_eigen;
use crate::numerics::busemann::{busemann_probe, default_step};
use crate::numerics::jacobi::jacobi_verify;
use crate::numerics::spd::{algebra_tangent, spd_geodesic, SpdPoint};
use crate::numerics::volume::entropy_estimate;
use crate::report::Check;
use crate::root_space::choose_positive;
use crate::space::SymmetricSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Roots,
    Curvature,
    Jacobi,
    Entropy,
    Busemann,
    Cheeger,
    Sup,
    All,
}

impl Target {
    pub const ALL: [Target; 7] = [
        Target::Roots,
        Target::Curvature,
        Target::Jacobi,
        Target::Entropy,
        Target::Busemann,
        Target::Cheeger,
        Target::Sup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Roots => "roots",
            Target::Curvature => "curvature",
            Target::Jacobi => "jacobi",
            Target::Entropy => "entropy",
            Target::Busemann => "busemann",
            Target::Cheeger => "cheeger",
            Target::Sup => "sup",
            Target::All => "all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Monte Carlo directions for the volume integral.
    pub samples: usize,
    pub r1: f64,
    pub r2: f64,
    /// Overrides every check's default tolerance when set.
    pub tol: Option<f64>,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 100_000,
            r1: 10.0,
            r2: 20.0,
            tol: None,
            threads: 1,
        }
    }
}

impl VerifyOptions {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub const DUAL_PATH_SAMPLES: usize = 200;
pub const CHAMBER_SAMPLES: usize = 100;
pub const JACOBI_DIRECTIONS: usize = 20;
pub const JACOBI_STEPS: usize = 5000;
pub const JACOBI_T_MAX: f64 = 5.0;
pub const SUP_SAMPLES: usize = 10_000;
pub const BUSEMANN_KS: [u32; 4] = [10, 20, 50, 100];

fn or_error(name: &str, r: Result<Check>) -> Check {
    r.unwrap_or_else(|e| Check::errored(name, &e))
}

/// Run one target; `All` runs every suite that applies to the space
/// (Busemann probes only exist for `sl:n`).
pub fn run_target(space: &SymmetricSpace, target: Target, opts: &VerifyOptions) -> Vec<Check> {
    match target {
        Target::Roots => roots_suite(space, opts),
        Target::Curvature => curvature_suite(space, opts),
        Target::Jacobi => jacobi_suite(space, opts),
        Target::Entropy => entropy_suite(space, opts),
        Target::Busemann => busemann_suite(space, opts),
        Target::Cheeger => cheeger_suite(space, opts),
        Target::Sup => sup_suite(space, opts),
        Target::All => Target::ALL
            .iter()
            .filter(|t| **t != Target::Busemann || space.alg.family == Family::Sl)
            .flat_map(|t| run_target(space, *t, opts))
            .collect(),
    }
}

/// Names for every root: simple-root expansions for positive roots and
/// their negatives.
pub fn root_labels(space: &SymmetricSpace) -> Vec<String> {
    let rs = &space.roots;
    let mut labels = vec![String::new(); rs.roots.len()];
    for (i, label) in rs.positive_labels() {
        labels[i] = label;
    }
    for i in 0..rs.roots.len() {
        if labels[i].is_empty() {
            let neg = -&rs.roots[i].alpha;
            if let Some(&j) = rs
                .positive
                .iter()
                .find(|&&j| (&rs.roots[j].alpha - &neg).amax() <= 1e-6 * neg.norm())
            {
                labels[i] = format!("-{}", labels[j]);
            }
        }
    }
    labels
}

fn killing_gram(space: &SymmetricSpace, basis: &[AlgebraElement]) -> Result<DMatrix<f64>> {
    let n = basis.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = space.alg.killing_form(&basis[i], &basis[j])?;
        }
    }
    Ok(g)
}

pub fn roots_suite(space: &SymmetricSpace, opts: &VerifyOptions) -> Vec<Check> {
    let alg = &space.alg;
    let rs = &space.roots;
    let mut out = Vec::new();

    out.push(Check::new("bracket antisymmetry", alg.antisymmetry_residual(), 0.0, opts.tol(1e-10)));
    out.push(Check::new("Jacobi identity", alg.jacobi_residual(), 0.0, opts.tol(1e-9)));
    out.push(Check::new(
        "involution is an automorphism",
        alg.involution_automorphism_residual(),
        0.0,
        opts.tol(1e-9),
    ));
    out.push(Check::new(
        "Killing form ad-invariance",
        alg.killing_invariance_residual(),
        0.0,
        opts.tol(1e-9),
    ));
    for (name, basis, sign) in [
        ("Killing form negative definite on t", &space.dec.t_basis, -1.0),
        ("Killing form positive definite on p", &space.dec.p_basis, 1.0),
    ] {
        out.push(or_error(
            name,
            killing_gram(space, basis).map(|g| {
                let eig = sym_eigen(&(g * sign));
                Check::positive(name, eig.values[0])
            }),
        ));
    }
    out.push(Check::new(
        "dim t + dim p = dim g",
        (space.dec.dim_t + space.dec.dim_p) as f64,
        alg.dim_g as f64,
        0.0,
    ));

    let labels = root_labels(space);
    for &i in &rs.positive {
        let r = &rs.roots[i];
        let neg = -&r.alpha;
        let m_neg = rs
            .roots
            .iter()
            .find(|s| (&s.alpha - &neg).amax() <= 1e-6 * neg.norm())
            .map_or(f64::NAN, |s| s.multiplicity as f64);
        out.push(Check::new(
            format!("multiplicity[{}]", labels[i]),
            r.multiplicity as f64,
            m_neg,
            0.0,
        ));
    }
    let (worst, mult_ok) = rs.negation_check();
    out.push(Check::new("roots closed under negation", worst, 0.0, opts.tol(1e-8)));
    out.push(Check::new(
        "negated roots share multiplicity",
        if mult_ok { 0.0 } else { 1.0 },
        0.0,
        0.0,
    ));
    out.push(Check::new(
        "positive roots are half of all roots",
        rs.positive.len() as f64,
        rs.roots.len() as f64 / 2.0,
        0.0,
    ));
    out.push(Check::new(
        "dim g0 + sum of multiplicities = dim g",
        (rs.dim_g0 + rs.total_multiplicity()) as f64,
        alg.dim_g as f64,
        0.0,
    ));
    out.push(or_error(
        "root space eigen-equation",
        rs.eigen_residual(alg)
            .map(|r| Check::new("root space eigen-equation", r, 0.0, opts.tol(1e-8))),
    ));
    out.push(or_error(
        "involution maps g_alpha to g_-alpha",
        rs.involution_pairing_residual(alg)
            .map(|r| Check::new("involution maps g_alpha to g_-alpha", r, 0.0, opts.tol(1e-8))),
    ));
    out.push(or_error(
        "[g_alpha, g_beta] in g_alpha+beta",
        rs.bracket_closure_residual(alg, 60, opts.seed)
            .map(|r| Check::new("[g_alpha, g_beta] in g_alpha+beta", r, 0.0, opts.tol(1e-8))),
    ));

    let h = space.h_coords();
    let min_alpha_h = rs
        .positive
        .iter()
        .map(|&i| rs.roots[i].alpha.dot(&h))
        .fold(f64::INFINITY, f64::min);
    out.push(Check::positive("alpha(H) > 0 on positive roots", min_alpha_h));

    // |H| is independent of the chamber
    let norm_h = space.norm_h();
    let mut worst: f64 = 0.0;
    let mut chambers_ok = true;
    for k in 0..10u64 {
        match choose_positive(rs, None, opts.seed.wrapping_add(k)) {
            Ok(other) => {
                let n = other.norm_h().unwrap_or(f64::NAN);
                worst = worst.max((n - norm_h).abs() / norm_h);
            }
            Err(_) => chambers_ok = false,
        }
    }
    if let Some(w) = &rs.chamber_witness {
        match choose_positive(rs, Some(&-w), 0) {
            Ok(other) => {
                let n = other.norm_h().unwrap_or(f64::NAN);
                worst = worst.max((n - norm_h).abs() / norm_h);
            }
            Err(_) => chambers_ok = false,
        }
    }
    if !chambers_ok {
        worst = f64::NAN;
    }
    out.push(Check::new("|H| independent of chamber", worst, 0.0, opts.tol(1e-10)));
    out
}

fn random_in_chamber(space: &SymmetricSpace, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let rs = &space.roots;
    for _ in 0..100_000 {
        let v = random_unit(space.rank(), rng);
        if rs.positive.iter().all(|&i| rs.roots[i].alpha.dot(&v) >= 0.0) {
            return v;
        }
    }
    let h = space.h_coords();
    &h / h.norm()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn curvature_suite(space: &SymmetricSpace, opts: &VerifyOptions) -> Vec<Check> {
    let alg = &space.alg;
    let dec = &space.dec;
    let rs = &space.roots;
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    // two independent code paths on a
    let mut spec_err: f64 = 0.0;
    let mut trace_root_err: f64 = 0.0;
    let mut trace_full_err: f64 = 0.0;
    let mut zero_count_misses = 0usize;
    for _ in 0..DUAL_PATH_SAMPLES {
        let c = random_unit(space.rank(), &mut rng);
        let xi = space.a_element(&c);
        match curvature_spectrum(alg, dec, &xi) {
            Ok(s) => {
                spec_err = spec_err.max(max_abs_diff(&s.eigenvalues, &root_formula_spectrum(rs, &c)));
                let tr_p = s.mean_curvature();
                trace_root_err = trace_root_err.max((tr_p - 0.5 * root_abs_sum(rs, &c)).abs());
                let full = crate::invariants::trace_sqrt_full(alg, dec, &xi).unwrap_or(f64::NAN);
                trace_full_err = trace_full_err.max((tr_p - 0.5 * full).abs());
                if s.zero_count != space.rank() {
                    zero_count_misses += 1;
                }
            }
            Err(_) => spec_err = f64::NAN,
        }
    }
    out.push(Check::new("spectrum on a: eigensolver vs root data", spec_err, 0.0, opts.tol(1e-9)));
    out.push(Check::new(
        "tr sqrt(R|p) = 1/2 sum |alpha| m_alpha",
        trace_root_err,
        0.0,
        opts.tol(1e-9),
    ));
    out.push(Check::new(
        "tr sqrt(R|p) = 1/2 tr sqrt(R on g)",
        trace_full_err,
        0.0,
        opts.tol(1e-9),
    ));
    out.push(Check::new(
        "zero eigenvalues = rank for regular xi",
        zero_count_misses as f64,
        0.0,
        0.0,
    ));

    // l(xi) = <xi, H> on the closed chamber
    let h = space.h_coords();
    let mut l_err: f64 = 0.0;
    let mut dirs: Vec<DVector<f64>> = (0..CHAMBER_SAMPLES - 1)
        .map(|_| random_in_chamber(space, &mut rng))
        .collect();
    dirs.push(&h / h.norm());
    for c in &dirs {
        let l = crate::invariants::mean_curvature_l(alg, dec, &space.a_element(c)).unwrap_or(f64::NAN);
        l_err = l_err.max((l - c.dot(&h)).abs());
    }
    out.push(Check::new("l(xi) = <xi, H> on the closed chamber", l_err, 0.0, opts.tol(1e-10)));

    // properties of R_xi for arbitrary xi in p
    let n = space.dim_m();
    let mut min_eig = f64::INFINITY;
    let mut sym_err: f64 = 0.0;
    let mut kernel_err: f64 = 0.0;
    let mut iso_err: f64 = 0.0;
    for _ in 0..50 {
        let v = random_unit(n, &mut rng);
        let r = space.curvature.operator(&v);
        let s = sym_eigen(&r).values;
        min_eig = min_eig.min(s[0]);
        let s_neg = space.curvature.spectrum(&-&v);
        sym_err = sym_err.max(max_abs_diff(s.as_slice(), &s_neg));
        kernel_err = kernel_err.max((&r * &v).norm());

        let mut tc = DVector::zeros(alg.dim_g);
        for b in &space.dec.t_basis {
            let w: f64 = StandardNormal.sample(&mut rng);
            tc += &b.coeffs * w;
        }
        let xi = space.p_element(&v);
        let rotated = isotropy_rotate(alg, &AlgebraElement::new(tc), &xi).and_then(|x| {
            let s2 = curvature_spectrum(alg, dec, &x)?.eigenvalues;
            Ok(max_abs_diff(s.as_slice(), &s2))
        });
        iso_err = iso_err.max(rotated.unwrap_or(f64::NAN));
    }
    out.push(Check::at_most("R_xi is nonnegative", -min_eig, 0.0, opts.tol(1e-10)));
    out.push(Check::new("spectrum of -xi equals spectrum of xi", sym_err, 0.0, opts.tol(1e-12)));
    out.push(Check::new("R_xi xi = 0", kernel_err, 0.0, opts.tol(1e-10)));
    out.push(Check::new("spectrum invariant under isotropy", iso_err, 0.0, opts.tol(1e-8)));

    // sectional curvature
    if space.rank() >= 2 {
        let a = &rs.a.a_basis;
        let k = sectional_curvature(alg, &a[0], &a[1]);
        out.push(or_error(
            "flat 2-plane inside a",
            k.map(|k| Check::new("flat 2-plane inside a", k.abs(), 0.0, opts.tol(1e-12))),
        ));
    } else {
        let (lo, hi) = sectional_curvature_range(space, 2000, opts.seed);
        out.push(Check::positive("no flat 2-planes in rank one", -hi));
        let quarter = space.alg.family == Family::Su && space.alg.params[0] >= 2;
        if quarter {
            out.push(Check::rel("quarter pinching kappa_min / kappa_max", lo / hi, 4.0, opts.tol(0.01)));
        } else {
            out.push(Check::new("constant sectional curvature", (lo - hi).abs(), 0.0, opts.tol(1e-9)));
        }
        let yau = (n as f64 - 1.0) * (-hi).sqrt();
        let i = space.norm_h();
        out.push(Check::at_most("I >= (n-1) sqrt(-kappa_max)", yau, i, opts.tol(1e-9)));
        if !quarter {
            out.push(Check::new("I = (n-1) sqrt(-kappa) at constant curvature", i, yau, opts.tol(1e-9)));
        }
    }
    out
}

pub fn jacobi_suite(space: &SymmetricSpace, opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..JACOBI_DIRECTIONS {
        let v = random_unit(space.dim_m(), &mut rng);
        let xi = space.p_element(&v);
        let e = jacobi_verify(&space.alg, &space.dec, &xi, JACOBI_T_MAX, JACOBI_STEPS).unwrap_or(f64::NAN);
        worst = if e.is_nan() { f64::NAN } else { worst.max(e) };
    }
    vec![Check::new(
        "Jacobi fields: RK4 vs sinh closed form",
        worst,
        0.0,
        opts.tol(1e-5),
    )]
}

pub fn entropy_suite(space: &SymmetricSpace, opts: &VerifyOptions) -> Vec<Check> {
    let name = "volume entropy vs |H|";
    let curve = match entropy_estimate(space, opts.r1, opts.r2, opts.samples, opts.seed, opts.threads) {
        Ok(c) => c,
        Err(e) => return vec![Check::errored(name, &e)],
    };
    let h = space.norm_h();
    let rel = if space.rank() == 1 { 0.05 } else { 0.10 };
    let mut out = vec![Check::rel(name, curve.entropy_estimate, h, opts.tol(rel))];
    let min_step = curve
        .log_v
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    out.push(Check::positive("log V strictly increasing", min_step));
    let min_slope = curve.slopes().into_iter().fold(f64::INFINITY, f64::min);
    out.push(Check::at_most("tail slope of log V >= 0.95 |H|", 0.95 * h, min_slope, 0.0));
    out.push(Check::new(
        "Monte Carlo error below 50%",
        if curve.insufficient { 1.0 } else { 0.0 },
        0.0,
        0.0,
    ));
    out.push(Check::at_most(
        "batch half-width within entropy tolerance",
        curve.half_width,
        rel * h,
        0.0,
    ));
    out
}

/// The probe point used by the Busemann suite: distance 1 from `o` in a
/// seeded random direction.
pub fn busemann_probe_point(space: &SymmetricSpace, seed: u64) -> Result<SpdPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = random_unit(space.dim_m(), &mut rng);
    let m = space.alg.to_matrix(&space.p_element(&v));
    spd_geodesic(&SpdPoint::identity(space.alg.d_rep), &algebra_tangent(&m), 1.0)
}

pub fn busemann_suite(space: &SymmetricSpace, opts: &VerifyOptions) -> Vec<Check> {
    let name = "Busemann probe";
    let h = space.h().clone();
    let xi = &h * (1.0 / space.alg.norm(&h));
    let x = match busemann_probe_point(space, opts.seed) {
        Ok(x) => x,
        Err(e) => return vec![Check::errored(name, &e)],
    };
    let step = default_step(&x);
    let mut probes = Vec::new();
    for k in BUSEMANN_KS {
        match busemann_probe(space, &xi, &x, k, step) {
            Ok(p) => probes.push(p),
            Err(e) => return vec![Check::errored(format!("{name} k={k}"), &e)],
        }
    }
    let mut out = Vec::new();
    for p in &probes {
        if p.k == 50 {
            out.push(Check::rel(
                "Laplacian b_k vs curvature formula (k=50)",
                p.fd_laplacian,
                p.dbk_rhs,
                opts.tol(1e-3),
            ));
        }
        if p.k == 100 {
            out.push(Check::rel(
                "Laplacian b_k vs <xi, H> (k=100)",
                p.fd_laplacian,
                p.l_xi,
                opts.tol(0.02),
            ));
        }
    }
    let errors: Vec<f64> = probes.iter().map(|p| p.limit_error()).collect();
    let non_decreasing = errors.windows(2).filter(|w| w[1] >= w[0]).count();
    out.push(Check::new(
        "|Laplacian b_k - <xi, H>| strictly decreasing in k",
        non_decreasing as f64,
        0.0,
        0.0,
    ));
    let increase = probes
        .windows(2)
        .map(|w| w[1].b_k_value - w[0].b_k_value)
        .fold(0.0, f64::max);
    out.push(Check::at_most("b_k nonincreasing in k", increase, 0.0, opts.tol(1e-10)));
    let d_ox = 1.0;
    let worst = probes.iter().map(|p| p.b_k_value.abs()).fold(0.0, f64::max);
    out.push(Check::at_most("|b_k| <= d(o, x)", worst, d_ox, opts.tol(1e-10)));
    let at_o = busemann_probe(space, &xi, &SpdPoint::identity(space.alg.d_rep), 10, 1e-3);
    out.push(or_error(
        "b_k(o) = 0",
        at_o.map(|p| Check::new("b_k(o) = 0", p.b_k_value, 0.0, opts.tol(1e-12))),
    ));
    out
}

pub fn cheeger_suite(space: &SymmetricSpace, opts: &VerifyOptions) -> Vec<Check> {
    let inv = space_invariants(space);
    let t = opts.tol(1e-12);
    let mut out = vec![
        Check::new("I = |H|", inv.isoperimetric, inv.norm_h, t),
        Check::new("v = |H|", inv.entropy, inv.norm_h, t),
        Check::new("lambda0 = |H|^2 / 4", inv.lambda0, inv.norm_h * inv.norm_h / 4.0, t),
        Check::at_most("I^2 / 4 <= lambda0", inv.isoperimetric.powi(2) / 4.0, inv.lambda0, t),
        Check::at_most("lambda0 <= v^2 / 4", inv.lambda0, inv.entropy.powi(2) / 4.0, t),
        Check::new("I^2 / 4 = lambda0 = v^2 / 4", inv.isoperimetric.powi(2) / 4.0, inv.entropy.powi(2) / 4.0, t),
    ];
    out.push(or_error(
        "rescaling by c = 2 shrinks I, v, lambda0",
        rescale_invariants(&inv, 2.0).map(|s| {
            let gap = (inv.isoperimetric - s.isoperimetric)
                .min(inv.entropy - s.entropy)
                .min(inv.lambda0 - s.lambda0);
            Check::positive("rescaling by c = 2 shrinks I, v, lambda0", gap)
        }),
    ));
    out
}

pub fn sup_suite(space: &SymmetricSpace, opts: &VerifyOptions) -> Vec<Check> {
    let h = space.norm_h();
    let p = numeric_sup_l(space, SUP_SAMPLES, opts.seed, SupDomain::P);
    let mut out = vec![
        Check::at_most("sup l over p <= |H|", p.value, h * (1.0 + 1e-9), 0.0),
        Check::at_most("sup l over p >= 0.999 |H|", 0.999 * h, p.value, 0.0),
    ];
    if space.rank() >= 2 {
        let a = numeric_sup_l(space, SUP_SAMPLES, opts.seed, SupDomain::A);
        out.push(Check::at_most("sup l over a <= |H|", a.value, h * (1.0 + 1e-9), 0.0));
        out.push(Check::at_most("sup l over a >= 0.999 |H|", 0.999 * h, a.value, 0.0));
        // the maximizer lies in some chamber; compare with that chamber's H
        let c = space.roots.a.coords(&space.alg, &a.argmax);
        let angle = choose_positive(&space.roots, Some(&c), 0)
            .ok()
            .and_then(|rs| rs.h_coords())
            .map_or(f64::NAN, |hc| (c.dot(&hc) / (c.norm() * hc.norm())).clamp(-1.0, 1.0).acos());
        out.push(Check::at_most("argmax within 0.05 rad of its chamber's H", angle, 0.05, 0.0));
    }
    out
}
