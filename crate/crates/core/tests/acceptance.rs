//! Acceptance run: one PASS/FAIL line per criterion, then a nonzero exit if
//! any criterion failed.

mod common;

use std::process::{Command, ExitCode};
use std::time::Instant;

use symspace::numerics::busemann::{busemann_probe, default_step};
use symspace::report::Check;
use symspace::suites::{self, busemann_probe_point, VerifyOptions, BUSEMANN_KS};
use symspace::{invariants::space_invariants, SymmetricSpace};

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new(), notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn checks<'a>(&mut self, space: &str, checks: impl IntoIterator<Item = &'a Check>) {
        for c in checks {
            self.require(
                c.passed,
                format!("{space}: {} measured {:e} expected {:e} tol {:e}", c.name, c.measured, c.expected, c.tolerance),
            );
        }
    }
}

fn named<'a>(checks: &'a [Check], names: &[&str]) -> Vec<&'a Check> {
    let picked: Vec<&Check> = checks.iter().filter(|c| names.contains(&c.name.as_str())).collect();
    assert!(!picked.is_empty(), "no checks named {names:?}");
    picked
}

fn hyperbolic_benchmark(o: &mut Outcome) {
    let bin = env!("CARGO_BIN_EXE_symspace");
    for n in 2..=5 {
        let out = Command::new(bin)
            .args(["invariants", "--space", &format!("hyperbolic:{n}"), "--normalize-curvature", "-1", "--json"])
            .output()
            .expect("run symspace");
        if !out.status.success() {
            o.require(false, format!("hyperbolic:{n}: exit {:?}", out.status.code()));
            continue;
        }
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
        let i = v["isoperimetric"].as_f64().unwrap_or(f64::NAN);
        let l0 = v["lambda0"].as_f64().unwrap_or(f64::NAN);
        let m = n as f64 - 1.0;
        o.require((i - m).abs() <= 1e-9, format!("hyperbolic:{n}: I = {i}"));
        o.require((l0 - m * m / 4.0).abs() <= 1e-9, format!("hyperbolic:{n}: lambda0 = {l0}"));
    }
}

fn main_identity(o: &mut Outcome) {
    for s in common::SPACES {
        let inv = space_invariants(&common::space(s));
        let h = inv.norm_h;
        for (label, x) in [("I", inv.isoperimetric), ("v", inv.entropy)] {
            o.require((x - h).abs() <= 1e-12, format!("{s}: {label} = {x} vs |H| = {h}"));
        }
        o.require((inv.isoperimetric - inv.entropy).abs() <= 1e-12, format!("{s}: I != v"));
        o.require((inv.lambda0 - h * h / 4.0).abs() <= 1e-12, format!("{s}: lambda0 = {}", inv.lambda0));
    }
}

fn dual_path(o: &mut Outcome, opts: &VerifyOptions) {
    for s in common::SPACES {
        let checks = suites::curvature_suite(&common::space(s), opts);
        o.checks(
            s,
            named(
                &checks,
                &["spectrum on a: eigensolver vs root data", "tr sqrt(R|p) = 1/2 sum |alpha| m_alpha"],
            ),
        );
    }
}

fn mean_curvature(o: &mut Outcome, opts: &VerifyOptions) {
    for s in common::SPACES {
        let checks = suites::curvature_suite(&common::space(s), opts);
        o.checks(s, named(&checks, &["l(xi) = <xi, H> on the closed chamber"]));
    }
}

fn root_data(o: &mut Outcome) {
    let all_one = |sp: &SymmetricSpace| sp.roots.roots.iter().all(|r| r.multiplicity == 1);
    for n in 2..=4 {
        let sp = SymmetricSpace::parse(&format!("sl:{n}")).unwrap();
        // A_{n-1}: n(n-1) roots, rank n-1
        o.require(
            sp.rank() == n - 1 && sp.roots.roots.len() == n * (n - 1) && all_one(&sp),
            format!("sl:{n}: root system is not A_{}", n - 1),
        );
    }
    for p in 2..=5 {
        let sp = SymmetricSpace::parse(&format!("so:{p},1")).unwrap();
        o.require(
            sp.roots.roots.len() == 2 && sp.roots.roots.iter().all(|r| r.multiplicity == p - 1),
            format!("so:{p},1: expected {{±α}} with m = {}", p - 1),
        );
    }
    let su = common::space("su:2,1");
    let mut named: Vec<(String, usize)> = su
        .roots
        .positive_labels()
        .into_iter()
        .map(|(i, l)| (l, su.roots.roots[i].multiplicity))
        .collect();
    named.sort();
    o.require(
        su.roots.roots.len() == 4 && named == [("2α".to_string(), 1), ("α".to_string(), 2)],
        format!("su:2,1: positive roots {named:?}"),
    );
    for (s, h) in [("sl:2", 0.5f64.sqrt()), ("sl:3", 2.0 / 3f64.sqrt()), ("so:4,1", 1.5f64.sqrt())] {
        let got = common::space(s).norm_h();
        o.require((got - h).abs() <= 1e-10, format!("{s}: |H| = {got} vs {h}"));
    }
}

fn jacobi(o: &mut Outcome, opts: &VerifyOptions) {
    for s in common::SPACES {
        let checks = suites::jacobi_suite(&common::space(s), opts);
        o.checks(s, &checks);
        o.notes.push(format!("{s} {:.1e}", checks[0].measured));
    }
}

fn entropy(o: &mut Outcome, opts: &VerifyOptions) {
    for s in ["sl:2", "so:4,1", "sl:3"] {
        let sp = common::space(s);
        let start = Instant::now();
        let checks = suites::entropy_suite(&sp, opts);
        let secs = start.elapsed().as_secs_f64();
        let c = named(&checks, &["volume entropy vs |H|"]);
        o.checks(s, c.iter().copied());
        o.require(secs <= 300.0, format!("{s}: entropy took {secs:.0} s"));
        o.notes.push(format!(
            "{s} v={:.4} |H|={:.4} ({:.0} s)",
            c[0].measured,
            c[0].expected,
            secs
        ));
    }
}

fn busemann(o: &mut Outcome, opts: &VerifyOptions) {
    for s in ["sl:2", "sl:3"] {
        let sp = common::space(s);
        let checks = suites::busemann_suite(&sp, opts);
        o.checks(
            s,
            named(
                &checks,
                &[
                    "Laplacian b_k vs curvature formula (k=50)",
                    "Laplacian b_k vs <xi, H> (k=100)",
                    "|Laplacian b_k - <xi, H>| strictly decreasing in k",
                ],
            ),
        );
        // the error sequence behind the monotonicity check
        let h = sp.h().clone();
        let xi = &h * (1.0 / sp.alg.norm(&h));
        if let Ok(x) = busemann_probe_point(&sp, opts.seed) {
            let errs: Vec<String> = BUSEMANN_KS
                .iter()
                .filter_map(|&k| busemann_probe(&sp, &xi, &x, k, default_step(&x)).ok())
                .map(|p| format!("{:.2e}", p.limit_error()))
                .collect();
            o.notes.push(format!("{s} errors [{}]", errs.join(", ")));
        }
    }
}

fn cheeger_and_sup(o: &mut Outcome, opts: &VerifyOptions) {
    for s in common::SPACES {
        let sp = common::space(s);
        let cheeger = suites::cheeger_suite(&sp, opts);
        o.checks(
            s,
            named(
                &cheeger,
                &["I^2 / 4 <= lambda0", "lambda0 <= v^2 / 4", "I^2 / 4 = lambda0 = v^2 / 4"],
            ),
        );
        let sup = suites::sup_suite(&sp, opts);
        o.checks(s, named(&sup, &["sup l over p <= |H|", "sup l over p >= 0.999 |H|"]));
    }
}

fn structural(o: &mut Outcome, opts: &VerifyOptions) {
    for s in common::SPACES {
        let sp = common::space(s);
        o.checks(s, &suites::roots_suite(&sp, opts));
        let curv = suites::curvature_suite(&sp, opts);
        let flat = if sp.rank() >= 2 { "flat 2-plane inside a" } else { "no flat 2-planes in rank one" };
        o.checks(s, named(&curv, &[flat]));
    }
}

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let criteria: [(&str, Box<dyn Fn(&mut Outcome)>); 10] = [
        ("hyperbolic benchmark I = n-1, lambda0 = (n-1)^2/4", Box::new(hyperbolic_benchmark)),
        ("I = v = |H| and lambda0 = |H|^2/4 on every space", Box::new(main_identity)),
        ("dual-path curvature spectrum and trace", Box::new(|o| dual_path(o, &opts))),
        ("l(xi) = <xi, H> on the closed chamber", Box::new(|o| mean_curvature(o, &opts))),
        ("restricted root data and |H| oracles", Box::new(root_data)),
        ("Jacobi fields RK4 vs closed form", Box::new(|o| jacobi(o, &opts))),
        ("volume entropy Monte Carlo", Box::new(|o| entropy(o, &opts))),
        ("Busemann Laplacian in the SPD model", Box::new(|o| busemann(o, &opts))),
        ("Cheeger sandwich and numeric sup", Box::new(|o| cheeger_and_sup(o, &opts))),
        ("structural invariant suite", Box::new(|o| structural(o, &opts))),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let mut o = Outcome::new();
        let start = Instant::now();
        run(&mut o);
        let verdict = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        let notes = if o.notes.is_empty() { String::new() } else { format!(" | {}", o.notes.join("; ")) };
        println!(
            "criterion {:>2}: {verdict} {title} ({:.1} s){notes}",
            i + 1,
            start.elapsed().as_secs_f64()
        );
        for f in &o.failures {
            println!("    {f}");
        }
        failed += usize::from(!o.failures.is_empty());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
