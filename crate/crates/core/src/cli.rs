//! `symspace` command line: `info`, `roots`, `invariants` and
//! `verify <target>` for one `--space`.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::invariants::{normalize_curvature, space_invariants, SpaceInvariants};
use crate::lie_core::Family;
use crate::report::{render_report, round12, to_json_string, Format, VerificationReport};
use crate::space::{SpaceSpec, SymmetricSpace};
use crate::suites::{root_labels, run_target, Target, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "symspace", version, about = "Invariants of symmetric spaces of noncompact type")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// sl:n | so:p,q | su:p,q | sp:n | hyperbolic:n
    #[arg(long)]
    space: String,
    /// Emit JSON instead of a table.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimensions and rank.
    Info {
        #[command(flatten)]
        common: Common,
    },
    /// Restricted roots, multiplicities and H.
    Roots {
        #[command(flatten)]
        common: Common,
    },
    /// I, v and lambda0.
    Invariants {
        #[command(flatten)]
        common: Common,
        /// Rescale so the maximal sectional curvature is this (negative)
        /// value; rank one only.
        #[arg(long, allow_hyphen_values = true)]
        normalize_curvature: Option<f64>,
    },
    /// Run a verification suite.
    Verify {
        target: VerifyTarget,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 10.0)]
        r1: f64,
        #[arg(long, default_value_t = 20.0)]
        r2: f64,
        /// Override every check's tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyTarget {
    Roots,
    Curvature,
    Jacobi,
    Entropy,
    Busemann,
    Cheeger,
    Sup,
    All,
}

impl From<VerifyTarget> for Target {
    fn from(t: VerifyTarget) -> Self {
        match t {
            VerifyTarget::Roots => Target::Roots,
            VerifyTarget::Curvature => Target::Curvature,
            VerifyTarget::Jacobi => Target::Jacobi,
            VerifyTarget::Entropy => Target::Entropy,
            VerifyTarget::Busemann => Target::Busemann,
            VerifyTarget::Cheeger => Target::Cheeger,
            VerifyTarget::Sup => Target::Sup,
            VerifyTarget::All => Target::All,
        }
    }
}

#[derive(Serialize)]
struct InfoOut<'a> {
    space: &'a SpaceSpec,
    metric: &'static str,
    dim_g: usize,
    dim_t: usize,
    dim_m: usize,
    rank: usize,
    dim_g0: usize,
    norm_h: f64,
}

#[derive(Serialize)]
struct RootOut {
    label: String,
    positive: bool,
    multiplicity: usize,
    /// Values on the orthonormal basis of `a`.
    alpha: Vec<f64>,
    alpha_h: f64,
    norm_e_alpha: f64,
}

#[derive(Serialize)]
struct RootsOut<'a> {
    space: &'a SpaceSpec,
    metric: &'static str,
    rank: usize,
    dim_g0: usize,
    roots: Vec<RootOut>,
    h: Vec<f64>,
    norm_h: f64,
}

#[derive(Serialize)]
struct InvariantsOut<'a> {
    space: &'a SpaceSpec,
    metric: &'static str,
    #[serde(flatten)]
    invariants: SpaceInvariants,
}

/// Run with the process's stdout and stderr.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// `argv[0]` is the program name.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn load(common: &Common) -> Result<SymmetricSpace, Error> {
    let spec: SpaceSpec = common.space.parse()?;
    SymmetricSpace::from_spec(&spec)
}

fn fmt(x: f64) -> String {
    format!("{}", round12(x))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let text = match cli.command {
        Command::Info { common } => {
            let space = load(&common)?;
            let info = InfoOut {
                space: &space.spec,
                metric: "killing",
                dim_g: space.alg.dim_g,
                dim_t: space.dec.dim_t,
                dim_m: space.dim_m(),
                rank: space.rank(),
                dim_g0: space.roots.dim_g0,
                norm_h: space.norm_h(),
            };
            if common.json {
                to_json_string(&info)
            } else {
                format!(
                    "space   {}\nfamily  {}\ndim g   {}\ndim t   {}\ndim M   {}\nrank    {}\ndim g0  {}\n|H|     {}\nmetric  killing\n",
                    space.spec,
                    space.spec.family,
                    info.dim_g,
                    info.dim_t,
                    info.dim_m,
                    info.rank,
                    info.dim_g0,
                    fmt(info.norm_h)
                )
            }
        }
        Command::Roots { common } => {
            let space = load(&common)?;
            let rs = &space.roots;
            let labels = root_labels(&space);
            let h = space.h_coords();
            let mut roots: Vec<RootOut> = rs
                .roots
                .iter()
                .enumerate()
                .map(|(i, r)| RootOut {
                    label: labels[i].clone(),
                    positive: rs.positive.contains(&i),
                    multiplicity: r.multiplicity,
                    alpha: r.alpha.iter().cloned().collect(),
                    alpha_h: r.alpha.dot(&h),
                    norm_e_alpha: r.alpha.norm(),
                })
                .collect();
            // positives first, then by label
            roots.sort_by(|a, b| b.positive.cmp(&a.positive).then(a.label.cmp(&b.label)));
            if common.json {
                to_json_string(&RootsOut {
                    space: &space.spec,
                    metric: "killing",
                    rank: space.rank(),
                    dim_g0: rs.dim_g0,
                    roots,
                    h: h.iter().cloned().collect(),
                    norm_h: space.norm_h(),
                })
            } else {
                let w = roots.iter().map(|r| r.label.chars().count()).max().unwrap_or(4).max(4);
                let mut s = format!("{:<w$}  {:>4}  {:>15}  {:>15}\n", "root", "mult", "alpha(H)", "|e_alpha|");
                for r in &roots {
                    s.push_str(&format!(
                        "{:<w$}  {:>4}  {:>15}  {:>15}\n",
                        r.label,
                        r.multiplicity,
                        fmt(r.alpha_h),
                        fmt(r.norm_e_alpha)
                    ));
                }
                s.push_str(&format!(
                    "rank {}  dim g0 {}  |H| {}\n",
                    space.rank(),
                    rs.dim_g0,
                    fmt(space.norm_h())
                ));
                s
            }
        }
        Command::Invariants {
            common,
            normalize_curvature: kappa,
        } => {
            let space = load(&common)?;
            let mut inv = space_invariants(&space);
            let mut metric = "killing";
            if let Some(k) = kappa {
                inv = normalize_curvature(&space, &inv, k)?;
                metric = "curvature-normalized";
            }
            if common.json {
                to_json_string(&InvariantsOut {
                    space: &space.spec,
                    metric,
                    invariants: inv,
                })
            } else {
                format!(
                    "space          {}\nmetric         {}\nmetric scale   {}\ndim M          {}\nrank           {}\n|H|            {}\nisoperimetric  {}\nentropy        {}\nlambda0        {}\n",
                    space.spec,
                    metric,
                    fmt(inv.metric_scale),
                    inv.dim_m,
                    inv.rank,
                    fmt(inv.norm_h),
                    fmt(inv.isoperimetric),
                    fmt(inv.entropy),
                    fmt(inv.lambda0)
                )
            }
        }
        Command::Verify {
            target,
            common,
            samples,
            r1,
            r2,
            tol,
            threads,
        } => {
            let start = Instant::now();
            let space = load(&common)?;
            let target = Target::from(target);
            if target == Target::Busemann && space.alg.family != Family::Sl {
                return Err(Error::Precondition(format!(
                    "busemann probes need the SPD model, i.e. sl:n; got {}",
                    space.spec
                )));
            }
            let opts = VerifyOptions {
                seed: common.seed,
                samples,
                r1,
                r2,
                tol,
                threads: threads.max(1),
            };
            let checks = run_target(&space, target, &opts);
            let report = VerificationReport {
                space: space.spec.clone(),
                seed: common.seed,
                checks,
                wall_time_ms: start.elapsed().as_millis() as u64,
                metric: "killing",
            };
            let format = if common.json { Format::Json } else { Format::Table };
            let text = render_report(&report, format);
            write_out(out, &text);
            return Ok(report.exit_code());
        }
    };
    write_out(out, &text);
    Ok(EXIT_OK)
}

fn write_out(out: &mut dyn Write, text: &str) {
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}
