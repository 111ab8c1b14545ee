//! Verification reports: named checks with explicit tolerances, rendered
//! as an aligned table or as JSON.

use serde::Serialize;
use serde_json::Value;

use crate::space::SpaceSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn within(measured: f64, expected: f64, tolerance: f64) -> bool {
    (measured - expected).abs() <= tolerance * expected.abs().max(1.0)
}

impl Check {
    /// Passes iff `|measured - expected| <= tolerance * max(1, |expected|)`.
    pub fn new(name: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            expected,
            tolerance,
            passed: within(measured, expected, tolerance),
        }
    }

    /// Relative agreement `|measured - expected| <= rel * |expected|`,
    /// expressed in the report's tolerance convention.
    pub fn rel(name: impl Into<String>, measured: f64, expected: f64, rel: f64) -> Self {
        let tol = rel * expected.abs() / expected.abs().max(1.0);
        Self::new(name, measured, expected, tol)
    }

    /// `value <= bound`, reported as the deficit `max(0, value - bound)`
    /// against zero with absolute slack `tol`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64, tol: f64) -> Self {
        let deficit = if value.is_nan() || bound.is_nan() {
            f64::NAN
        } else {
            (value - bound).max(0.0)
        };
        Self::new(name, deficit, 0.0, tol)
    }

    /// Strict positivity; a non-positive value is reported as a nonzero
    /// deficit.
    pub fn positive(name: impl Into<String>, value: f64) -> Self {
        let deficit = if value > 0.0 {
            0.0
        } else if value.is_nan() {
            f64::NAN
        } else {
            (-value).max(f64::MIN_POSITIVE)
        };
        Self::new(name, deficit, 0.0, 0.0)
    }

    /// A check whose computation itself failed.
    pub fn errored(name: impl Into<String>, err: &crate::Error) -> Self {
        Self {
            name: format!("{} ({err})", name.into()),
            measured: f64::NAN,
            expected: 0.0,
            tolerance: 0.0,
            passed: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub space: SpaceSpec,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub wall_time_ms: u64,
    pub metric: &'static str,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

/// Round to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Round every floating-point number in a JSON tree to 12 significant
/// digits; integers are left alone.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().unwrap_or(f64::NAN));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    serde_json::to_string_pretty(&round_json(v)).expect("values serialize")
}

fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x == 0.0 {
        "0".into()
    } else if (1e-3..1e6).contains(&x.abs()) {
        format!("{x:.9}")
    } else {
        format!("{x:.6e}")
    }
}

pub fn render_report(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => to_json_string(report),
        Format::Table => {
            let rows: Vec<[String; 5]> = report
                .checks
                .iter()
                .map(|c| {
                    [
                        c.name.clone(),
                        fmt_real(c.measured),
                        fmt_real(c.expected),
                        fmt_real(c.tolerance),
                        if c.passed { "PASS" } else { "FAIL" }.to_string(),
                    ]
                })
                .collect();
            let header = ["check", "measured", "expected", "tolerance", "status"];
            let mut widths = header.map(|h| h.chars().count());
            for r in &rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: [&str; 5]| {
                let mut s = format!("{:<w$}", cells[0], w = widths[0]);
                for (i, c) in cells.iter().enumerate().skip(1) {
                    s.push_str("  ");
                    if i == 4 {
                        s.push_str(c);
                    } else {
                        s.push_str(&format!("{:>w$}", c, w = widths[i]));
                    }
                }
                s.trim_end().to_string()
            };
            let mut out = format!(
                "space {}  seed {}  metric {}\n",
                report.space, report.seed, report.metric
            );
            out.push_str(&line(header));
            out.push('\n');
            out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 8));
            out.push('\n');
            for r in &rows {
                out.push_str(&line([&r[0], &r[1], &r[2], &r[3], &r[4]]));
                out.push('\n');
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            out.push_str(&format!(
                "{} checks, {} failed, {} ms\n",
                report.checks.len(),
                failed,
                report.wall_time_ms
            ));
            out
        }
    }
}
