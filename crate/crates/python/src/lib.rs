//! Python bindings: a `SymmetricSpace` class plus the scalar kernels and
//! SPD distance. Structured results come back as plain dicts and lists.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

use symspace::invariants::{self, SupDomain};
use symspace::numerics::busemann::{busemann_probe, default_step};
use symspace::numerics::{self, spd::SpdPoint};
use symspace::report::{round_json, VerificationReport};
use symspace::suites::{self, Target, VerifyOptions};
use symspace::Family;

create_exception!(pysymspace, SymspaceError, PyValueError);

fn err(e: symspace::Error) -> PyErr {
    SymspaceError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| SymspaceError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<DMatrix<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(SymspaceError::new_err("expected a square matrix"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn parse_target(name: &str) -> PyResult<Target> {
    Target::ALL
        .iter()
        .copied()
        .chain([Target::All])
        .find(|t| t.name() == name)
        .ok_or_else(|| SymspaceError::new_err(format!("unknown verify target `{name}`")))
}

/// A Riemannian symmetric space of noncompact type, e.g. `SymmetricSpace("sl:3")`.
#[pyclass(name = "SymmetricSpace", module = "pysymspace", frozen)]
struct PySpace {
    inner: symspace::SymmetricSpace,
}

impl PySpace {
    fn a_vector(&self, xi: Vec<f64>) -> PyResult<DVector<f64>> {
        if xi.len() != self.inner.rank() {
            return Err(err(symspace::Error::DimensionMismatch {
                expected: self.inner.rank(),
                got: xi.len(),
            }));
        }
        Ok(DVector::from_vec(xi))
    }

    fn p_vector(&self, xi: Vec<f64>) -> PyResult<DVector<f64>> {
        if xi.len() != self.inner.dim_m() {
            return Err(err(symspace::Error::DimensionMismatch {
                expected: self.inner.dim_m(),
                got: xi.len(),
            }));
        }
        Ok(DVector::from_vec(xi))
    }
}

#[pymethods]
impl PySpace {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        symspace::SymmetricSpace::parse(spec).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn spec(&self) -> String {
        self.inner.spec.to_string()
    }

    #[getter]
    fn dim_g(&self) -> usize {
        self.inner.alg.dim_g
    }

    #[getter]
    fn dim_m(&self) -> usize {
        self.inner.dim_m()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn norm_h(&self) -> f64 {
        self.inner.norm_h()
    }

    /// `H` in orthonormal coordinates of `a`.
    #[getter]
    fn h(&self) -> Vec<f64> {
        self.inner.h_coords().iter().copied().collect()
    }

    fn __repr__(&self) -> String {
        format!("SymmetricSpace('{}')", self.inner.spec)
    }

    /// Restricted roots as dicts with `label`, `alpha` (values on the
    /// orthonormal basis of `a`), `multiplicity` and `positive`.
    fn roots<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let labels = suites::root_labels(&self.inner);
        let rs = &self.inner.roots;
        let list: Vec<Value> = rs
            .roots
            .iter()
            .enumerate()
            .map(|(i, r)| {
                json!({
                    "label": labels[i],
                    "alpha": r.alpha.iter().collect::<Vec<_>>(),
                    "multiplicity": r.multiplicity,
                    "positive": rs.positive.contains(&i),
                })
            })
            .collect();
        to_py(py, &Value::Array(list))
    }

    /// `I`, `v`, `lambda0` and `|H|` for the Killing metric, or for the
    /// metric rescaled to maximal sectional curvature `normalize_curvature`.
    #[pyo3(signature = (normalize_curvature=None))]
    fn invariants<'py>(&self, py: Python<'py>, normalize_curvature: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
        let inv = invariants::space_invariants(&self.inner);
        let inv = match normalize_curvature {
            Some(k) => invariants::normalize_curvature(&self.inner, &inv, k).map_err(err)?,
            None => inv,
        };
        to_py(py, &to_value(&inv))
    }

    /// Sorted eigenvalues of `R_xi` on `p` for `xi` in `a` coordinates.
    fn spectrum(&self, xi: Vec<f64>) -> PyResult<Vec<f64>> {
        let xi = self.inner.a_element(&self.a_vector(xi)?);
        invariants::curvature_spectrum(&self.inner.alg, &self.inner.dec, &xi)
            .map(|s| s.eigenvalues)
            .map_err(err)
    }

    /// Mean curvature `l(xi) = tr sqrt(R_xi)` for `xi` in `a` coordinates.
    fn mean_curvature(&self, xi: Vec<f64>) -> PyResult<f64> {
        let xi = self.inner.a_element(&self.a_vector(xi)?);
        invariants::mean_curvature_l(&self.inner.alg, &self.inner.dec, &xi).map_err(err)
    }

    /// Numerical sup of `l` over unit vectors of `a` or `p`.
    #[pyo3(signature = (samples=10_000, seed=42, domain="a"))]
    fn sup_l(&self, samples: usize, seed: u64, domain: &str) -> PyResult<f64> {
        let domain = match domain {
            "a" => SupDomain::A,
            "p" => SupDomain::P,
            other => return Err(SymspaceError::new_err(format!("domain must be `a` or `p`, got `{other}`"))),
        };
        Ok(invariants::numeric_sup_l(&self.inner, samples, seed, domain).value)
    }

    /// Max relative error of RK4 Jacobi fields against the closed form
    /// along the geodesic with initial velocity `xi` (`p` coordinates).
    #[pyo3(signature = (xi, t_max=5.0, steps=5000))]
    fn jacobi_error(&self, xi: Vec<f64>, t_max: f64, steps: usize) -> PyResult<f64> {
        let xi = self.inner.p_element(&self.p_vector(xi)?);
        numerics::jacobi_verify(&self.inner.alg, &self.inner.dec, &xi, t_max, steps).map_err(err)
    }

    /// Monte Carlo `log V(r)` with its relative standard error.
    #[pyo3(signature = (r, samples=100_000, seed=42, threads=1))]
    fn volume<'py>(&self, py: Python<'py>, r: f64, samples: usize, seed: u64, threads: usize) -> PyResult<Bound<'py, PyAny>> {
        let v = py
            .detach(|| numerics::volume_ball(&self.inner, r, samples, seed, threads.max(1)))
            .map_err(err)?;
        to_py(py, &to_value(&v))
    }

    /// Volume growth curve on `[r1, r2]` and the entropy estimate.
    #[pyo3(signature = (r1=10.0, r2=20.0, samples=100_000, seed=42, threads=1))]
    fn entropy<'py>(
        &self,
        py: Python<'py>,
        r1: f64,
        r2: f64,
        samples: usize,
        seed: u64,
        threads: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let c = py
            .detach(|| numerics::entropy_estimate(&self.inner, r1, r2, samples, seed, threads.max(1)))
            .map_err(err)?;
        to_py(py, &to_value(&c))
    }

    /// Finite-difference Laplacian of `b_k` in the SPD model (`sl:n` only),
    /// with `xi = H/|H|` and a seeded probe point at distance 1 from `o`.
    #[pyo3(signature = (k, seed=42, step=None))]
    fn busemann<'py>(&self, py: Python<'py>, k: u32, seed: u64, step: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
        if self.inner.alg.family != Family::Sl {
            return Err(SymspaceError::new_err("busemann probes need the SPD model, i.e. sl:n"));
        }
        let h = self.inner.h().clone();
        let xi = &h * (1.0 / self.inner.alg.norm(&h));
        let x = suites::busemann_probe_point(&self.inner, seed).map_err(err)?;
        let step = step.unwrap_or_else(|| default_step(&x));
        let p = busemann_probe(&self.inner, &xi, &x, k, step).map_err(err)?;
        let mut v = to_value(&p);
        v["limit_error"] = json!(p.limit_error());
        to_py(py, &v)
    }

    /// Run a verification suite; returns the report as a dict.
    #[pyo3(signature = (target="all", seed=42, samples=100_000, r1=10.0, r2=20.0, tol=None, threads=1))]
    #[allow(clippy::too_many_arguments)]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        target: &str,
        seed: u64,
        samples: usize,
        r1: f64,
        r2: f64,
        tol: Option<f64>,
        threads: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let target = parse_target(target)?;
        if target == Target::Busemann && self.inner.alg.family != Family::Sl {
            return Err(SymspaceError::new_err("busemann probes need the SPD model, i.e. sl:n"));
        }
        let opts = VerifyOptions {
            seed,
            samples,
            r1,
            r2,
            tol,
            threads: threads.max(1),
        };
        let start = Instant::now();
        let checks = py.detach(|| suites::run_target(&self.inner, target, &opts));
        let report = VerificationReport {
            space: self.inner.spec.clone(),
            seed,
            checks,
            wall_time_ms: start.elapsed().as_millis() as u64,
            metric: "killing",
        };
        let mut v = round_json(to_value(&report));
        v["all_passed"] = json!(report.all_passed());
        to_py(py, &v)
    }
}

#[pyfunction]
fn sinh_ratio(lam: f64, t: f64) -> PyResult<f64> {
    numerics::sinh_ratio(lam, t).map_err(err)
}

#[pyfunction]
fn log_sinh_ratio(lam: f64, t: f64) -> PyResult<f64> {
    numerics::log_sinh_ratio(lam, t).map_err(err)
}

#[pyfunction]
fn sqrt_coth(lam: f64, s: f64) -> PyResult<f64> {
    numerics::sqrt_coth(lam, s).map_err(err)
}

/// Distance between two unit-determinant SPD matrices (nested lists).
#[pyfunction]
fn spd_distance(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> PyResult<f64> {
    let a = SpdPoint::new(matrix(a)?).map_err(err)?;
    let b = SpdPoint::new(matrix(b)?).map_err(err)?;
    numerics::spd_distance(&a, &b).map_err(err)
}

#[pymodule]
fn pysymspace(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpace>()?;
    m.add("SymspaceError", m.py().get_type::<SymspaceError>())?;
    m.add_function(wrap_pyfunction!(sinh_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(log_sinh_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(sqrt_coth, m)?)?;
    m.add_function(wrap_pyfunction!(spd_distance, m)?)?;
    Ok(())
}
