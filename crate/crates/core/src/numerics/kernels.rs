//! Overflow- and cancellation-safe forms of the radial Jacobi factors.

use crate::error::{Error, Result};

const NEG_TOL: f64 = 1e-10;
const SERIES_CUTOFF: f64 = 1e-6;

fn clamp_lambda(lambda: f64) -> Result<f64> {
    if lambda < -NEG_TOL || lambda.is_nan() {
        return Err(Error::DomainError(format!("negative curvature eigenvalue {lambda}")));
    }
    Ok(lambda.max(0.0))
}

/// `sinh(sqrt(lambda) t) / sqrt(lambda)`, equal to `t` in the flat limit.
pub fn sinh_ratio(lambda: f64, t: f64) -> Result<f64> {
    let lambda = clamp_lambda(lambda)?;
    if t < 0.0 {
        return Err(Error::DomainError(format!("negative time {t}")));
    }
    let x2 = lambda * t * t;
    if x2 < SERIES_CUTOFF {
        return Ok(t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0));
    }
    let s = lambda.sqrt();
    Ok((s * t).sinh() / s)
}

/// `ln sinh_ratio(lambda, t)` without overflow for large `sqrt(lambda) t`.
pub fn log_sinh_ratio(lambda: f64, t: f64) -> Result<f64> {
    let lambda = clamp_lambda(lambda)?;
    if t < 0.0 {
        return Err(Error::DomainError(format!("negative time {t}")));
    }
    if t == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let x2 = lambda * t * t;
    if x2 < SERIES_CUTOFF {
        return Ok(t.ln() + (x2 / 6.0 + x2 * x2 / 120.0).ln_1p());
    }
    let s = lambda.sqrt();
    let x = s * t;
    // ln sinh x = x + ln(1 - e^{-2x}) - ln 2
    Ok(x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2 - s.ln())
}

/// `sqrt(lambda) coth(sqrt(lambda) s)`, equal to `1/s` in the flat limit.
pub fn sqrt_coth(lambda: f64, s: f64) -> Result<f64> {
    let lambda = clamp_lambda(lambda)?;
    if !(s > 0.0) {
        return Err(Error::DomainError(format!("radius must be positive, got {s}")));
    }
    let x2 = lambda * s * s;
    if x2 < SERIES_CUTOFF {
        return Ok(1.0 / s + lambda * s / 3.0 - lambda * lambda * s * s * s / 45.0);
    }
    let r = lambda.sqrt();
    Ok(r / (r * s).tanh())
}
