use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::quad::{integrate, integrate_from_zero, Quadrature};
use crate::error::{NcfError, Result};

pub const QUAD_TOL: f64 = 1e-10;

/// `log t / (1 - t)`, continued by `-1` at `t = 1`.
fn dilog_integrand(t: f64) -> f64 {
    let u = 1.0 - t;
    if u.abs() < 1e-5 {
        // ln(1-u)/u = -1 - u/2 - u²/3 - ...
        -1.0 - u / 2.0 - u * u / 3.0
    } else {
        t.ln() / u
    }
}

/// `∫_0^x log t / (1 - t) dt` for `x >= 0`.
pub fn dilog_from_zero(x: f64) -> Result<Quadrature> {
    if x.is_nan() || x < 0.0 {
        return Err(NcfError::Argument(format!("dilogarithm argument {x} must be >= 0")));
    }
    if x == 0.0 {
        return Ok(Quadrature { value: 0.0, error: 0.0 });
    }
    let split = x.min(0.5);
    let head = integrate_from_zero(dilog_integrand, split, QUAD_TOL / 2.0)?;
    let tail = integrate(dilog_integrand, split, x, QUAD_TOL / 2.0)?;
    Ok(Quadrature { value: head.value + tail.value, error: head.error + tail.error })
}

/// `∫_1^x log t / (1 - t) dt`, which equals the classical `Li₂(1 - x)`.
pub fn dilog_from_one(x: f64) -> Result<Quadrature> {
    if x.is_nan() || x <= 0.0 {
        return Err(NcfError::Argument(format!("dilogarithm argument {x} must be > 0")));
    }
    if x < 0.5 {
        let whole = dilog_from_zero(1.0)?;
        let part = dilog_from_zero(x)?;
        return Ok(Quadrature { value: part.value - whole.value, error: whole.error + part.error });
    }
    integrate(dilog_integrand, 1.0, x, QUAD_TOL)
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(NcfError::Argument("N must be >= 1".into()));
    }
    Ok(())
}

fn log_ratio(n: u64) -> f64 {
    (1.0 / n as f64).ln_1p()
}

fn formula_with(li2: f64, n: u64) -> f64 {
    let nf = n as f64;
    (PI * PI / 3.0 + 2.0 * li2 + (nf + 1.0).ln() * nf.ln()) / log_ratio(n)
}

/// `(π²/3 + 2 Li₂(N+1) + log(N+1) log N) / log((N+1)/N)` with
/// `Li₂(x) = ∫_0^x log t/(1-t) dt`, returned with its sign untouched.
pub fn entropy_formula(n: u64) -> Result<Quadrature> {
    check_n(n)?;
    let li2 = dilog_from_zero(n as f64 + 1.0)?;
    Ok(Quadrature { value: formula_with(li2.value, n), error: 2.0 * li2.error / log_ratio(n) })
}

/// Invariant density of `T_N`: `1 / (log((N+1)/N) (N + x))` on `[0, 1]`.
pub fn invariant_density(n: u64, x: f64) -> f64 {
    1.0 / (log_ratio(n) * (n as f64 + x))
}

/// `∫_0^1 log(N/x²) ρ_N(x) dx`, the integral of `log |T_N'|` against the
/// invariant density.
pub fn rokhlin_entropy(n: u64) -> Result<Quadrature> {
    check_n(n)?;
    let nf = n as f64;
    integrate_from_zero(|x| (nf.ln() - 2.0 * x.ln()) * invariant_density(n, x), 1.0, QUAD_TOL)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub formula: f64,
    pub rokhlin: f64,
    /// `∫_0^{N+1} log t/(1-t) dt`.
    pub dilog: f64,
    pub formula_error: f64,
    pub rokhlin_error: f64,
    pub dilog_error: f64,
    /// Formula and integral have opposite signs.
    pub sign_mismatch: bool,
    /// `| |formula| - rokhlin |`.
    pub abs_gap: f64,
    /// The same formula with the dilogarithm integrated from 1 instead of 0.
    pub formula_lower_limit_one: f64,
}

pub fn entropy_report(n: u64) -> Result<EntropyReport> {
    check_n(n)?;
    let li2 = dilog_from_zero(n as f64 + 1.0)?;
    let formula = entropy_formula(n)?;
    let rokhlin = rokhlin_entropy(n)?;
    let shifted = dilog_from_one(n as f64 + 1.0)?;
    Ok(EntropyReport {
        n,
        formula: formula.value,
        rokhlin: rokhlin.value,
        dilog: li2.value,
        formula_error: formula.error,
        rokhlin_error: rokhlin.error,
        dilog_error: li2.error,
        sign_mismatch: formula.value.signum() != rokhlin.value.signum(),
        abs_gap: (formula.value.abs() - rokhlin.value).abs(),
        formula_lower_limit_one: formula_with(shifted.value, n),
    })
}
