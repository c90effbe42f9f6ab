//! Finite-n upper bound built from the linear Gaussian process.

use super::check_order;
use crate::error::{Error, Result};
use crate::numerics::{integrate, ln_gamma, log_erfc};
use crate::SpinSet;

const QUADRATURE_REL_TOL: f64 = 1e-10;

/// Truncation depth of the chi integrand below its peak, in nats.
const TRUNCATION_NATS: f64 = 60.0;

/// `ln E exp(t max_{x in S} g^T x)` for `g ~ N(0, I_n)`.
///
/// Ising: the max is `sum |g_i| / sqrt(n)`, so the value is
/// `n (s^2/2 + ln erfc(-s/sqrt 2))` with `s = t / sqrt n`.
/// Spherical: the max is `|g|_2` and the chi-distribution moment generating
/// function is integrated numerically.
pub fn log_mgf_max_linear(set: SpinSet, n: usize, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("dimension n must be at least 1"));
    }
    if !t.is_finite() {
        return Err(Error::domain(format!("t must be finite, got {t}")));
    }
    let nf = n as f64;
    match set {
        SpinSet::Ising => {
            let s = t / nf.sqrt();
            Ok(nf * (0.5 * s * s + log_erfc(-s * std::f64::consts::FRAC_1_SQRT_2)))
        }
        SpinSet::Spherical => log_chi_mgf(n, t),
    }
}

/// `ln E exp(t R)` for `R ~ chi(n)`.
///
/// The log-integrand `t r + (n-1) ln r - r^2/2 - ln Z` is concave with second
/// derivative at most -1, so it is at least 60 nats below its peak once
/// `|r - mode| >= sqrt(120)`.
fn log_chi_mgf(n: usize, t: f64) -> Result<f64> {
    let nf = n as f64;
    let log_norm = (0.5 * nf - 1.0) * 2f64.ln() + ln_gamma(0.5 * nf);
    let log_integrand = |r: f64| {
        let log_r = if n == 1 { 0.0 } else { (nf - 1.0) * r.ln() };
        t * r + log_r - 0.5 * r * r - log_norm
    };
    let mode = 0.5 * (t + (t * t + 4.0 * (nf - 1.0)).sqrt()).max(0.0);
    let half_width = (2.0 * TRUNCATION_NATS).sqrt();
    let lo = (mode - half_width).max(0.0);
    let hi = mode + half_width;
    let peak = log_integrand(mode);
    let integral = integrate(
        |r| {
            if r <= 0.0 && n > 1 {
                0.0
            } else {
                (log_integrand(r) - peak).exp()
            }
        },
        lo,
        hi,
        QUADRATURE_REL_TOL,
    )?;
    Ok(peak + integral.ln())
}

/// Single-set finite-n upper bound
/// `(sqrt p / sqrt n) (-c3 (p-1)/2 + (1/c3) ln E exp(c3 sqrt p max_{x in S} g^T x))`.
pub fn finite_n_upper_bound(p: u32, n: usize, c3: f64, set: SpinSet) -> Result<f64> {
    check_order(p, 2)?;
    if !(c3 > 0.0) {
        return Err(Error::domain(format!("c3 must be positive, got {c3}")));
    }
    let pf = p as f64;
    let log_mgf = log_mgf_max_linear(set, n, c3 * pf.sqrt())?;
    Ok(pf.sqrt() / (n as f64).sqrt() * (-0.5 * c3 * (pf - 1.0) + log_mgf / c3))
}

/// Multipartite upper bound with all `p` sets equal to `set`, parameterized
/// by the same `c3` as the exponential functional of the maximum itself:
/// `(1/sqrt n) (-c3 (p-1)/2 + (p/c3) ln E exp(c3 max g^T x))`.
///
/// Equals [`finite_n_upper_bound`] at `c3 / sqrt p`.
pub fn partite_upper_bound(p: u32, n: usize, c3: f64, set: SpinSet) -> Result<f64> {
    check_order(p, 2)?;
    if !(c3 > 0.0) {
        return Err(Error::domain(format!("c3 must be positive, got {c3}")));
    }
    let pf = p as f64;
    let log_mgf = log_mgf_max_linear(set, n, c3)?;
    Ok((-0.5 * c3 * (pf - 1.0) + pf * log_mgf / c3) / (n as f64).sqrt())
}
