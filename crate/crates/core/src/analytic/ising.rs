//! Ising spin set: erfc-based rate function and the second-level GSE bound.
//!
//! With `h(c) = sqrt(2p/pi) e^{-c^2 p/2} / erfc(-c sqrt(p/2))`, the Chernoff
//! exponent `phi_3(c) = c^2/2 + ln erfc(-c sqrt(p/2)) - c u` has derivative
//! `c + h(c) - u`. The map `c + h(c)` is convex with a single interior
//! minimum (the fold), so for `u` above the fold value there are at most two
//! stationary points and the rate function uses the right one, the local
//! minimum. All erfc factors are handled as `ln erfc`.

use std::f64::consts::PI;

use super::{
    check_agreement, check_order, GseValue, LiftingLevel, RatePoint, BRACKET_EPS, BRACKET_SPAN,
    BRACKET_STEP, C3_FLOOR, DUAL_ROUTE_TOL,
};
use crate::error::{Error, Result};
use crate::numerics::{find_root_newton, log_erfc, minimize_scalar, Bracket, SolverConfig};
use crate::SpinSet;

/// Agreement required between the two closed forms of the rate.
pub const TWO_FORM_TOL: f64 = 1e-10;

fn erfc_arg(p: u32, c: f64) -> f64 {
    -c * (p as f64 / 2.0).sqrt()
}

/// `ln h(c)`.
fn ln_mills(p: u32, c: f64) -> f64 {
    let pf = p as f64;
    0.5 * (2.0 * pf / PI).ln() - 0.5 * c * c * pf - log_erfc(erfc_arg(p, c))
}

/// `phi_3(c) = c^2/2 + ln erfc(-c sqrt(p/2)) - c u`.
pub fn ising_chernoff_exponent(p: u32, c3: f64, u: f64) -> f64 {
    0.5 * c3 * c3 + log_erfc(erfc_arg(p, c3)) - c3 * u
}

/// Stationarity condition `1/erfc(-c sqrt(p/2)) = e^{c^2 p/2} (u - c) sqrt(pi/(2p))`
/// written as `ln(rhs) - ln(lhs)`. Defined for `c < u`.
pub fn ising_stationarity_log_residual(p: u32, u: f64, c3: f64) -> f64 {
    let pf = p as f64;
    (u - c3).ln() + 0.5 * c3 * c3 * pf + 0.5 * (PI / (2.0 * pf)).ln() + log_erfc(erfc_arg(p, c3))
}

/// Where the rate function starts: the minimum of `c + h(c)` over `c >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingRateDomain {
    pub p: u32,
    /// Location of the fold.
    pub c_fold: f64,
    /// Smallest `u` with a stationary local minimum.
    pub u_fold: f64,
}

pub fn ising_rate_domain(p: u32) -> Result<IsingRateDomain> {
    check_order(p, 2)?;
    let (c_fold, u_fold) =
        minimize_scalar(|c| c + ln_mills(p, c).exp(), 0.0, &SolverConfig::default())?;
    Ok(IsingRateDomain { p, c_fold, u_fold })
}

/// Optimizing Chernoff parameter: the rightmost root of the stationarity
/// condition, solved as `c + h(c) = u` on `[c_fold, u]` where the left side
/// is increasing.
pub fn ising_c3_hat(p: u32, u: f64) -> Result<f64> {
    let dom = ising_rate_domain(p)?;
    c3_hat_in(p, u, &dom)
}

fn c3_hat_in(p: u32, u: f64, dom: &IsingRateDomain) -> Result<f64> {
    if !(u > dom.u_fold) {
        return Err(Error::domain(format!(
            "u = {u} is below the Ising stationarity boundary {} for p = {p}",
            dom.u_fold
        )));
    }
    let pf = p as f64;
    let h = |c: f64| ln_mills(p, c).exp();
    let (lo, hi) = (dom.c_fold, u);
    let bracket = Bracket::from_values(lo, hi, dom.u_fold - u, h(u))?;
    let c = find_root_newton(
        |c| {
            let hc = h(c);
            // h' = -h (c p + h)
            (c + hc - u, 1.0 - hc * (c * pf + hc))
        },
        bracket,
        // u - c can be tiny, so resolve c to a few ulps
        &SolverConfig {
            x_tol: 4.0 * f64::EPSILON * u,
            f_tol: 0.0,
            ..SolverConfig::default()
        },
    )?;
    if !(u - c > 0.0) {
        return Err(Error::domain(format!(
            "u = {u} is too far in the tail to resolve the stationary point for p = {p}"
        )));
    }
    Ok(c)
}

/// `phi_B(p, u)` evaluated by both closed forms, which must agree.
pub fn ising_rate(p: u32, u: f64) -> Result<RatePoint> {
    let dom = ising_rate_domain(p)?;
    rate_in(p, u, &dom)
}

fn rate_in(p: u32, u: f64, dom: &IsingRateDomain) -> Result<RatePoint> {
    let c = c3_hat_in(p, u, dom)?;
    let pf = p as f64;
    let stationary_form =
        -0.5 * c * c * (pf - 1.0) - (u - c).ln() - c * u - 0.5 * (PI / (2.0 * pf)).ln();
    let erfc_form = ising_chernoff_exponent(p, c, u);
    // ln(u - c) carries rounding of order eps * u / (u - c) deep in the tail
    let conditioning = 16.0 * f64::EPSILON * u / (u - c);
    check_agreement(
        &format!("Ising rate closed forms (p = {p}, u = {u})"),
        stationary_form,
        erfc_form,
        TWO_FORM_TOL * stationary_form.abs().max(1.0) + conditioning,
    )?;
    // the erfc form is flat in c at the root, so it is the better-conditioned value
    Ok(RatePoint {
        p,
        u,
        phi: erfc_form,
        c3_hat: c,
    })
}

/// `c/2 + ln erfc(-c sqrt(p/2)) / c`, minimized over `c > 0` by `u_gs`.
pub fn ising_gse_objective(p: u32, c3: f64) -> Result<f64> {
    check_order(p, 2)?;
    if !(c3 > 0.0) {
        return Err(Error::domain(format!("c3 must be positive, got {c3}")));
    }
    Ok(0.5 * c3 + log_erfc(erfc_arg(p, c3)) / c3)
}

/// Second-level Ising GSE upper bound.
pub fn ising_gse_bound(p: u32) -> Result<GseValue> {
    let cfg = SolverConfig::default();
    let objective = |c: f64| ising_gse_objective(p, c).unwrap_or(f64::NAN);
    let (argmin, min_value) = minimize_scalar(objective, C3_FLOOR, &cfg)?;

    let dom = ising_rate_domain(p)?;
    let phi = |u: f64| rate_in(p, u, &dom).map(|r| r.phi).unwrap_or(f64::NAN);
    let lo = dom.u_fold + BRACKET_EPS;
    // far tails lose the stationary point to underflow, so grow outward
    let mut step = BRACKET_STEP;
    while phi(lo + step) > 0.0 && step < BRACKET_SPAN {
        step *= 2.0;
    }
    let bracket = Bracket::new(phi, lo, lo + step)?;
    let root = find_root_newton(
        |u| match rate_in(p, u, &dom) {
            Ok(r) => (r.phi, -r.c3_hat),
            Err(_) => (f64::NAN, f64::NAN),
        },
        bracket,
        &cfg,
    )?;
    check_agreement(
        &format!("Ising GSE bound (p = {p}): root of rate vs min over c3"),
        root,
        min_value,
        DUAL_ROUTE_TOL,
    )?;
    let c3_hat = rate_in(p, root, &dom).map(|r| r.c3_hat).unwrap_or(argmin);
    Ok(GseValue::new(
        p,
        SpinSet::Ising,
        LiftingLevel::Second,
        root,
        c3_hat,
        false,
    ))
}

/// `c3 -> 0` limit: `u_gs = sqrt(p) sqrt(2/pi)`, multipartite value `p sqrt(2/pi)`.
pub fn ising_first_level(p: u32) -> Result<GseValue> {
    check_order(p, 2)?;
    let pf = p as f64;
    let u = pf.sqrt() * (2.0 / PI).sqrt();
    Ok(GseValue::new(
        p,
        SpinSet::Ising,
        LiftingLevel::First,
        u,
        0.0,
        false,
    ))
}
