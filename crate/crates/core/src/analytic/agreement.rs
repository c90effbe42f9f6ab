//! Agreement of the spherical GSE with the TAP fixed-point characterization
//! and with the critical-point upper bound.

use super::{check_agreement, check_order, spherical_gamma_hat, spherical_gse, spherical_rate};
use crate::error::{Error, Result};
use crate::numerics::{find_root, Bracket, SolverConfig};

const FIXED_POINT_TOL: f64 = 1e-10;
const ROUTE_TOL: f64 = 1e-9;

/// Solution of the TAP fixed point for the pure spherical model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubagSolution {
    pub p: u32,
    /// Overlap `q_s = 1 / (1 + z_hat)`.
    pub q_s: f64,
    /// Plus-branch root of the quadratic in `z = 1/q_s - 1`.
    pub z_hat: f64,
    /// `sqrt(-ln(1 - q_s) (1 + p (1/q_s - 1)))`.
    pub e_star: f64,
    /// Overlap found by solving the fixed point directly, without the GSE.
    pub q_direct: f64,
}

/// `q^2 / (p (1 - q)) - (-ln(1 - q)) / (1 + p (1/q - 1))`.
pub fn subag_fixed_point_residual(p: u32, q: f64) -> f64 {
    let pf = p as f64;
    q * q / (pf * (1.0 - q)) + (-q).ln_1p() / (1.0 + pf * (1.0 / q - 1.0))
}

/// Energy attached to an overlap `q`.
pub fn subag_energy(p: u32, q: f64) -> f64 {
    let pf = p as f64;
    (-(-q).ln_1p() * (1.0 + pf * (1.0 / q - 1.0))).sqrt()
}

/// Plus-branch root of `z^2 (E^2 - p) p + z (E^2 - 2) p - 1 = 0`.
pub fn subag_z_hat(p: u32, e: f64) -> Result<f64> {
    check_order(p, 3)?;
    let pf = p as f64;
    let e2 = e * e;
    let threshold = 4.0 * (pf - 1.0) / pf;
    if e2 < threshold {
        return Err(Error::domain(format!(
            "E = {e} violates E^2 >= 4(p-1)/p for p = {p}"
        )));
    }
    let denom = 2.0 * (e2 - pf);
    if denom.abs() < 1e-300 {
        return Err(Error::domain(format!(
            "E^2 = p makes the z quadratic degenerate (p = {p})"
        )));
    }
    Ok((-(e2 - 2.0) + e * (e2 - threshold).sqrt()) / denom)
}

/// Solves the fixed point two ways: from the quadratic in `z` at
/// `E = u_gs` (plus branch) and directly by bracketing over `q` in (0, 1).
pub fn subag_solution(p: u32) -> Result<SubagSolution> {
    check_order(p, 3)?;
    let u = spherical_gse(p)?.u_gs;
    let z_hat = subag_z_hat(p, u)?;
    if !(z_hat > 0.0) {
        return Err(Error::Consistency {
            what: format!("plus-branch z_hat must be positive (p = {p})"),
            diff: z_hat,
            tol: 0.0,
        });
    }
    let q_s = 1.0 / (1.0 + z_hat);
    let residual = subag_fixed_point_residual(p, q_s).abs();
    if !(residual <= FIXED_POINT_TOL) {
        return Err(Error::Consistency {
            what: format!("TAP fixed-point residual at the GSE (p = {p})"),
            diff: residual,
            tol: FIXED_POINT_TOL,
        });
    }
    let q_direct = solve_fixed_point(p)?;
    check_agreement(
        &format!("TAP overlap routes (p = {p})"),
        q_s,
        q_direct,
        ROUTE_TOL,
    )?;
    Ok(SubagSolution {
        p,
        q_s,
        z_hat,
        e_star: subag_energy(p, q_s),
        q_direct,
    })
}

/// Nontrivial root of the fixed point in (0, 1).
///
/// The residual behaves like `q^3 (1/p - 1/2) / p` near 0 and diverges to
/// `+inf` at 1, so it is scanned on a grid uniform in `-log10(1 - q)` and the
/// unique sign change is refined.
fn solve_fixed_point(p: u32) -> Result<f64> {
    const GRID: usize = 400;
    let f = |q: f64| subag_fixed_point_residual(p, q);
    let at = |k: usize| 1.0 - 10f64.powf(-(0.01 + 11.99 * k as f64 / GRID as f64));
    let mut brackets = Vec::new();
    let mut prev = (at(0), f(at(0)));
    for k in 1..=GRID {
        let q = at(k);
        let v = f(q);
        if prev.1 * v <= 0.0 {
            brackets.push((prev.0, q, prev.1, v));
        }
        prev = (q, v);
    }
    match brackets.as_slice() {
        [(lo, hi, f_lo, f_hi)] => {
            let cfg = SolverConfig {
                x_tol: 1e-15,
                f_tol: 0.0,
                max_iter: 400,
            };
            find_root(f, Bracket::from_values(*lo, *hi, *f_lo, *f_hi)?, &cfg)
        }
        other => Err(Error::Consistency {
            what: format!("expected one TAP fixed point in (0, 1) for p = {p}"),
            diff: other.len() as f64,
            tol: 1.0,
        }),
    }
}

/// Left side of the rearranged critical-point equation for the upper bound
/// `E_0`; it vanishes at the bound.
pub fn darmc_residual(p: u32, e0: f64) -> Result<f64> {
    check_order(p, 2)?;
    let pf = p as f64;
    let k = 4.0 * (pf - 1.0) / pf;
    let e = e0.abs();
    if e * (pf / (pf - 1.0)).sqrt() < 2.0 * (1.0 - 4.0 * f64::EPSILON) {
        return Err(Error::domain(format!(
            "E0 = {e0} violates E0 sqrt(p/(p-1)) >= 2 for p = {p}"
        )));
    }
    let root_k = 2.0 * ((pf - 1.0) / pf).sqrt();
    let s = ((e - root_k) * (e + root_k)).max(0.0).sqrt();
    Ok(
        0.5 * (pf - 1.0).ln() - e * e * (pf - 2.0) / (4.0 * (pf - 1.0)) - e / k * s
            + ((s + e) / root_k).ln(),
    )
}

/// Residuals of `1/(4 gamma^2) = z/(1+z)` and `c3 u = (1 + p z)/(p z (1 + z))`
/// at `u = u_gs`.
pub fn agreement_identities(p: u32) -> Result<(f64, f64)> {
    check_order(p, 3)?;
    let u = spherical_gse(p)?.u_gs;
    let c3 = spherical_rate(p, u)?.c3_hat;
    let gamma = spherical_gamma_hat(p, c3)?;
    let z = subag_z_hat(p, u)?;
    let pf = p as f64;
    let first = (1.0 / (4.0 * gamma * gamma) - z / (1.0 + z)).abs();
    let second = (c3 * u - (1.0 + pf * z) / (pf * z * (1.0 + z))).abs();
    Ok((first, second))
}
