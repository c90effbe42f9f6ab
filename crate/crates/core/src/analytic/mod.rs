//! Closed-form rate functions and GSE values/bounds.
//!
//! Everything here is a pure function of its arguments. Each GSE value is
//! obtained along two routes (smallest zero of the rate function, and the
//! minimum over the Chernoff parameter `c3` of the lifted objective) and the
//! routes are required to agree.

mod agreement;
mod finite_n;
mod ising;
mod spherical;

use serde::{Deserialize, Serialize};

pub use agreement::{
    agreement_identities, darmc_residual, subag_energy, subag_fixed_point_residual, subag_solution,
    subag_z_hat, SubagSolution,
};
pub use finite_n::{finite_n_upper_bound, log_mgf_max_linear, partite_upper_bound};
pub use ising::{
    ising_c3_hat, ising_chernoff_exponent, ising_first_level, ising_gse_bound, ising_gse_objective,
    ising_rate, ising_rate_domain, ising_stationarity_log_residual, IsingRateDomain, TWO_FORM_TOL,
};
pub use spherical::{
    spherical_c3_hat, spherical_chernoff_exponent, spherical_first_level, spherical_gamma_hat,
    spherical_gse, spherical_gse_objective, spherical_rate, spherical_stationary, u_star,
    SphericalStationary,
};

use crate::error::{Error, Result};
use crate::SpinSet;

/// Agreement required between the two GSE routes.
pub const DUAL_ROUTE_TOL: f64 = 1e-8;

/// Left end of the `c3` search; the objectives are not defined at 0.
pub(crate) const C3_FLOOR: f64 = 1e-8;

/// Offset from `u_*` (or the Ising fold) where root brackets start.
pub(crate) const BRACKET_EPS: f64 = 1e-12;

/// Width of the `u` bracket above its left end.
pub(crate) const BRACKET_SPAN: f64 = 10.0;
/// First outward step when a bracket is grown by doubling.
pub(crate) const BRACKET_STEP: f64 = 0.125;

/// `c3 -> 0` limit (first level) or optimized `c3` (second level).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftingLevel {
    First,
    Second,
}

impl LiftingLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            LiftingLevel::First => "first",
            LiftingLevel::Second => "second",
        }
    }
}

/// One sample `(p, u, phi(p, u), c3_hat(p, u))` of a rate function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub p: u32,
    pub u: f64,
    pub phi: f64,
    pub c3_hat: f64,
}

/// Per-partite GSE `u_gs` and the multipartite value `√p · u_gs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GseValue {
    pub p: u32,
    pub set: SpinSet,
    pub level: LiftingLevel,
    pub u_gs: f64,
    pub xi_multipartite: f64,
    pub c3_hat: f64,
    /// True when the value is the GSE itself rather than an upper bound.
    pub exact: bool,
}

impl GseValue {
    pub(crate) fn new(
        p: u32,
        set: SpinSet,
        level: LiftingLevel,
        u_gs: f64,
        c3_hat: f64,
        exact: bool,
    ) -> Self {
        Self {
            p,
            set,
            level,
            u_gs,
            xi_multipartite: (p as f64).sqrt() * u_gs,
            c3_hat,
            exact,
        }
    }
}

/// Second-level value for either spin set.
pub fn gse(set: SpinSet, p: u32) -> Result<GseValue> {
    match set {
        SpinSet::Spherical => spherical_gse(p),
        SpinSet::Ising => ising_gse_bound(p),
    }
}

/// First-level (`c3 -> 0`) value for either spin set.
pub fn first_level(set: SpinSet, p: u32) -> Result<GseValue> {
    match set {
        SpinSet::Spherical => spherical_first_level(p),
        SpinSet::Ising => ising_first_level(p),
    }
}

/// Rate function of either spin set.
pub fn rate(set: SpinSet, p: u32, u: f64) -> Result<RatePoint> {
    match set {
        SpinSet::Spherical => spherical_rate(p, u),
        SpinSet::Ising => ising_rate(p, u),
    }
}

/// Smallest `u` at which [`rate`] is defined.
pub fn rate_domain_start(set: SpinSet, p: u32) -> Result<f64> {
    match set {
        SpinSet::Spherical => u_star(p),
        SpinSet::Ising => ising_rate_domain(p).map(|d| d.u_fold),
    }
}

pub(crate) fn check_order(p: u32, min: u32) -> Result<()> {
    if p < min {
        return Err(Error::domain(format!(
            "spin order p = {p} must be at least {min}"
        )));
    }
    Ok(())
}

pub(crate) fn check_agreement(what: &str, a: f64, b: f64, tol: f64) -> Result<()> {
    let diff = (a - b).abs();
    if !(diff <= tol) {
        return Err(Error::Consistency {
            what: what.to_string(),
            diff,
            tol,
        });
    }
    Ok(())
}
