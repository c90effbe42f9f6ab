//! Spherical spin set: rate function, stationary points and GSE.

use super::{
    check_agreement, check_order, GseValue, LiftingLevel, RatePoint, BRACKET_EPS, BRACKET_SPAN,
    C3_FLOOR, DUAL_ROUTE_TOL,
};
use crate::error::{Error, Result};
use crate::numerics::{find_root_newton, minimize_scalar, Bracket, SolverConfig};
use crate::SpinSet;

/// Relative slack on the `c3` discriminant before it counts as negative.
const DISCRIMINANT_SLACK: f64 = 1e-14;

/// Threshold energy `2 sqrt((p-1)/p)` below which the rate formula is undefined.
pub fn u_star(p: u32) -> Result<f64> {
    check_order(p, 2)?;
    let p = p as f64;
    Ok(2.0 * ((p - 1.0) / p).sqrt())
}

/// Larger root of `c^2 (1-p) + u (p-2) c + u^2 - p = 0`.
///
/// This is the branch that minimizes the Chernoff exponent. The other root
/// is negative once `u^2 > p` and a local maximum below that.
pub fn spherical_c3_hat(p: u32, u: f64) -> Result<f64> {
    check_order(p, 2)?;
    let pf = p as f64;
    let us = 2.0 * ((pf - 1.0) / pf).sqrt();
    // p^2 (u - u_*)(u + u_*), exact zero at the threshold
    let disc = pf * pf * (u - us) * (u + us);
    if disc < -DISCRIMINANT_SLACK * (pf * u).powi(2) || !disc.is_finite() {
        return Err(Error::domain(format!(
            "u = {u} is below u_* for p = {p} (discriminant {disc:e})"
        )));
    }
    Ok(((pf - 2.0) * u + disc.max(0.0).sqrt()) / (2.0 * (pf - 1.0)))
}

/// Inner optimizer `(c3 sqrt p + sqrt(c3^2 p + 4)) / 4`.
pub fn spherical_gamma_hat(p: u32, c3: f64) -> Result<f64> {
    check_order(p, 2)?;
    if !(c3 >= 0.0) {
        return Err(Error::domain(format!("c3 must be nonnegative, got {c3}")));
    }
    let a = c3 * (p as f64).sqrt();
    Ok((a + (a * a + 4.0).sqrt()) / 4.0)
}

/// Stationary point of the spherical Chernoff exponent at energy `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalStationary {
    pub p: u32,
    pub u: f64,
    pub c3_hat: f64,
    pub gamma_hat: f64,
}

impl SphericalStationary {
    /// `|c^2 (1-p) + u (p-2) c + u^2 - p|`
    pub fn quadratic_residual(&self) -> f64 {
        let p = self.p as f64;
        let c = self.c3_hat;
        (c * c * (1.0 - p) + self.u * (p - 2.0) * c + self.u * self.u - p).abs()
    }

    /// `|2 gamma (2 gamma - c sqrt p) - 1|`
    pub fn gamma_residual(&self) -> f64 {
        let g = self.gamma_hat;
        (2.0 * g * (2.0 * g - self.c3_hat * (self.p as f64).sqrt()) - 1.0).abs()
    }
}

pub fn spherical_stationary(p: u32, u: f64) -> Result<SphericalStationary> {
    let c3_hat = spherical_c3_hat(p, u)?;
    let gamma_hat = spherical_gamma_hat(p, c3_hat)?;
    Ok(SphericalStationary {
        p,
        u,
        c3_hat,
        gamma_hat,
    })
}

/// Chernoff exponent before optimizing over `c3`:
/// `-c^2 (p-1)/2 + gamma c sqrt p - (1/2) ln(1 - c sqrt p / (2 gamma)) - c u`
/// with `gamma` at its inner optimum. The rate function is its minimum over
/// `c > 0`.
pub fn spherical_chernoff_exponent(p: u32, c3: f64, u: f64) -> Result<f64> {
    let g = spherical_gamma_hat(p, c3)?;
    let sp = (p as f64).sqrt();
    let pf = p as f64;
    Ok(-0.5 * c3 * c3 * (pf - 1.0) + g * c3 * sp - 0.5 * (1.0 - c3 * sp / (2.0 * g)).ln() - c3 * u)
}

/// `phi_S(p, u)` together with its optimizing `c3`.
pub fn spherical_rate(p: u32, u: f64) -> Result<RatePoint> {
    let us = u_star(p)?;
    if !(u >= us) {
        // Tolerate rounding right at the threshold.
        if !(u >= us * (1.0 - 4.0 * f64::EPSILON)) {
            return Err(Error::domain(format!(
                "u = {u} is below u_* = {us} for p = {p}"
            )));
        }
    }
    let pf = p as f64;
    let s = (u * u - us * us).max(0.0).sqrt();
    let phi = 0.5 * (pf - 1.0).ln() - (pf - 2.0) * u * u / (4.0 * (pf - 1.0)) - u * s / (us * us)
        + ((u + s) / us).ln();
    let c3_hat = if s == 0.0 && p == 2 {
        0.0
    } else {
        spherical_c3_hat(p, u.max(us))?
    };
    Ok(RatePoint { p, u, phi, c3_hat })
}

/// Objective whose minimum over `c3 > 0` is `u_gs`:
/// `-c (p-1)/2 + gamma sqrt p - ln(1 - c sqrt p/(2 gamma)) / (2c)`.
///
/// Uses `1 - c sqrt p / (2 gamma) = 1/(4 gamma^2)` so that the log term is
/// `ln(2 gamma)/c`, evaluated with `ln_1p` to stay accurate as `c -> 0`.
pub fn spherical_gse_objective(p: u32, c3: f64) -> Result<f64> {
    check_order(p, 2)?;
    if !(c3 > 0.0) {
        return Err(Error::domain(format!("c3 must be positive, got {c3}")));
    }
    let pf = p as f64;
    let a = c3 * pf.sqrt();
    let g = spherical_gamma_hat(p, c3)?;
    // 2 gamma - 1 = (a + sqrt(a^2 + 4) - 2) / 2, with sqrt(a^2+4) - 2 rewritten
    let two_gamma_minus_one = 0.5 * (a + a * a / ((a * a + 4.0).sqrt() + 2.0));
    Ok(-0.5 * c3 * (pf - 1.0) + g * pf.sqrt() + two_gamma_minus_one.ln_1p() / c3)
}

/// Second-level (exact) spherical GSE.
pub fn spherical_gse(p: u32) -> Result<GseValue> {
    let us = u_star(p)?;
    let cfg = SolverConfig::default();

    let phi = |u: f64| spherical_rate(p, u).map(|r| r.phi).unwrap_or(f64::NAN);
    let root = if phi(us) <= 0.0 {
        us
    } else {
        let lo = us + BRACKET_EPS;
        let hi = us + BRACKET_SPAN;
        let bracket = Bracket::new(phi, lo, hi)?;
        find_root_newton(
            |u| {
                let r = spherical_rate(p, u).expect("u stays inside the bracket");
                (r.phi, -r.c3_hat)
            },
            bracket,
            &cfg,
        )?
    };

    let objective = |c: f64| spherical_gse_objective(p, c).unwrap_or(f64::NAN);
    let (_, min_value) = minimize_scalar(objective, C3_FLOOR, &cfg)?;
    check_agreement(
        &format!("spherical GSE (p = {p}): root of rate vs min over c3"),
        root,
        min_value,
        DUAL_ROUTE_TOL,
    )?;

    let c3_hat = spherical_rate(p, root)?.c3_hat;
    Ok(GseValue::new(
        p,
        SpinSet::Spherical,
        LiftingLevel::Second,
        root,
        c3_hat,
        true,
    ))
}

/// `c3 -> 0` limit: `u_gs = sqrt p`, multipartite value `p`.
pub fn spherical_first_level(p: u32) -> Result<GseValue> {
    check_order(p, 2)?;
    let mut g = GseValue::new(
        p,
        SpinSet::Spherical,
        LiftingLevel::First,
        (p as f64).sqrt(),
        0.0,
        false,
    );
    // sqrt(p)^2 can miss p by an ulp
    g.xi_multipartite = p as f64;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::golden_section;

    #[test]
    fn u_star_values() {
        assert!((u_star(2).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((u_star(4).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        let big = u_star(1_000_000).unwrap();
        assert!(big > 1.999998 && big < 2.0);
        assert!(u_star(1).is_err());
    }

    #[test]
    fn rate_at_threshold() {
        let r = spherical_rate(2, u_star(2).unwrap()).unwrap();
        assert_eq!(r.phi, 0.0);
        assert_eq!(r.c3_hat, 0.0);

        // every square root vanishes, leaving ln(2)/2 - 1/3
        let r = spherical_rate(3, u_star(3).unwrap()).unwrap();
        let want = 0.5 * 2f64.ln() - 1.0 / 3.0;
        assert!((r.phi - want).abs() < 1e-15);
        assert!((r.phi - 0.013_240_256_946_639_32).abs() < 1e-15);
    }

    #[test]
    fn rate_matches_gamma_form_at_stationary_point() {
        // phi_2(c_hat) = -c_hat u / 2 + ln(2 gamma_hat)
        for p in 2..=9 {
            let us = u_star(p).unwrap();
            for k in 0..20 {
                let u = us + 0.15 * k as f64;
                let st = spherical_stationary(p, u).unwrap();
                let alt = -0.5 * st.c3_hat * u + (2.0 * st.gamma_hat).ln();
                let r = spherical_rate(p, u).unwrap();
                assert!(
                    (r.phi - alt).abs() < 1e-12,
                    "p={p} u={u}: {} vs {alt}",
                    r.phi
                );
                let full = spherical_chernoff_exponent(p, st.c3_hat, u).unwrap();
                assert!((r.phi - full).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rate_is_min_of_chernoff_exponent() {
        // independent route: numerically minimize phi_2 over c3
        for p in [3u32, 5, 8] {
            let us = u_star(p).unwrap();
            for du in [0.05, 0.3, 1.0, 2.5] {
                let u = us + du;
                let (c, v) = golden_section(
                    |c| spherical_chernoff_exponent(p, c, u).unwrap(),
                    0.0,
                    20.0,
                    &SolverConfig::default(),
                )
                .unwrap();
                let r = spherical_rate(p, u).unwrap();
                assert!((r.phi - v).abs() < 1e-10, "p={p} u={u}");
                assert!((r.c3_hat - c).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn rejected_branch_is_negative_or_a_local_maximum() {
        for p in 3..=12u32 {
            let pf = p as f64;
            for du in [0.1, 0.7, 2.0] {
                let u = u_star(p).unwrap() + du;
                let disc = (pf * u).powi(2) - 4.0 * (pf - 1.0) * pf;
                let other = ((pf - 2.0) * u - disc.sqrt()) / (2.0 * (pf - 1.0));
                let chosen = spherical_c3_hat(p, u).unwrap();
                assert!(chosen > 0.0 && chosen > other);
                if u * u > pf {
                    assert!(other < 0.0, "p={p} u={u}");
                } else if other > 1e-3 {
                    let e = |c| spherical_chernoff_exponent(p, c, u).unwrap();
                    assert!(e(other) > e(chosen));
                    assert!(e(other) >= e(other - 1e-4) && e(other) >= e(other + 1e-4));
                }
            }
        }
    }

    #[test]
    fn below_threshold_is_a_domain_error() {
        let us = u_star(3).unwrap();
        assert!(matches!(
            spherical_rate(3, us - 1e-6),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            spherical_c3_hat(3, us - 1e-3),
            Err(Error::Domain(_))
        ));
        assert!(spherical_gamma_hat(3, -1.0).is_err());
    }

    #[test]
    fn c3_hat_examples() {
        assert_eq!(spherical_c3_hat(2, 2f64.sqrt()).unwrap(), 0.0);
        let c = spherical_c3_hat(3, 2.0).unwrap();
        assert!((c * c * -2.0 + 2.0 * c + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn gamma_hat_examples() {
        assert_eq!(spherical_gamma_hat(2, 0.0).unwrap(), 0.5);
        let g = spherical_gamma_hat(3, 1.0).unwrap();
        assert!((g - (3f64.sqrt() + 7f64.sqrt()) / 4.0).abs() < 1e-15);
        assert!((2.0 * g * (2.0 * g - 3f64.sqrt()) - 1.0).abs() < 1e-12);
        assert!(g > 3f64.sqrt() / 2.0);
    }

    #[test]
    fn rate_derivative_is_minus_c3_hat() {
        for p in [2u32, 3, 6] {
            let u = u_star(p).unwrap() + 0.8;
            let h = 1e-6;
            let d = (spherical_rate(p, u + h).unwrap().phi - spherical_rate(p, u - h).unwrap().phi)
                / (2.0 * h);
            let c = spherical_rate(p, u).unwrap().c3_hat;
            assert!((d + c).abs() < 1e-7);
        }
    }

    #[test]
    fn table_values() {
        let want = [2.0000, 2.8700, 3.5882, 4.2217, 4.7977, 5.3311];
        for (p, w) in (2..=7).zip(want) {
            let g = spherical_gse(p).unwrap();
            assert!(
                (g.xi_multipartite - w).abs() <= 5e-5,
                "p={p}: {}",
                g.xi_multipartite
            );
            assert!(g.exact);
            assert_eq!(g.level, LiftingLevel::Second);
            assert!((spherical_first_level(p).unwrap().xi_multipartite - p as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn rate_vanishes_at_gse() {
        let g = spherical_gse(3).unwrap();
        assert!(spherical_rate(3, g.u_gs).unwrap().phi.abs() <= 1e-9);
        assert!((g.u_gs - 2.8700 / 3f64.sqrt()).abs() <= 5e-5);
    }
}
