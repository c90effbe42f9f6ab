use super::SolverConfig;
use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const GROWTH_CAP: f64 = (1u64 << 40) as f64;

/// Minimizes an (assumed unimodal) `f` on `[lo, ∞)`.
///
/// The bracket starts as `[lo, lo + 1]` and its right end is pushed out by
/// doubling its distance from `lo` until `f` turns upward, then golden-section
/// search narrows it to `x_tol`. `f` must be finite at `lo`. If `f` already
/// increases over the first unit the minimum is searched in `[lo, lo + 1]`
/// and may sit at `lo` itself.
///
/// Returns `(argmin, min)`.
pub fn minimize_scalar<F>(f: F, lo: f64, cfg: &SolverConfig) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    let f_lo = f(lo);
    if !f_lo.is_finite() {
        return Err(Error::domain(format!(
            "objective is not finite at the left end {lo}"
        )));
    }
    let mut width = 1.0;
    let mut f_mid = f(lo + width);
    if !(f_mid < f_lo) {
        return golden_section(&f, lo, lo + width, cfg);
    }
    loop {
        width *= 2.0;
        if width > GROWTH_CAP {
            return Err(Error::NoInteriorMinimum { width });
        }
        let right = lo + width;
        let f_right = f(right);
        if f_right > f_mid || !f_right.is_finite() {
            let left = if width > 2.0 { lo + 0.25 * width } else { lo };
            return golden_section(&f, left, right, cfg);
        }
        f_mid = f_right;
    }
}

/// Golden-section search on `[a, b]`; returns `(argmin, min)`.
pub fn golden_section<F>(f: F, a: f64, b: f64, cfg: &SolverConfig) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) {
        return Err(Error::InvalidBracket {
            lo: a,
            hi: b,
            reason: "lo must be < hi",
        });
    }
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..cfg.max_iter {
        if (b - a).abs() <= cfg.x_tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if (b - a).abs() > cfg.x_tol {
        return Err(Error::MaxIterations {
            iterations: cfg.max_iter,
        });
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::log_erfc;

    #[test]
    fn quadratic() {
        let (x, v) = minimize_scalar(|x| (x - 3.0).powi(2), 0.0, &SolverConfig::default()).unwrap();
        assert!((x - 3.0).abs() <= 1e-10, "{x}");
        assert!(v <= 1e-20);
    }

    #[test]
    fn kink() {
        let (x, v) =
            minimize_scalar(|x: f64| x.abs() + 1.0, -5.0, &SolverConfig::default()).unwrap();
        assert!(x.abs() <= 1e-10, "{x}");
        assert!((v - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn ising_objective_p2_matches_table_value() {
        let f = |c: f64| c / 2.0 + log_erfc(-c) / c;
        let (_, v) = minimize_scalar(f, 1e-8, &SolverConfig::default()).unwrap();
        assert!((v - 1.5377 / 2f64.sqrt()).abs() <= 5e-5, "{v}");
    }

    #[test]
    fn boundary_minimum() {
        let (x, v) = minimize_scalar(|x| x, 0.0, &SolverConfig::default()).unwrap();
        assert!(x <= 1e-12 && v <= 1e-12);
    }

    #[test]
    fn unbounded_decrease_is_refused() {
        let got = minimize_scalar(|x| -x, 0.0, &SolverConfig::default());
        assert!(matches!(got, Err(Error::NoInteriorMinimum { .. })));
    }
}
