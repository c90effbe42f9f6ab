use super::{Bracket, SolverConfig};
use crate::error::{Error, Result};

/// Root of `f` inside a sign-change bracket.
///
/// Bisection safeguarding a Newton step whose slope is the secant across the
/// current bracket. Stops when `|f(x)| <= f_tol` or the bracket (or step)
/// shrinks below `x_tol`.
pub fn find_root<F>(f: F, bracket: Bracket, cfg: &SolverConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    safeguarded(|x| (f(x), None), bracket, cfg)
}

/// Same as [`find_root`] with an analytic derivative: `fdf(x) = (f(x), f'(x))`.
pub fn find_root_newton<F>(fdf: F, bracket: Bracket, cfg: &SolverConfig) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    safeguarded(
        |x| {
            let (v, d) = fdf(x);
            (v, Some(d))
        },
        bracket,
        cfg,
    )
}

fn safeguarded<F>(eval: F, bracket: Bracket, cfg: &SolverConfig) -> Result<f64>
where
    F: Fn(f64) -> (f64, Option<f64>),
{
    cfg.validate()?;
    let Bracket { lo, hi, f_lo, f_hi } = bracket;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }

    // Orient so that f(neg) < 0 < f(pos).
    let (mut neg, mut pos, mut f_neg, mut f_pos) = if f_lo < 0.0 {
        (lo, hi, f_lo, f_hi)
    } else {
        (hi, lo, f_hi, f_lo)
    };

    let mut x = 0.5 * (lo + hi);
    let mut dx_old = (hi - lo).abs();
    let mut dx = dx_old;
    let (mut fx, mut dfx) = eval(x);

    for _ in 0..cfg.max_iter {
        if !fx.is_finite() {
            return Err(Error::domain(format!("root function is not finite at {x}")));
        }
        if fx.abs() <= cfg.f_tol {
            return Ok(x);
        }
        if fx < 0.0 {
            neg = x;
            f_neg = fx;
        } else {
            pos = x;
            f_pos = fx;
        }
        if (pos - neg).abs() <= cfg.x_tol {
            return Ok(x);
        }

        let slope = dfx.unwrap_or((f_pos - f_neg) / (pos - neg));
        let newton_ok = slope != 0.0
            && slope.is_finite()
            && ((x - pos) * slope - fx) * ((x - neg) * slope - fx) < 0.0
            && (2.0 * fx).abs() <= (dx_old * slope).abs();

        dx_old = dx;
        if newton_ok {
            dx = fx / slope;
            x -= dx;
        } else {
            dx = 0.5 * (pos - neg);
            x = neg + dx;
        }
        if dx.abs() <= cfg.x_tol {
            return Ok(x);
        }
        (fx, dfx) = eval(x);
    }
    Err(Error::MaxIterations {
        iterations: cfg.max_iter,
    })
}
