use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 50;
const INITIAL_PANELS: usize = 16;

/// Single-panel Simpson rule on `[a, b]`. Exact for cubics.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
}

/// Adaptive Simpson quadrature of `f` on `[lo, hi]`.
///
/// The interval is first cut into a few equal panels so that a narrow peak
/// is not missed, then each panel is halved until the Richardson error
/// estimate falls under its share of `rel_tol * |I|`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(rel_tol > 0.0) {
        return Err(Error::domain(format!(
            "rel_tol must be positive, got {rel_tol}"
        )));
    }
    if lo == hi {
        return Ok(0.0);
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            reason: "need finite lo < hi",
        });
    }

    let h = (hi - lo) / INITIAL_PANELS as f64;
    let panels: Vec<Panel> = (0..INITIAL_PANELS)
        .map(|i| {
            let a = lo + h * i as f64;
            let b = if i + 1 == INITIAL_PANELS { hi } else { a + h };
            Panel::new(&f, a, b)
        })
        .collect();
    let coarse: f64 = panels.iter().map(|p| p.whole).sum();
    let scale = if coarse != 0.0 { coarse.abs() } else { 1.0 };
    let tol = rel_tol * scale / INITIAL_PANELS as f64;

    let mut total = 0.0;
    for p in panels {
        total += refine(&f, p, tol, MAX_DEPTH)?;
    }
    Ok(total)
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Self {
        let (fa, fb) = (f(a), f(b));
        let fm = f(0.5 * (a + b));
        Self::from_values(a, b, fa, fm, fb)
    }

    fn from_values(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> Self {
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        Self {
            a,
            b,
            fa,
            fm,
            fb,
            whole,
        }
    }
}

fn refine<F: Fn(f64) -> f64>(f: &F, p: Panel, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (p.a + p.b);
    if !(p.a < m && m < p.b) {
        // the panel can no longer be split in floating point
        return Err(Error::SubdivisionLimit { lo: p.a, hi: p.b });
    }
    let left = Panel::from_values(p.a, m, p.fa, f(0.5 * (p.a + m)), p.fm);
    let right = Panel::from_values(m, p.b, p.fm, f(0.5 * (m + p.b)), p.fb);
    let delta = left.whole + right.whole - p.whole;
    if !delta.is_finite() {
        return Err(Error::domain(format!(
            "integrand not finite on [{}, {}]",
            p.a, p.b
        )));
    }
    if delta.abs() <= 15.0 * tol {
        return Ok(left.whole + right.whole + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::SubdivisionLimit { lo: p.a, hi: p.b });
    }
    Ok(refine(f, left, 0.5 * tol, depth - 1)? + refine(f, right, 0.5 * tol, depth - 1)?)
}
