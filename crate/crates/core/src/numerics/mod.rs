//! Scalar numerical kernels shared by the analytic and empirical layers.

mod minimize;
mod quadrature;
mod root;
mod special;

pub use minimize::{golden_section, minimize_scalar};
pub use quadrature::{integrate, simpson};
pub use root::{find_root, find_root_newton};
pub use special::{erf, erfc, ln_gamma, log_erfc, LogMeanExp};

use crate::error::{Error, Result};

/// Tolerances and iteration cap for the scalar solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Absolute tolerance in the argument.
    pub x_tol: f64,
    /// Absolute tolerance in the function value.
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            x_tol: 1e-12,
            f_tol: 1e-12,
            max_iter: 200,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_tol > 0.0) || !(self.f_tol >= 0.0) || self.max_iter == 0 {
            return Err(Error::domain(format!(
                "invalid solver configuration {self:?}"
            )));
        }
        Ok(())
    }
}

/// An interval together with the function values at its ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Evaluates `f` at both ends and checks that the interval brackets a
    /// sign change.
    pub fn new<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<Self> {
        Self::from_values(lo, hi, f(lo), f(hi))
    }

    pub fn from_values(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidBracket {
                lo,
                hi,
                reason: "lo must be < hi",
            });
        }
        if !f_lo.is_finite() || !f_hi.is_finite() {
            return Err(Error::InvalidBracket {
                lo,
                hi,
                reason: "non-finite end value",
            });
        }
        if f_lo * f_hi > 0.0 {
            return Err(Error::InvalidBracket {
                lo,
                hi,
                reason: "no sign change",
            });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}
