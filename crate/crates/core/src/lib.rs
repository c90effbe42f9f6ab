//! Ground-state energies of multipartite pure p-spin models.
//!
//! The crate is split into three layers:
//!
//! - [`numerics`]: scalar kernels (bracketed root finding, derivative-free
//!   minimization, adaptive Simpson quadrature, a log-space `erfc`).
//! - [`analytic`]: closed-form rate functions for the spherical and Ising
//!   spin sets, the partially lifted GSE values and bounds, and the
//!   agreement quantities against the TAP / critical-point characterizations.
//! - [`empirical`]: seeded Gaussian tensors, exact and heuristic maximization
//!   of multilinear forms over spin sets, and Monte Carlo estimators for the
//!   finite-n exponential functionals.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod empirical;
mod error;
pub mod numerics;
mod spin_set;

pub use analytic::{GseValue, LiftingLevel, RatePoint};
pub use empirical::{MaximizerResult, McEstimate, TensorInstance};
pub use error::{Error, Result};
pub use spin_set::SpinSet;
