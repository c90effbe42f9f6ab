//! Finite-n randomness: seeded Gaussian tensors, maximization of multilinear
//! forms over spin sets, and Monte Carlo estimators.

mod estimate;
mod maximize;
mod tensor;

pub use estimate::{
    estimate_upper_log_mgf, estimate_xi, estimate_xi_lower, estimate_xi_upper, tail_probability,
    EstimatorConfig, McEstimate, TailEstimate,
};
pub use maximize::{
    alternating_max, alternating_max_with, ascend, brute_force_max, symmetric_max, Ascent,
    MaxMethod, MaximizerResult, DEFAULT_MAX_SWEEPS, SWEEP_TOL,
};
pub use tensor::{
    derive_seed, gaussian_at, gaussian_vector, sample_tensor, sample_tensor_with_budget, Budget,
    TensorInstance,
};
