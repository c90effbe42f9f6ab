use rayon::prelude::*;
use serde::Serialize;

use super::maximize::{
    alternating_max_with, brute_force_max, symmetric_max, MaxMethod, DEFAULT_MAX_SWEEPS,
};
use super::tensor::{derive_seed, gaussian_vector, sample_tensor_with_budget, Budget};
use crate::error::{Error, Result};
use crate::numerics::LogMeanExp;
use crate::SpinSet;

const TAG_XI: u64 = 1;
const TAG_XI_ASCENT: u64 = 2;
const TAG_LOWER: u64 = 3;
const TAG_LOWER_ASCENT: u64 = 4;
const TAG_UPPER: u64 = 5;
const TAG_TAIL: u64 = 6;
const TAG_TAIL_ASCENT: u64 = 7;

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Sample mean and `sd / sqrt(N)` with the unbiased variance.
    pub fn from_samples(values: &[f64], seed: u64) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Self {
            mean,
            std_err: (var / n).sqrt(),
            samples: values.len() as u64,
            seed,
        }
    }

    /// Number of combined standard errors separating `self` from `other`.
    pub fn z_against(&self, other: &McEstimate) -> f64 {
        (self.mean - other.mean) / self.std_err.hypot(other.std_err)
    }
}

/// Knobs shared by the estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub budget: Budget,
    /// `None` picks brute force for Ising sets and ascent for the sphere.
    pub method: Option<MaxMethod>,
    pub restarts: usize,
    pub max_sweeps: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            budget: Budget::default(),
            method: None,
            restarts: 8,
            max_sweeps: DEFAULT_MAX_SWEEPS,
        }
    }
}

impl EstimatorConfig {
    fn method_for(&self, set: SpinSet) -> Result<MaxMethod> {
        match (self.method, set) {
            (None, SpinSet::Ising) => Ok(MaxMethod::BruteForce),
            (None, SpinSet::Spherical) => Ok(MaxMethod::Alternating),
            (Some(MaxMethod::BruteForce), SpinSet::Spherical) => Err(Error::domain(
                "brute force is only available for Ising sets",
            )),
            (Some(MaxMethod::ShiftedPower | MaxMethod::Eigen), _) => Err(Error::domain(
                "shifted power iteration applies to single-vector forms only",
            )),
            (Some(m), _) => Ok(m),
        }
    }

    fn check_cost(&self, p: u32, n: usize, set: SpinSet, bits: u64) -> Result<()> {
        self.budget.check_entries(p, n)?;
        if set == SpinSet::Ising && self.method != Some(MaxMethod::Alternating) {
            self.budget
                .check_evals("brute-force configurations", bits)?;
        }
        Ok(())
    }
}

fn check_common(p: u32, n: usize, samples: u64) -> Result<()> {
    if p < 2 || n < 1 {
        return Err(Error::domain(format!(
            "need p >= 2 and n >= 1, got p = {p}, n = {n}"
        )));
    }
    if samples < 2 {
        return Err(Error::domain(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    Ok(())
}

fn check_c3(c3: f64, strict: bool) -> Result<()> {
    if !c3.is_finite() || c3 < 0.0 || (strict && c3 == 0.0) {
        return Err(Error::domain(format!(
            "c3 must be {} and finite, got {c3}",
            if strict { "> 0" } else { ">= 0" }
        )));
    }
    Ok(())
}

fn run_trials<F>(samples: u64, f: F) -> Result<Vec<f64>>
where
    F: Fn(u64) -> Result<f64> + Sync + Send,
{
    (0..samples).into_par_iter().map(f).collect()
}

/// `(1 / (c3 sqrt(n))) log mean exp(c3 v)`, or the plain mean of `v / sqrt(n)`
/// when `c3 = 0`.
fn cumulant_estimate(values: &[f64], c3: f64, n: usize, seed: u64) -> McEstimate {
    let root_n = (n as f64).sqrt();
    if c3 == 0.0 {
        let scaled: Vec<f64> = values.iter().map(|v| v / root_n).collect();
        return McEstimate::from_samples(&scaled, seed);
    }
    let acc: LogMeanExp = values.iter().map(|v| c3 * v).collect();
    McEstimate {
        mean: acc.log_mean() / (c3 * root_n),
        std_err: acc.log_mean_std_err() / (c3 * root_n),
        samples: values.len() as u64,
        seed,
    }
}

/// Monte Carlo estimate of `(1/sqrt(n)) (1/c3) log E exp(c3 max_x A(x^(1), ..., x^(p)))`
/// over independent partites on `set`.
pub fn estimate_xi(
    p: u32,
    n: usize,
    set: SpinSet,
    c3: f64,
    samples: u64,
    seed: u64,
    cfg: &EstimatorConfig,
) -> Result<McEstimate> {
    check_common(p, n, samples)?;
    check_c3(c3, false)?;
    let method = cfg.method_for(set)?;
    cfg.check_cost(p, n, set, p as u64 * n as u64)?;
    let sets = vec![set; p as usize];
    let values = run_trials(samples, |i| {
        let t = sample_tensor_with_budget(p, n, derive_seed(seed, TAG_XI, i), &cfg.budget)?;
        let r = match method {
            MaxMethod::BruteForce => brute_force_max(&t, &sets, &cfg.budget)?,
            _ => alternating_max_with(
                &t,
                &sets,
                cfg.restarts,
                cfg.max_sweeps,
                derive_seed(seed, TAG_XI_ASCENT, i),
            )?,
        };
        Ok(r.value)
    })?;
    Ok(cumulant_estimate(&values, c3, n, seed))
}

/// Monte Carlo estimate of the decoupled lower quantity: `p` independent
/// tensors, each scored at its own symmetric point, summed and scaled by
/// `1/sqrt(p)`. Even `p` only.
pub fn estimate_xi_lower(
    p: u32,
    n: usize,
    set: SpinSet,
    c3: f64,
    samples: u64,
    seed: u64,
    cfg: &EstimatorConfig,
) -> Result<McEstimate> {
    check_common(p, n, samples)?;
    if p % 2 == 1 {
        return Err(Error::domain(format!(
            "the lower bound needs even p (got {p}); for odd p the symmetric forms can be \
             sign-indefinite, while the upper bound holds for every p"
        )));
    }
    check_c3(c3, false)?;
    cfg.check_cost(p, n, set, n as u64)?;
    let scale = 1.0 / (p as f64).sqrt();
    let values = run_trials(samples, |i| {
        let mut total = 0.0;
        for j in 0..p as u64 {
            let k = i * p as u64 + j;
            let t = sample_tensor_with_budget(p, n, derive_seed(seed, TAG_LOWER, k), &cfg.budget)?;
            let r = symmetric_max(
                &t,
                set,
                cfg.restarts,
                derive_seed(seed, TAG_LOWER_ASCENT, k),
                &cfg.budget,
            )?;
            total += r.value;
        }
        Ok(total * scale)
    })?;
    Ok(cumulant_estimate(&values, c3, n, seed))
}

/// Monte Carlo estimate of `log E exp(t max_{x in set} g.x)` for a standard
/// Gaussian `g` in `R^n`.
pub fn estimate_upper_log_mgf(
    set: SpinSet,
    n: usize,
    t: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_common(2, n, samples)?;
    if !t.is_finite() {
        return Err(Error::domain(format!("t must be finite, got {t}")));
    }
    let inv_root_n = 1.0 / (n as f64).sqrt();
    let acc: LogMeanExp = (0..samples)
        .into_par_iter()
        .map(|i| {
            let g = gaussian_vector(n, derive_seed(seed, TAG_UPPER, i));
            let m = match set {
                SpinSet::Spherical => g.iter().map(|x| x * x).sum::<f64>().sqrt(),
                SpinSet::Ising => g.iter().map(|x| x.abs()).sum::<f64>() * inv_root_n,
            };
            t * m
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .collect();
    Ok(McEstimate {
        mean: acc.log_mean(),
        std_err: acc.log_mean_std_err(),
        samples,
        seed,
    })
}

/// Monte Carlo counterpart of the closed-form upper bound at the same `c3`.
pub fn estimate_xi_upper(
    p: u32,
    n: usize,
    set: SpinSet,
    c3: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_common(p, n, samples)?;
    check_c3(c3, true)?;
    let root_p = (p as f64).sqrt();
    let lm = estimate_upper_log_mgf(set, n, c3 * root_p, samples, seed)?;
    let scale = root_p / (n as f64).sqrt();
    Ok(McEstimate {
        mean: scale * (-c3 * (p as f64 - 1.0) / 2.0 + lm.mean / c3),
        std_err: scale * lm.std_err / c3,
        samples,
        seed,
    })
}

/// Empirical upper tail of the normalized single-vector maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate {
    /// Hit frequency of `zeta >= u` with its binomial standard error.
    pub probability: McEstimate,
    pub hits: u64,
    /// `(1/n) log` of the hit frequency, when positive.
    pub log_rate: Option<f64>,
    /// With no hits: the 95% rule-of-three bound `3 / samples`.
    pub upper_bound: Option<f64>,
    /// `(1/n) log` of `upper_bound`.
    pub log_rate_upper: Option<f64>,
}

/// Estimates `P(zeta >= u)` with `zeta = (1/sqrt(n)) max_x A(x, ..., x)`.
pub fn tail_probability(
    p: u32,
    n: usize,
    set: SpinSet,
    u: f64,
    samples: u64,
    seed: u64,
    cfg: &EstimatorConfig,
) -> Result<TailEstimate> {
    check_common(p, n, samples)?;
    if u.is_nan() {
        return Err(Error::domain("u must not be NaN"));
    }
    cfg.check_cost(p, n, set, n as u64)?;
    let root_n = (n as f64).sqrt();
    let hits = run_trials(samples, |i| {
        let t = sample_tensor_with_budget(p, n, derive_seed(seed, TAG_TAIL, i), &cfg.budget)?;
        let r = symmetric_max(
            &t,
            set,
            cfg.restarts,
            derive_seed(seed, TAG_TAIL_ASCENT, i),
            &cfg.budget,
        )?;
        Ok(if r.value / root_n >= u { 1.0 } else { 0.0 })
    })?;
    let count = hits.iter().filter(|&&h| h > 0.0).count() as u64;
    let probability = McEstimate::from_samples(&hits, seed);
    let log_rate = (count > 0).then(|| probability.mean.ln() / n as f64);
    let upper_bound = (count == 0).then(|| 3.0 / samples as f64);
    Ok(TailEstimate {
        probability,
        hits: count,
        log_rate,
        upper_bound,
        log_rate_upper: upper_bound.map(|b| b.ln() / n as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::erfc;

    fn cfg() -> EstimatorConfig {
        EstimatorConfig::default()
    }

    #[test]
    fn plain_mean_of_abs_gaussian() {
        let est = estimate_xi(2, 1, SpinSet::Ising, 0.0, 100_000, 3, &cfg()).unwrap();
        let expect = (2.0 / std::f64::consts::PI).sqrt();
        assert!((est.mean - expect).abs() < 3.0 * est.std_err, "{est:?}");
    }

    #[test]
    fn abs_gaussian_mgf() {
        // log E e^{|g|} = 1/2 + log(2 Phi(1)) = 1/2 + log erfc(-1/sqrt 2)
        let expect = 0.5 + erfc(-std::f64::consts::FRAC_1_SQRT_2).ln();
        for set in SpinSet::ALL {
            let est = estimate_xi(2, 1, set, 1.0, 100_000, 4, &cfg()).unwrap();
            assert!(
                (est.mean - expect).abs() < 3.0 * est.std_err,
                "{set}: {est:?} vs {expect}"
            );
        }
    }

    #[test]
    fn small_c3_approaches_mean() {
        let a = estimate_xi(2, 2, SpinSet::Ising, 1e-3, 20_000, 5, &cfg()).unwrap();
        let b = estimate_xi(2, 2, SpinSet::Ising, 0.0, 20_000, 5, &cfg()).unwrap();
        assert!(a.z_against(&b).abs() < 3.0);
    }

    #[test]
    fn lower_single_entry_is_gaussian_mgf() {
        let c3 = 0.7;
        let est = estimate_xi_lower(2, 1, SpinSet::Ising, c3, 100_000, 6, &cfg()).unwrap();
        // (A1 + A2)/sqrt 2 is standard normal, so the cumulant is c3 / 2
        assert!((est.mean - c3 / 2.0).abs() < 3.0 * est.std_err, "{est:?}");
    }

    #[test]
    fn lower_rejects_odd_p() {
        let err = estimate_xi_lower(3, 2, SpinSet::Ising, 0.5, 10, 1, &cfg()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn too_few_samples() {
        assert!(estimate_xi(2, 1, SpinSet::Ising, 0.5, 1, 1, &cfg()).is_err());
    }

    #[test]
    fn estimators_are_reproducible() {
        let a = estimate_xi(3, 2, SpinSet::Spherical, 0.5, 200, 9, &cfg()).unwrap();
        let b = estimate_xi(3, 2, SpinSet::Spherical, 0.5, 200, 9, &cfg()).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        let c = estimate_xi_lower(2, 2, SpinSet::Ising, 0.5, 200, 9, &cfg()).unwrap();
        let d = estimate_xi_lower(2, 2, SpinSet::Ising, 0.5, 200, 9, &cfg()).unwrap();
        assert_eq!(c.mean.to_bits(), d.mean.to_bits());
    }

    #[test]
    fn budget_is_checked_before_sampling() {
        let tight = EstimatorConfig {
            budget: Budget {
                evals: 1 << 8,
                entries: 1 << 20,
            },
            ..cfg()
        };
        let err = estimate_xi(2, 5, SpinSet::Ising, 0.5, 10, 1, &tight).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { required: 1024, .. }));
    }

    #[test]
    fn tail_single_entry_is_normal_tail() {
        let est = tail_probability(2, 1, SpinSet::Ising, 1.0, 100_000, 10, &cfg()).unwrap();
        let expect = 0.5 * erfc(std::f64::consts::FRAC_1_SQRT_2);
        let pr = est.probability;
        assert!((pr.mean - expect).abs() < 3.0 * pr.std_err, "{pr:?}");
        assert!(est.log_rate.is_some() && est.upper_bound.is_none());
    }

    #[test]
    fn tail_extremes() {
        let all = tail_probability(2, 3, SpinSet::Ising, -1e6, 100, 1, &cfg()).unwrap();
        assert_eq!(all.probability.mean, 1.0);
        let none = tail_probability(2, 3, SpinSet::Ising, 1e6, 100, 1, &cfg()).unwrap();
        assert_eq!(none.hits, 0);
        assert_eq!(none.upper_bound, Some(0.03));
        assert!(none.log_rate.is_none());
    }
}
