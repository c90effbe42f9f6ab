use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::tensor::{derive_seed, dot, gaussian_vector, Budget, TensorInstance};
use crate::error::{Error, Result};
use crate::SpinSet;

const SEED_TAG_INIT: u64 = 0x696e_6974;
const SEED_TAG_PERTURB: u64 = 0x7065_7274;

pub const DEFAULT_MAX_SWEEPS: usize = 10_000;
pub const SWEEP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxMethod {
    BruteForce,
    Alternating,
    /// Shifted symmetric power iteration for a single spherical vector.
    ShiftedPower,
    /// Symmetric eigensolver, exact for a single spherical vector at order 2.
    Eigen,
}

impl MaxMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::BruteForce => "brute",
            Self::Alternating => "alternating",
            Self::ShiftedPower => "shifted_power",
            Self::Eigen => "eigen",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximizerResult {
    pub value: f64,
    pub argmax: Vec<Vec<f64>>,
    pub method: MaxMethod,
    pub restarts_used: usize,
    /// `true` for exhaustive search; for ascent, whether the best restart
    /// met the sweep tolerance.
    pub converged: bool,
}

/// A single block-ascent run.
#[derive(Debug, Clone)]
pub struct Ascent {
    pub value: f64,
    pub xs: Vec<Vec<f64>>,
    /// Objective after each full sweep.
    pub trace: Vec<f64>,
    pub converged: bool,
    /// Set when a spherical block update met a zero vector and was perturbed.
    pub perturbed: bool,
}

fn check_sets(t: &TensorInstance, sets: &[SpinSet]) -> Result<()> {
    if sets.len() != t.p as usize {
        return Err(Error::domain(format!(
            "need one spin set per axis: p = {}, got {}",
            t.p,
            sets.len()
        )));
    }
    Ok(())
}

fn project(set: SpinSet, v: &[f64]) -> Option<Vec<f64>> {
    match set {
        SpinSet::Spherical => {
            let norm = dot(v, v).sqrt();
            (norm > 0.0).then(|| v.iter().map(|x| x / norm).collect())
        }
        SpinSet::Ising => {
            let s = 1.0 / (v.len() as f64).sqrt();
            Some(v.iter().map(|&x| if x < 0.0 { -s } else { s }).collect())
        }
    }
}

fn as_refs(xs: &[Vec<f64>]) -> Vec<&[f64]> {
    xs.iter().map(|x| x.as_slice()).collect()
}

/// Exact maximum of the multilinear form over Ising partites.
///
/// The last partite is optimized in closed form (`sum |v_i| / sqrt(n)`) and
/// the first coordinate of the first partite is fixed to `+`, using the
/// global sign symmetry.
pub fn brute_force_max(
    t: &TensorInstance,
    sets: &[SpinSet],
    budget: &Budget,
) -> Result<MaximizerResult> {
    check_sets(t, sets)?;
    if sets.iter().any(|&s| s != SpinSet::Ising) {
        return Err(Error::domain(
            "brute force requires Ising spin sets on every axis",
        ));
    }
    let (p, n) = (t.p as usize, t.n);
    budget.check_evals("brute-force configurations", (p * n) as u64)?;
    let s = 1.0 / (n as f64).sqrt();
    let free_bits = (p - 1) * n;
    let configs: u64 = if free_bits == 0 {
        1
    } else {
        1 << (free_bits - 1)
    };

    let mut xs = vec![vec![s; n]; p];
    let mut best = f64::NEG_INFINITY;
    let mut best_xs = xs.clone();
    for mask in 0..configs {
        for bit in 0..free_bits {
            // bit 0 is the pinned coordinate
            let on = bit > 0 && (mask >> (bit - 1)) & 1 == 1;
            xs[bit / n][bit % n] = if on { -s } else { s };
        }
        let v = t.contract_except(p - 1, &as_refs(&xs));
        let value = v.iter().map(|x| x.abs()).sum::<f64>() * s;
        if value > best {
            best = value;
            xs[p - 1] = project(SpinSet::Ising, &v).expect("ising projection is total");
            best_xs.clone_from(&xs);
        }
    }
    Ok(MaximizerResult {
        value: best,
        argmax: best_xs,
        method: MaxMethod::BruteForce,
        restarts_used: 1,
        converged: true,
    })
}

/// Block-coordinate ascent from `init`. Each sweep replaces every partite
/// in turn by the best response to the others.
pub fn ascend(
    t: &TensorInstance,
    sets: &[SpinSet],
    init: Vec<Vec<f64>>,
    max_sweeps: usize,
    seed: u64,
) -> Result<Ascent> {
    check_sets(t, sets)?;
    if init.len() != sets.len() || init.iter().any(|x| x.len() != t.n) {
        return Err(Error::domain("initial point has the wrong shape"));
    }
    let mut xs = init;
    let mut trace = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    let mut perturbed = false;
    let mut converged = false;
    let mut value = prev;
    for sweep in 0..max_sweeps {
        for j in 0..xs.len() {
            let mut v = t.contract_except(j, &as_refs(&xs));
            let next = match project(sets[j], &v) {
                Some(x) => x,
                None => {
                    perturbed = true;
                    let tag = derive_seed(seed, SEED_TAG_PERTURB, (sweep * xs.len() + j) as u64);
                    for (vi, g) in v.iter_mut().zip(gaussian_vector(t.n, tag)) {
                        *vi = g;
                    }
                    project(sets[j], &v).unwrap_or_else(|| xs[j].clone())
                }
            };
            xs[j] = next;
        }
        value = t.value(&as_refs(&xs));
        trace.push(value);
        if value - prev < SWEEP_TOL {
            converged = true;
            break;
        }
        prev = value;
    }
    Ok(Ascent {
        value,
        xs,
        trace,
        converged,
        perturbed,
    })
}

fn random_point(set: SpinSet, n: usize, seed: u64) -> Vec<f64> {
    let g = gaussian_vector(n, seed);
    project(set, &g).unwrap_or_else(|| vec![1.0 / (n as f64).sqrt(); n])
}

/// Best of `restarts` block ascents from seeded random starts. A lower
/// bound on the true maximum.
pub fn alternating_max(
    t: &TensorInstance,
    sets: &[SpinSet],
    restarts: usize,
    seed: u64,
) -> Result<MaximizerResult> {
    alternating_max_with(t, sets, restarts, DEFAULT_MAX_SWEEPS, seed)
}

pub fn alternating_max_with(
    t: &TensorInstance,
    sets: &[SpinSet],
    restarts: usize,
    max_sweeps: usize,
    seed: u64,
) -> Result<MaximizerResult> {
    check_sets(t, sets)?;
    if restarts == 0 {
        return Err(Error::domain("need at least one restart"));
    }
    let mut best: Option<Ascent> = None;
    for r in 0..restarts {
        let init = sets
            .iter()
            .enumerate()
            .map(|(j, &set)| {
                random_point(
                    set,
                    t.n,
                    derive_seed(seed, SEED_TAG_INIT, (r * sets.len() + j) as u64),
                )
            })
            .collect();
        let run = ascend(
            t,
            sets,
            init,
            max_sweeps,
            derive_seed(seed, SEED_TAG_PERTURB, r as u64),
        )?;
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    let best = best.expect("restarts >= 1");
    Ok(MaximizerResult {
        value: best.value,
        argmax: best.xs,
        method: MaxMethod::Alternating,
        restarts_used: restarts,
        converged: best.converged,
    })
}

/// Maximum of `A(x, ..., x)` over a single vector.
///
/// Ising cubes are enumerated exactly. On the sphere, order 2 is the top
/// eigenvalue of the symmetrized matrix; higher orders use shifted
/// symmetric power iteration with restarts.
pub fn symmetric_max(
    t: &TensorInstance,
    set: SpinSet,
    restarts: usize,
    seed: u64,
    budget: &Budget,
) -> Result<MaximizerResult> {
    match set {
        SpinSet::Ising => symmetric_brute_force(t, budget),
        SpinSet::Spherical if t.p == 2 => Ok(top_eigenpair(t)),
        SpinSet::Spherical => shifted_power(t, restarts, DEFAULT_MAX_SWEEPS, seed),
    }
}

fn symmetric_brute_force(t: &TensorInstance, budget: &Budget) -> Result<MaximizerResult> {
    let n = t.n;
    budget.check_evals("brute-force configurations", n as u64)?;
    let s = 1.0 / (n as f64).sqrt();
    let even = t.p.is_multiple_of(2);
    // even order: x and -x agree, so pin the first sign;
    // odd order: the pair gives +-value, so score max(v, -v)
    let configs: u64 = 1 << (n - 1);
    let mut x = vec![s; n];
    let mut best = f64::NEG_INFINITY;
    let mut best_x = x.clone();
    for mask in 0..configs {
        for (i, xi) in x.iter_mut().enumerate().skip(1) {
            *xi = if (mask >> (i - 1)) & 1 == 1 { -s } else { s };
        }
        let v = t.symmetric_value(&x);
        let (value, flip) = if even || v >= -v {
            (v, false)
        } else {
            (-v, true)
        };
        if value > best {
            best = value;
            best_x = if flip {
                x.iter().map(|a| -a).collect()
            } else {
                x.clone()
            };
        }
    }
    Ok(MaximizerResult {
        value: best,
        argmax: vec![best_x],
        method: MaxMethod::BruteForce,
        restarts_used: 1,
        converged: true,
    })
}

fn top_eigenpair(t: &TensorInstance) -> MaximizerResult {
    let a = DMatrix::from_row_slice(t.n, t.n, &t.entries);
    let eig = SymmetricEigen::new((&a + a.transpose()) * 0.5);
    let k = eig.eigenvalues.imax();
    let x: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    MaximizerResult {
        value: t.symmetric_value(&x),
        argmax: vec![x],
        method: MaxMethod::Eigen,
        restarts_used: 1,
        converged: true,
    }
}

fn symmetric_gradient_over_p(t: &TensorInstance, x: &[f64]) -> Vec<f64> {
    let p = t.p as usize;
    let xs = vec![x; p];
    let mut g = vec![0.0; t.n];
    for k in 0..p {
        for (gi, vi) in g.iter_mut().zip(t.contract_except(k, &xs)) {
            *gi += vi;
        }
    }
    g.iter_mut().for_each(|gi| *gi /= p as f64);
    g
}

fn shifted_power(
    t: &TensorInstance,
    restarts: usize,
    max_iter: usize,
    seed: u64,
) -> Result<MaximizerResult> {
    if restarts == 0 {
        return Err(Error::domain("need at least one restart"));
    }
    // this shift makes every step monotone; start unshifted and grow toward
    // it only when a step would lose value
    let alpha_max = (t.p as f64 - 1.0) * t.abs_sum();
    let mut best = (f64::NEG_INFINITY, Vec::new(), false);
    for r in 0..restarts {
        let mut x = random_point(
            SpinSet::Spherical,
            t.n,
            derive_seed(seed, SEED_TAG_INIT, r as u64),
        );
        let mut value = t.symmetric_value(&x);
        let mut converged = false;
        let mut alpha = 0.0;
        for _ in 0..max_iter {
            let g = symmetric_gradient_over_p(t, &x);
            let (next, next_value) = loop {
                let y: Vec<f64> = g.iter().zip(&x).map(|(gi, xi)| gi + alpha * xi).collect();
                let cand = project(SpinSet::Spherical, &y);
                let v = cand
                    .as_deref()
                    .map_or(f64::NEG_INFINITY, |c| t.symmetric_value(c));
                if v >= value || alpha >= alpha_max {
                    break (cand, v);
                }
                alpha = if alpha == 0.0 {
                    1e-3 * alpha_max
                } else {
                    (2.0 * alpha).min(alpha_max)
                };
            };
            let Some(next) = next else { break };
            x = next;
            let gain = next_value - value;
            value = next_value;
            if gain.abs() < SWEEP_TOL {
                converged = true;
                break;
            }
        }
        if value > best.0 {
            best = (value, x, converged);
        }
    }
    Ok(MaximizerResult {
        value: best.0,
        argmax: vec![best.1],
        method: MaxMethod::ShiftedPower,
        restarts_used: restarts,
        converged: best.2,
    })
}
