use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// Resource limits for tensor storage and brute-force enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of spin configurations a brute-force search may visit.
    pub evals: u128,
    /// Maximum number of tensor entries.
    pub entries: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            evals: 1 << 26,
            entries: 1 << 27,
        }
    }
}

impl Budget {
    pub(crate) fn check_entries(&self, p: u32, n: usize) -> Result<usize> {
        let required = checked_pow(n as u128, p).unwrap_or(u128::MAX);
        if required > self.entries {
            return Err(Error::BudgetExceeded {
                what: "tensor storage (entries)",
                required,
                budget: self.entries,
            });
        }
        Ok(required as usize)
    }

    pub(crate) fn check_evals(&self, what: &'static str, bits: u64) -> Result<()> {
        let required = if bits >= 127 {
            u128::MAX
        } else {
            1u128 << bits
        };
        if required > self.evals {
            return Err(Error::BudgetExceeded {
                what,
                required,
                budget: self.evals,
            });
        }
        Ok(())
    }
}

fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

/// A dense order-`p` tensor with side `n`, row-major in `(i_1, ..., i_p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorInstance {
    pub p: u32,
    pub n: usize,
    pub entries: Vec<f64>,
    /// Seed the entries were drawn from (0 for tensors built from raw data).
    pub seed: u64,
}

impl TensorInstance {
    pub fn from_entries(p: u32, n: usize, entries: Vec<f64>) -> Result<Self> {
        if p < 2 || n < 1 {
            return Err(Error::domain(format!(
                "need p >= 2 and n >= 1, got p = {p}, n = {n}"
            )));
        }
        let len = checked_pow(n as u128, p).unwrap_or(u128::MAX);
        if len != entries.len() as u128 {
            return Err(Error::domain(format!(
                "expected n^p = {len} entries for p = {p}, n = {n}, got {}",
                entries.len()
            )));
        }
        Ok(Self {
            p,
            n,
            entries,
            seed: 0,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|a| a * factor).collect(),
            ..self.clone()
        }
    }

    pub fn abs_sum(&self) -> f64 {
        self.entries.iter().map(|a| a.abs()).sum()
    }

    /// Contracts every axis except `free` against the matching vector of
    /// `xs`, leaving a length-`n` vector.
    pub fn contract_except(&self, free: usize, xs: &[&[f64]]) -> Vec<f64> {
        debug_assert_eq!(xs.len(), self.p as usize);
        let n = self.n;
        let mut cur: Option<Vec<f64>> = None;
        let mut order = self.p as usize;
        for axis in (0..self.p as usize).rev() {
            if axis == free {
                continue;
            }
            let data = cur.as_deref().unwrap_or(&self.entries);
            cur = Some(contract_axis(data, n, order, axis, xs[axis]));
            order -= 1;
        }
        cur.unwrap_or_else(|| self.entries.clone())
    }

    /// The multilinear form evaluated at one vector per axis.
    pub fn value(&self, xs: &[&[f64]]) -> f64 {
        dot(&self.contract_except(0, xs), xs[0])
    }

    /// The form with the same vector in every slot.
    pub fn symmetric_value(&self, x: &[f64]) -> f64 {
        let xs = vec![x; self.p as usize];
        self.value(&xs)
    }
}

/// Contracts axis `axis` of an order-`order` tensor of side `n` with `x`.
fn contract_axis(data: &[f64], n: usize, order: usize, axis: usize, x: &[f64]) -> Vec<f64> {
    let inner = n.pow((order - axis - 1) as u32);
    let outer = n.pow(axis as u32);
    let mut out = vec![0.0; outer * inner];
    for o in 0..outer {
        let dst = &mut out[o * inner..(o + 1) * inner];
        for (k, &xk) in x.iter().enumerate() {
            let src = &data[(o * n + k) * inner..(o * n + k + 1) * inner];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += s * xk;
            }
        }
    }
    out
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Seeded tensor of i.i.d. standard normals, within the default budget.
pub fn sample_tensor(p: u32, n: usize, seed: u64) -> Result<TensorInstance> {
    sample_tensor_with_budget(p, n, seed, &Budget::default())
}

pub fn sample_tensor_with_budget(
    p: u32,
    n: usize,
    seed: u64,
    budget: &Budget,
) -> Result<TensorInstance> {
    if p < 2 || n < 1 {
        return Err(Error::domain(format!(
            "need p >= 2 and n >= 1, got p = {p}, n = {n}"
        )));
    }
    let len = budget.check_entries(p, n)?;
    Ok(TensorInstance {
        p,
        n,
        entries: gaussian_vector(len, seed),
        seed,
    })
}

fn uniform_pair(rng: &mut ChaCha20Rng) -> (f64, f64) {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    // u1 in (0, 1] keeps the log finite, u2 in [0, 1)
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * SCALE;
    let u2 = (rng.next_u64() >> 11) as f64 * SCALE;
    (u1, u2)
}

fn box_muller(u1: f64, u2: f64) -> (f64, f64) {
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    (r * c, r * s)
}

/// `len` standard normals drawn with Box-Muller from the ChaCha20 stream of
/// `seed`. Entry `k` uses the pair of 64-bit words `2 * (k / 2)`, so any
/// prefix or single entry can be regenerated independently.
pub fn gaussian_vector(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(len + 1);
    while out.len() < len {
        let (a, b) = box_muller_from(&mut rng);
        out.push(a);
        out.push(b);
    }
    out.truncate(len);
    out
}

fn box_muller_from(rng: &mut ChaCha20Rng) -> (f64, f64) {
    let (u1, u2) = uniform_pair(rng);
    box_muller(u1, u2)
}

/// Entry `k` of [`gaussian_vector`] without generating the preceding ones.
pub fn gaussian_at(seed: u64, k: u64) -> f64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    // each pair consumes two u64 = four 32-bit words
    rng.set_word_pos((k / 2) as u128 * 4);
    let (a, b) = box_muller_from(&mut rng);
    if k.is_multiple_of(2) {
        a
    } else {
        b
    }
}

/// Independent sub-seed for trial `index` of the estimator tagged `tag`.
pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(tag);
    rng.set_word_pos(index as u128 * 2);
    rng.next_u64()
}
