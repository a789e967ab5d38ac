//! Random streams and the handful of distributions the samplers draw from.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

/// RNG used by every chain. Streams are derived from (seed, stream index).
pub type ChainRng = ChaCha8Rng;

pub fn chain_rng(seed: u64, stream: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Child seed for replication/layer `index` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    chain_rng(seed, index.wrapping_add(1)).next_u64()
}

/// Uniform on the open interval (0, 1).
#[inline]
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let x: f64 = rng.random();
        if x > 0.0 {
            return x;
        }
    }
}

/// Uniform on (0, upper].
#[inline]
pub fn uniform_upto<R: Rng + ?Sized>(rng: &mut R, upper: f64) -> f64 {
    let x: f64 = rng.random();
    upper * (1.0 - x)
}

const FRACTION_FLOOR: f64 = 1e-300;
const FRACTION_CEIL: f64 = 1.0 - f64::EPSILON / 2.0;

/// Beta(1, b) by inverse CDF: 1 - U^(1/b).
pub fn beta_one<R: Rng + ?Sized>(rng: &mut R, b: f64) -> f64 {
    let u = open_unit(rng);
    (-(u.ln() / b).exp_m1()).clamp(FRACTION_FLOOR, FRACTION_CEIL)
}

/// Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b). Results are
/// kept strictly inside (0, 1) so log-odds stay finite.
pub fn beta<R: Rng + ?Sized>(rng: &mut R, a: f64, b: f64) -> f64 {
    if a == 1.0 {
        return beta_one(rng, b);
    }
    let x = Gamma::new(a, 1.0).expect("positive shape").sample(rng);
    let y = Gamma::new(b, 1.0).expect("positive shape").sample(rng);
    let s = x + y;
    let p = if s > 0.0 { x / s } else { 0.5 };
    p.clamp(FRACTION_FLOOR, FRACTION_CEIL)
}

/// Source of stick-breaking fractions distributed Beta(1, concentration).
///
/// Implemented for every RNG; tests substitute deterministic stubs.
pub trait FractionSource {
    fn next_fraction(&mut self, concentration: f64) -> f64;
}

impl<R: RngCore + ?Sized> FractionSource for R {
    fn next_fraction(&mut self, concentration: f64) -> f64 {
        beta_one(self, concentration)
    }
}

/// Draws an index from unnormalized log-weights. Uses max-subtraction so
/// very negative log-likelihoods do not underflow.
pub fn sample_log_categorical<R: Rng + ?Sized>(rng: &mut R, log_weights: &[f64]) -> usize {
    debug_assert!(!log_weights.is_empty());
    if log_weights.len() == 1 {
        return 0;
    }
    let max = log_weights
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let mut cumulative = Vec::with_capacity(log_weights.len());
    let mut total = 0.0;
    for &lw in log_weights {
        total += (lw - max).exp();
        cumulative.push(total);
    }
    let target = rng.random::<f64>() * total;
    cumulative
        .iter()
        .position(|&c| target < c)
        .unwrap_or(log_weights.len() - 1)
}

/// Normalizes log-weights into probabilities.
pub fn normalize_log_weights(log_weights: &[f64]) -> Vec<f64> {
    let max = log_weights
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_weights.iter().map(|&lw| (lw - max).exp()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}
