//! Seeded, reproducible sampling of ±1 outcome distributions.
//!
//! The generator is ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`). A
//! 64-bit seed is expanded to the 256-bit key with `SeedableRng::seed_from_u64`
//! (PCG32 fill), and independent streams come from the cipher's 64-bit stream
//! id. A uniform draw is `(next_u64 >> 11) · 2⁻⁵³`, so every draw lies in
//! `[0, 1)` on a 2⁻⁵³ lattice. Each categorical sample consumes exactly one
//! uniform draw and inverts the CDF in a fixed category order.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::observables::JointDistribution;
use crate::projection::Outcome;

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Source of the uniform variates consumed by the samplers.
pub trait UniformSource {
    /// Uniform draw in `[0, 1)`.
    fn next_uniform(&mut self) -> f64;

    /// Fair coin, used for bookkeeping decisions that are not outcome samples.
    fn next_bit(&mut self) -> bool;
}

impl<S: UniformSource + ?Sized> UniformSource for &mut S {
    fn next_uniform(&mut self) -> f64 {
        (**self).next_uniform()
    }

    fn next_bit(&mut self) -> bool {
        (**self).next_bit()
    }
}

/// Seeded ChaCha8 stream.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent stream `stream` under the same seed.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl UniformSource for RandomSource {
    fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn next_bit(&mut self) -> bool {
        self.rng.next_u64() >> 63 == 1
    }
}

/// Wraps a source and counts how many draws of each kind pass through it.
#[derive(Debug, Clone)]
pub struct CountingSource<S> {
    inner: S,
    uniform_draws: u64,
    bit_draws: u64,
}

impl<S> CountingSource<S> {
    pub fn new(inner: S) -> Self {
        CountingSource {
            inner,
            uniform_draws: 0,
            bit_draws: 0,
        }
    }

    /// Number of outcome samples taken (one uniform per sample).
    pub fn uniform_draws(&self) -> u64 {
        self.uniform_draws
    }

    pub fn bit_draws(&self) -> u64 {
        self.bit_draws
    }

    pub fn reset(&mut self) {
        self.uniform_draws = 0;
        self.bit_draws = 0;
    }

    pub fn into_inner(self) -> S {
        self.inner
    }
}

impl<S: UniformSource> UniformSource for CountingSource<S> {
    fn next_uniform(&mut self) -> f64 {
        self.uniform_draws += 1;
        self.inner.next_uniform()
    }

    fn next_bit(&mut self) -> bool {
        self.bit_draws += 1;
        self.inner.next_bit()
    }
}

/// SplitMix64 finalizer over `(seed, index)`, for deterministic sub-seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Inverse-CDF index over `probs` for a single uniform `u`; zero-mass
/// categories are never returned even if the cumulative sum falls short of 1.
fn invert_cdf(probs: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        cumulative += p;
        if u < cumulative {
            return i;
        }
    }
    probs
        .iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(probs.len() - 1)
}

/// Draws an outcome pair `(o_a, o_b)`.
///
/// Categories are inverted in the order (−1,−1), (−1,+1), (+1,−1), (+1,+1).
pub fn sample_joint<R: UniformSource + ?Sized>(
    dist: &JointDistribution,
    rng: &mut R,
) -> (Outcome, Outcome) {
    use Outcome::{Minus, Plus};
    const PAIRS: [(Outcome, Outcome); 4] =
        [(Minus, Minus), (Minus, Plus), (Plus, Minus), (Plus, Plus)];
    PAIRS[invert_cdf(&dist.as_array(), rng.next_uniform())]
}

/// Draws `+1` with probability `p_plus`, otherwise `−1`.
pub fn sample_binary<R: UniformSource + ?Sized>(p_plus: f64, rng: &mut R) -> Result<Outcome> {
    if !(0.0..=1.0).contains(&p_plus) {
        return Err(Error::ProbabilityOutOfRange(p_plus));
    }
    Ok(if rng.next_uniform() < p_plus {
        Outcome::Plus
    } else {
        Outcome::Minus
    })
}
