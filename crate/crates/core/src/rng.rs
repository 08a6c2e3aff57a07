//! Counter-style random streams: one ChaCha8 stream per (seed, index).
//!
//! Each trajectory or sample block draws from its own stream, so results do
//! not depend on how work is split across threads.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform on [0, 1) with 53 random bits.
pub fn uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn normal<R: RngCore>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}
