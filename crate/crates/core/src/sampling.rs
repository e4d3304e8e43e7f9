//! Seeded randomness. Every sample index gets its own ChaCha stream so a
//! witness can be replayed from `(seed, index)` alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SampleRng = ChaCha8Rng;

/// Generator for sample `index` under `seed`.
pub fn rng_for(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn normal(rng: &mut SampleRng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn coin(rng: &mut SampleRng) -> bool {
    rng.random_bool(0.5)
}
