//! Seeded, platform-independent randomness.
//!
//! Every stochastic routine takes a `u64` seed and builds a ChaCha8 stream
//! from it, so results depend only on the seed and never on the host.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StdRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> StdRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for the `index`-th independent sub-run of a seeded job.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_add(index)
}
