#![allow(dead_code)]

pub mod snf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed for randomized tests: `SIGLAB_SEED` when set, otherwise `default`.
pub fn seed(default: u64) -> u64 {
    std::env::var("SIGLAB_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub fn rng(default: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed(default))
}
