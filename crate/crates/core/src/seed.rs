//! Deterministic seed derivation.
//!
//! Every trial gets its own generator seeded from `mix(master_seed, trial_index)`,
//! where `mix` is two rounds of the SplitMix64 finalizer. Runs are bit-reproducible
//! given the master seed, independent of thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for every random choice in the crate.
pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a per-trial seed from a master seed and a trial index.
pub fn mix(master_seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn trial_rng(master_seed: u64, index: u64) -> Rng {
    rng_from_seed(mix(master_seed, index))
}
