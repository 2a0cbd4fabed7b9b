//! Deterministic seed derivation.
//!
//! Every randomized routine takes a single `u64` seed. Independent
//! sub-streams (per repetition, per component, per edge side) are derived
//! here so results never depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream id of the source-side tie-break keys in random ranking.
pub const SOURCE_STREAM: u64 = 0;
/// Stream id of the target-side tie-break keys in random ranking.
pub const TARGET_STREAM: u64 = 1;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `index`-th child of `seed`. Children of distinct indices are
/// decorrelated and `derive(seed, i)` never equals `seed` in practice.
pub fn derive(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

/// Generator for `seed` on the given ChaCha stream.
pub fn rng(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
