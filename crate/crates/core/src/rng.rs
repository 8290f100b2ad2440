//! Seed derivation.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded from a root seed
//! mixed with a stream index, so a trial's randomness depends only on
//! `(root, trial)` and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags for auxiliary randomness that must not collide with trial
/// indices (which count up from zero).
pub(crate) const NET_STREAM: u64 = 0xA5A5_0000_0000_0001;
pub(crate) const POOL_STREAM: u64 = 0xA5A5_0000_0000_0002;
pub(crate) const AUDIT_STREAM: u64 = 0xA5A5_0000_0000_0003;
pub(crate) const WIDTH_STREAM: u64 = 0xA5A5_0000_0000_0004;
pub(crate) const LAMBDA_STREAM: u64 = 0xA5A5_0000_0000_0005;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed of stream `stream` from `seed`.
pub fn mix(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0x632B_E59B_D9B4_E019)))
}

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, stream))
}
