//! All randomness flows from one master seed through a counter-based
//! splittable scheme: stream `i` of master seed `s` is ChaCha8 keyed by
//! `splitmix64(s ⊕ splitmix64(i))`. Deterministic across runs and platforms,
//! and independent streams can be handed to parallel workers.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const RNG_SCHEME: &str = "splitmix64+chacha8";

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derive the seed for stream `stream` of `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master ^ splitmix64(stream.wrapping_add(0x51ed_270b)))
}

/// Seeded generator for one stream.
pub fn seeded_rng(master: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, stream))
}
