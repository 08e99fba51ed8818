//! Seed derivation for reproducible parallel experiments.
//!
//! Every random stream is a `(seed, stream)` pair on ChaCha8: `stream`
//! selects one of 2^64 independent streams of the same seed, which is the
//! counter/split scheme that keeps serial and parallel execution
//! bit-identical. Nested structure (dataset -> unit -> sub-unit) derives
//! child seeds with [`mix_seed`] instead of consuming draws from a shared
//! generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; a cheap, well-mixed u64 -> u64 bijection.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed for the unit labelled `tag` under `seed`.
pub fn mix_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed.wrapping_add(splitmix64(tag)))
}

/// The RNG for stream `stream` of `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
