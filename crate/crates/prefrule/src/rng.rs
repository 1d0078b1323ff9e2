//! Counter-based random streams for reproducible parallel simulation.
//!
//! A root seed keys the generator and a stream counter selects one of
//! 2^64 independent ChaCha streams, so replication `r` of an experiment
//! can be simulated on any thread, in any order, and still produce the
//! same bytes. Uniform doubles are derived from raw 64-bit output with a
//! fixed 53-bit mapping to keep datasets bit-reproducible across
//! dependency upgrades.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The stream for one replication: root seed plus counter.
pub fn replication_rng(root_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw in `[0, 1)` using the top 53 bits of one output word.
pub(crate) fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// SplitMix64 finalizer; used to hash a seed into tie-break bits.
pub(crate) fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
