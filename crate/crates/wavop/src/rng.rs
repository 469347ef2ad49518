//! Deterministic randomness: one seed, named substreams.
//!
//! Every experiment derives its generators from a single `u64` seed and a
//! static substream name, so adding or reordering experiments never shifts
//! the draws of another, and sweeps parallelized over items stay
//! order-independent.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// FNV-1a 64-bit hash; stable across platforms and runs.
pub fn hash64(name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Generator for `(seed, substream name)`. The name selects a ChaCha stream,
/// so substreams are mutually independent for any fixed seed.
pub fn substream(seed: u64, name: &str) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(hash64(name));
    rng
}

/// Indexed substream for per-item draws inside a sweep.
pub fn substream_indexed(seed: u64, name: &str, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(hash64(name) ^ mix64(index).rotate_left(1));
    rng
}

/// SplitMix64 finalizer: a cheap, high-quality integer mixer.
#[inline]
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic ±1 keyed by a seed and an index tuple, independent of
/// enumeration order. Used for sign-pattern coefficient fields.
pub fn sign_for(seed: u64, l: usize, j: i32, k: &[i64]) -> f64 {
    let mut h = mix64(seed ^ 0x5bd1_e995_u64.wrapping_mul(l as u64 + 1));
    h = mix64(h ^ (j as i64 as u64));
    for (axis, ki) in k.iter().enumerate() {
        h = mix64(h ^ (*ki as u64).wrapping_add(0x9e37 * (axis as u64 + 1)));
    }
    if h & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}
