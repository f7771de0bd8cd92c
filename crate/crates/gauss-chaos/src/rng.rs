//! Deterministic random-number streams.
//!
//! Every stochastic routine in the crate derives its generator here, from
//! an explicit user seed plus a list of integer tags (partition rank,
//! restart index, sample block, …). Distinct tag paths give independent
//! streams; the same path always reproduces the same stream, on every
//! platform, in any iteration order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step, the standard 64-bit finalizer-based mixer.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Collapse `(seed, tags…)` into a single well-mixed 64-bit value.
pub fn mix(seed: u64, tags: &[u64]) -> u64 {
    let mut state = seed ^ 0x6A09_E667_F3BC_C909;
    let mut acc = splitmix64(&mut state);
    for &t in tags {
        state ^= t;
        acc ^= splitmix64(&mut state);
    }
    acc
}

/// A ChaCha stream keyed by `(seed, tags…)`.
pub fn stream(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, tags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_reproduce_and_separate() {
        let a: Vec<u64> = (0..4).map(|_| stream(7, &[1, 2]).next_u64()).collect();
        assert!(a.iter().all(|&x| x == a[0]));
        assert_ne!(stream(7, &[1, 2]).next_u64(), stream(7, &[1, 3]).next_u64());
        assert_ne!(stream(7, &[1, 2]).next_u64(), stream(8, &[1, 2]).next_u64());
        // Tag paths of different lengths must not collide trivially.
        assert_ne!(stream(7, &[1]).next_u64(), stream(7, &[1, 0]).next_u64());
    }
}
