//! Platform-independent pseudo-random streams.
//!
//! A 64-bit seed is expanded into the 256-bit state of xoshiro256++ with
//! SplitMix64 (increment `0x9E3779B97F4A7C15`, finalizer multipliers
//! `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`, shifts 30/27/31). A uniform
//! double in `[0, 1)` takes the 53 high bits of one output word and scales
//! them by `2^-53`. Any implementation of these three pieces reproduces the
//! streams bit for bit.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type StreamRng = Xoshiro256PlusPlus;

/// SplitMix64 finalizer. A bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}

#[inline]
pub fn uniform_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Per-trial seed. Injective in `(dim, side, trial)` for `dim < 2^8`,
/// `side < 2^24` and `trial < 2^32`, since the key packing is injective and
/// every later step is a bijection on `u64`.
pub fn trial_seed(master: u64, dim: usize, side: usize, trial: usize) -> u64 {
    debug_assert!(dim < 1 << 8 && side < 1 << 24 && (trial as u64) < 1 << 32);
    let key = ((dim as u64) << 56) | ((side as u64) << 32) | trial as u64;
    mix64(master.wrapping_add(mix64(key)))
}
