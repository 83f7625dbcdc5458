//! Seeded randomness for reproducible instances.
//!
//! The generator is SplitMix64: the state starts at the seed, each step adds
//! `0x9e3779b97f4a7c15`, and the output is the state passed through
//! `z ^= z >> 30; z *= 0xbf58476d1ce4e5b9; z ^= z >> 27; z *= 0x94d049bb133111eb; z ^= z >> 31`.
//! Bounded integers use rejection: a draw `x` is accepted when
//! `x < 2^64 − (2^64 mod r)` and mapped to `x mod r`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

#[derive(Debug, Clone)]
pub struct Rng {
    inner: SplitMix64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { inner: SplitMix64::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..r` (`r ≥ 1`).
    pub fn below(&mut self, r: u64) -> u64 {
        assert!(r > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % r + 1) % r;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % r;
            }
        }
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        let width = (hi as i128 - lo as i128 + 1) as u128;
        if width > u64::MAX as u128 {
            return self.next_u64() as i64;
        }
        (lo as i128 + self.below(width as u64) as i128) as i64
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}

/// Seed of instance `index` in a campaign: output number `index + 1` of
/// SplitMix64 started at `base`.
pub fn instance_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add((index.wrapping_add(1)).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
