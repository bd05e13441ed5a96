//! Seeded generator behind every random choice in the crate.
//!
//! Algorithm id 1: ChaCha8 (`rand_chacha::ChaCha8Rng`) keyed by
//! `SeedableRng::seed_from_u64(seed)` with the 64-bit stream selected by the
//! caller. Stop decisions compare a 53-bit uniform double against `alpha`;
//! neighbor choice uses Lemire's multiply-and-reject bounded sampling on
//! 32-bit outputs, so no modulo bias.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifier written into walk-index headers.
pub const RNG_ALGORITHM_ID: u8 = 1;

#[derive(Debug, Clone)]
pub struct WalkRng {
    inner: ChaCha8Rng,
}

impl WalkRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn unit(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// True with probability `p`.
    #[inline]
    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// Uniform in `0..bound`. `bound` must be positive.
    #[inline]
    pub fn below(&mut self, bound: u32) -> u32 {
        debug_assert!(bound > 0);
        let range = bound as u64;
        let mut product = self.inner.next_u32() as u64 * range;
        let mut low = product as u32;
        if low < bound {
            let threshold = bound.wrapping_neg() % bound;
            while low < threshold {
                product = self.inner.next_u32() as u64 * range;
                low = product as u32;
            }
        }
        (product >> 32) as u32
    }
}
