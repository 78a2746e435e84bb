//! Deterministic 64-bit PRNG for reproducible instance generation.
//!
//! This is the standard splitmix64 stream. It is part of the reproducibility
//! contract: the same seed must produce bit-identical instances on every
//! platform and in every release, so we do not delegate to an external RNG
//! crate whose stream could change under us.

use crate::field::{FieldElement, PrimeModulus};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform element of `F_p` by rejection sampling (no modulo bias).
    pub fn next_field(&mut self, p: PrimeModulus) -> FieldElement {
        let m = p.get() as u64;
        let zone = u64::MAX - (u64::MAX % m);
        loop {
            let x = self.next_u64();
            if x < zone {
                return p.elem(x % m);
            }
        }
    }

    /// Uniform nonzero element of `F_p`.
    pub fn next_nonzero_field(&mut self, p: PrimeModulus) -> FieldElement {
        loop {
            let x = self.next_field(p);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Uniform integer in `[0, bound)`.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}
