//! Counter-based SplitMix64.
//!
//! Output `i` of the stream with seed `s` is `mix(s + (i + 1) * 0x9E3779B97F4A7C15)`
//! where `mix` is the SplitMix64 finalizer. The sequence is a pure function of
//! `(seed, i)`, so it is easy to reproduce in any language.

use crate::group::{Basis, Point};
use crate::spectral::{GridFunction, C64};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
pub fn mix64(z: u64) -> u64 {
    let mut z = z;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    seed: u64,
    counter: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { seed, counter: 0 }
    }

    /// Independent stream derived from this seed and a tag.
    pub fn fork(&self, tag: u64) -> SplitMix64 {
        SplitMix64::new(mix64(self.seed ^ mix64(tag.wrapping_add(1).wrapping_mul(GAMMA))))
    }

    pub fn at(seed: u64, index: u64) -> u64 {
        mix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = Self::at(self.seed, self.counter);
        self.counter += 1;
        v
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer below `bound` (multiply-shift, bias below 2^-32 for
    /// the small bounds used here).
    pub fn below(&mut self, bound: u32) -> u32 {
        (((self.next_u64() >> 32) * u64::from(bound)) >> 32) as u32
    }
}

/// Function with real and imaginary parts uniform on `[-1, 1)`.
pub fn random_function(basis: &Basis, rng: &mut SplitMix64) -> crate::Result<GridFunction> {
    GridFunction::from_fn(basis, |_| C64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
}

/// Uniformly random point, digit by digit (works on symbolic bases).
pub fn random_point(basis: &Basis, rng: &mut SplitMix64) -> Point {
    let digits = basis.radices().iter().map(|&m| rng.below(m)).collect();
    basis.point(digits).expect("digits drawn below their radices")
}
