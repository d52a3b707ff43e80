//! Seeded generation of rational coupling fields. ChaCha keeps streams
//! identical across platforms, which keeps CLI output byte-stable.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct FieldRng(ChaCha8Rng);

impl FieldRng {
    pub fn new(seed: u64) -> Self {
        FieldRng(ChaCha8Rng::seed_from_u64(seed))
    }

    fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }

    /// One x-value in (0,1) with a small denominator, as (num, den).
    pub fn ratio_in_unit(&mut self) -> (i64, i64) {
        let den = 2 + self.below(7) as i64; // 2..=8
        let num = 1 + self.below((den - 1) as u64) as i64; // 1..den
        (num, den)
    }

    /// A whole per-edge field of x-values in (0,1).
    pub fn unit_field(&mut self, edges: usize) -> Vec<(i64, i64)> {
        (0..edges).map(|_| self.ratio_in_unit()).collect()
    }
}
