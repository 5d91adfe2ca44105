//! The single random stream driving a generation run.
//!
//! Draw order within a run is fixed: starter tie-break, then for every guide
//! round the tentative index followed by one pairing index per attempt, and
//! method-internal draws (arm or branch lengths) whenever a method opens a
//! new arm or branch.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct GenRng(ChaCha8Rng);

impl GenRng {
    pub fn from_seed(seed: i64) -> Self {
        GenRng(ChaCha8Rng::seed_from_u64(seed as u64))
    }

    /// Uniform index in `0..len`. Panics on an empty range.
    pub fn index(&mut self, len: usize) -> usize {
        assert!(len > 0, "cannot draw from an empty range");
        self.0.gen_range(0..len as u64) as usize
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.gen_range(lo..=hi)
    }

    /// Uniform real in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.0.gen()
    }

    pub fn inner(&mut self) -> &mut ChaCha8Rng {
        &mut self.0
    }
}
