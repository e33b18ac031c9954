//! SplitMix64 generator for all stochastic sampling.
//!
//! Every Monte Carlo routine in this crate takes an explicit seed, and every
//! report carries it. SplitMix64 is splittable: `stream(i)` derives an
//! independent generator for sample `i`, so results are bit-identical no
//! matter how samples are distributed over workers.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

/// Seed used by the CLI when none is given.
pub const DEFAULT_SEED: u64 = 0x1d2a_7f3b_5c8e_9d41;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..bound` (`bound > 0`), via rejection to avoid modulo bias.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Generator for an independent sub-stream.
    pub fn stream(&self, index: u64) -> SplitMix64 {
        let mut g = SplitMix64::new(self.state ^ index.wrapping_mul(0xa076_1d64_78bd_642f));
        g.next_u64();
        SplitMix64::new(g.next_u64())
    }
}
