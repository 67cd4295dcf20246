//! Small deterministic generator for the seeded property suites.
//!
//! Reports must be byte-identical across runs with the same seed, so the
//! generator is pinned here rather than taken from an external crate whose
//! stream might change between versions. splitmix64, which is enough for
//! picking test samples; nothing here is cryptographic.

use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct SeededRng {
    state: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            state: seed ^ 0x9e3779b97f4a7c15,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    /// Integer in `[lo, hi]`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// Small nonzero rational with numerator and denominator bounded by `b`.
    pub fn small_rational(&mut self, b: i64) -> Scalar {
        let mut p = 0;
        while p == 0 {
            p = self.int_in(-b, b);
        }
        let q = self.int_in(1, b);
        Scalar::from_ratio(p, q)
    }

    /// Small rational, zero allowed.
    pub fn small_rational_or_zero(&mut self, b: i64) -> Scalar {
        let p = self.int_in(-b, b);
        let q = self.int_in(1, b);
        Scalar::from_ratio(p, q)
    }
}
