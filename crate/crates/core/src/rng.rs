//! splitmix64, used wherever a reproducible stream is part of a contract.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..span` by rejection, `span` in `1..=2^64`.
    pub fn below(&mut self, span: u128) -> u64 {
        assert!((1..=1u128 << 64).contains(&span), "span out of range");
        if span == 1u128 << 64 {
            return self.next_u64();
        }
        let rem = (1u128 << 64) % span;
        let limit = (1u128 << 64) - rem;
        loop {
            let x = self.next_u64() as u128;
            if x < limit {
                return (x % span) as u64;
            }
        }
    }

    /// Uniform draw from the inclusive range `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi as i128 - lo as i128 + 1) as u128;
        (lo as i128 + self.below(span) as i128) as i64
    }
}
