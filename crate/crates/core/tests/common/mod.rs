#![allow(dead_code)]

use proptest::test_runner::{Config, RngAlgorithm, RngSeed};

/// splitmix64 over a counter: the n-th value depends only on (seed, n).
pub struct Counter {
    seed: u64,
    n: u64,
}

impl Counter {
    pub fn new(seed: u64) -> Self {
        Counter { seed, n: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.n += 1;
        let mut z = self
            .seed
            .wrapping_add(self.n.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn signs(&mut self, n: usize) -> Vec<i8> {
        (0..n)
            .map(|_| if self.next_u64() & 1 == 1 { -1 } else { 1 })
            .collect()
    }
}

/// Proptest settings with a fixed seed so every run explores the same cases.
pub fn fixed(cases: u32) -> Config {
    Config {
        cases,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(0x6861_6465_78),
        failure_persistence: None,
        ..Config::default()
    }
}
