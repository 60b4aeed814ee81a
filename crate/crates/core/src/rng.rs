//! Deterministic pseudo-randomness.
//!
//! Every random draw in the workbench comes from a [`RngStream`] obtained via
//! [`rng_stream`]. The generator is xoshiro256** whose 256-bit state is filled
//! by four successive splitmix64 outputs. The splitmix64 seed is
//! `seed ^ fnv1a64(tag) ^ index`. Bounded integers use rejection sampling and
//! permutations use Fisher–Yates, so a given `(seed, tag, index)` produces the
//! same draws on every platform.

use std::fmt;

/// Which part of the pipeline a stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    Scope,
    Perm,
    Planted,
    Harness,
}

impl Purpose {
    pub fn tag(self) -> &'static str {
        match self {
            Purpose::Scope => "scope",
            Purpose::Perm => "perm",
            Purpose::Planted => "planted",
            Purpose::Harness => "harness",
        }
    }
}

impl fmt::Display for Purpose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(FNV_PRIME)
    })
}

/// One step of splitmix64: advances `state` and returns the mixed output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// xoshiro256** generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    s: [u64; 4],
}

pub fn rng_stream(seed: u64, purpose: Purpose, index: u64) -> RngStream {
    RngStream::from_splitmix(seed ^ fnv1a64(purpose.tag().as_bytes()) ^ index)
}

impl RngStream {
    pub fn from_splitmix(seed: u64) -> Self {
        let mut sm = seed;
        let s = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        RngStream { s }
    }

    pub fn state(&self) -> [u64; 4] {
        self.s
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform integer in `[0, bound)`. Draws falling below `2^64 mod bound`
    /// are rejected so every residue class is equally likely.
    ///
    /// Panics if `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bounded draw with bound 0");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }

    pub fn below_usize(&mut self, bound: usize) -> usize {
        self.below(bound as u64) as usize
    }

    /// Uniform float in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// In-place Fisher–Yates shuffle (descending index, swap with a uniform
    /// earlier-or-equal position).
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below_usize(i + 1);
            items.swap(i, j);
        }
    }

    /// A uniform permutation of `[0, d)`.
    pub fn permutation(&mut self, d: u32) -> Vec<u32> {
        let mut p: Vec<u32> = (0..d).collect();
        self.shuffle(&mut p);
        p
    }
}
