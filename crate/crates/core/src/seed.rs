//! Counter-based seed splitting.
//!
//! Every random stream in the crate is addressed by `(root seed, stream, index)`,
//! so any subroutine can be replayed in isolation and parallel loops draw
//! identical numbers regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedSplitter {
    root: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeedSplitter {
    pub fn new(root: u64) -> Self {
        SeedSplitter { root }
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    /// Derived 64-bit seed for `(stream, index)`.
    pub fn derive(&self, stream: u64, index: u64) -> u64 {
        splitmix64(splitmix64(self.root ^ splitmix64(stream)) ^ index)
    }

    pub fn rng(&self, stream: u64, index: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.derive(stream, index))
    }

    /// A child splitter rooted at a derived seed.
    pub fn child(&self, stream: u64, index: u64) -> SeedSplitter {
        SeedSplitter::new(self.derive(stream, index))
    }
}

/// Named streams, kept distinct so builders never share randomness by accident.
pub mod streams {
    pub const DECODE: u64 = 1;
    pub const SAMPLE: u64 = 2;
    pub const LABELS: u64 = 3;
    pub const TRIALS: u64 = 4;
    pub const RETRY: u64 = 5;
    pub const MESSAGES: u64 = 6;
}
