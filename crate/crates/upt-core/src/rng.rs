//! Seed handling. Every stochastic routine takes an explicit [`Seed`];
//! trial `i` of a batch uses `seed.split(i)` so results are independent
//! of execution order and thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A 64-bit seed for a deterministic random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

// splitmix64 finalizer; full-period mixing keeps split streams decorrelated.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl Seed {
    /// Deterministic child seed for subtask `i`.
    pub fn split(self, i: u64) -> Seed {
        Seed(mix(self.0 ^ mix(i.wrapping_add(1))))
    }

    /// Fresh generator for this seed.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}
