//! Deterministic seeding.
//!
//! Every random choice in the crate flows from a [`Seed`]. Sub-seeds for
//! trials and streams are derived with the splitmix64 finalizer, so the
//! derived value depends only on the parent seed and the index, never on
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Golden-ratio increment used by splitmix64.
pub const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed(pub u64);

impl Seed {
    /// Child seed for `index` (trial number, stream id, ...).
    pub fn derive(self, index: u64) -> Seed {
        Seed(mix64(
            self.0 ^ mix64(index.wrapping_add(1).wrapping_mul(SPLITMIX_GAMMA)),
        ))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}
