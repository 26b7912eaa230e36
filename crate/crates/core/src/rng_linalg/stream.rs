use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A reproducible random stream: `(seed, index)` selects a ChaCha8 stream.
///
/// Identical pairs give bit-identical sequences. Monte Carlo code hands each
/// trial `stream.child(trial)`, which depends only on the parent and the trial
/// number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub index: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { seed, index: 0 }
    }

    pub fn with_index(seed: u64, index: u64) -> Self {
        RngStream { seed, index }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.index);
        rng
    }

    /// Sub-stream for trial `i`. Children of distinct parents or distinct `i`
    /// land on distinct ChaCha keys/streams with overwhelming probability.
    pub fn child(&self, i: u64) -> RngStream {
        RngStream {
            seed: splitmix64(self.seed ^ splitmix64(self.index.wrapping_add(0x5151))),
            index: i,
        }
    }
}
