//! Seeded splitmix64 generator.
//!
//! Every random choice in the engines goes through this type so that a seed
//! reproduces a game bit-for-bit on any platform.

use serde::{Deserialize, Serialize};

use crate::error::GameError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prng {
    state: u64,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// `next_u64() % n`. Modulo bias (at most n / 2^64) is accepted.
    pub fn below(&mut self, n: u64) -> Result<u64, GameError> {
        if n == 0 {
            return Err(GameError::ZeroBound);
        }
        Ok(self.next_u64() % n)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Derives an independent seed for a numbered episode of a session.
pub fn episode_seed(session_seed: u64, episode: u64) -> u64 {
    Prng::new(session_seed ^ episode.wrapping_mul(0xD1B5_4A32_D192_ED03)).next_u64()
}
