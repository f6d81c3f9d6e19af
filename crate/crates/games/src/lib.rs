//! Fixed-timestep engines for three seated movement games.
//!
//! Every game advances in 50 ms ticks from gesture events and pose frames.
//! A `(seed, config, tick inputs)` triple fully determines every state, so
//! replays are bit-identical.

mod config;
mod error;
pub mod food_rain;
pub mod frost;
mod game;
mod leaderboard;
mod prng;
mod results;
pub mod virus_hitter;

#[cfg(test)]
mod testutil;

pub use config::{FoodRainConfig, FrostConfig, GameConfig, VirusHitterConfig, DT, TICK_MS};
pub use error::GameError;
pub use food_rain::{FoodItem, FoodKind, FoodRainState};
pub use frost::{FrostGrid, FrostState};
pub use game::{
    FoodRainTile, FrostTile, GameKind, GameOutput, GameSnapshot, GameState, Outcome, Player,
    TickInput, Tower,
};
pub use leaderboard::{leaderboard, LeaderboardEntry};
pub use prng::{episode_seed, Prng};
pub use results::{GameResults, ParticipantResult, Role};
pub use virus_hitter::{assign_roles, Assistant, VirusHitterState};
