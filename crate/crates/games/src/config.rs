use serde::{Deserialize, Serialize};

use crate::error::GameError;

/// The only supported simulation step.
pub const TICK_MS: u64 = 50;
/// [`TICK_MS`] in seconds.
pub const DT: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FrostConfig {
    pub cols: usize,
    pub rows: usize,
    /// Intensity per second added to border cells.
    pub edge_growth: f64,
    /// Intensity per second added to interior cells, scaled by the strongest
    /// 4-neighbour, once that neighbour reaches `spread_threshold`.
    pub interior_growth: f64,
    pub spread_threshold: f64,
    /// Cells at or above this intensity count as frosted.
    pub frosted_threshold: f64,
    /// Normalized distance from a moving keypoint within which cells clear.
    pub clear_radius: f64,
    /// Minimum per-frame keypoint displacement that clears frost.
    pub clear_displacement: f64,
}

impl Default for FrostConfig {
    fn default() -> Self {
        Self {
            cols: 32,
            rows: 18,
            edge_growth: 0.15,
            interior_growth: 0.25,
            spread_threshold: 0.5,
            frosted_threshold: 0.5,
            clear_radius: 0.12,
            clear_displacement: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FoodRainConfig {
    pub duration_s: f64,
    pub spawn_interval_s: f64,
    pub fruit_probability: f64,
    /// Tile heights per second.
    pub fall_speed: f64,
    pub catch_half_width: f64,
    pub catch_half_height: f64,
    pub spawn_x_min: f64,
    pub spawn_x_max: f64,
}

impl Default for FoodRainConfig {
    fn default() -> Self {
        Self {
            duration_s: 90.0,
            spawn_interval_s: 1.2,
            fruit_probability: 0.7,
            fall_speed: 0.25,
            catch_half_width: 0.08,
            catch_half_height: 0.06,
            spawn_x_min: 0.1,
            spawn_x_max: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VirusHitterConfig {
    pub duration_s: f64,
    pub bomb_cap: u32,
    pub aim_dwell_ms: u64,
    /// Virus HP is this many points per assistant.
    pub hp_per_assistant: u32,
    /// Exponential smoothing factor applied to the torch each tick.
    pub torch_smoothing: f64,
}

impl Default for VirusHitterConfig {
    fn default() -> Self {
        Self {
            duration_s: 120.0,
            bomb_cap: 3,
            aim_dwell_ms: 600,
            hp_per_assistant: 2,
            torch_smoothing: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GameConfig {
    pub tick_ms: u64,
    pub frost: FrostConfig,
    pub food_rain: FoodRainConfig,
    pub virus_hitter: VirusHitterConfig,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            tick_ms: TICK_MS,
            frost: FrostConfig::default(),
            food_rain: FoodRainConfig::default(),
            virus_hitter: VirusHitterConfig::default(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> GameError {
    GameError::InvalidConfig(msg.into())
}

fn positive(name: &str, v: f64) -> Result<(), GameError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive, got {v}")))
    }
}

fn unit(name: &str, v: f64) -> Result<(), GameError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in [0, 1], got {v}")))
    }
}

/// Whole ticks in `secs`, at least one.
pub(crate) fn ticks_for(secs: f64) -> u64 {
    ((secs * 1000.0 / TICK_MS as f64).round() as u64).max(1)
}

impl GameConfig {
    pub fn validate(&self) -> Result<(), GameError> {
        if self.tick_ms != TICK_MS {
            return Err(invalid(format!(
                "engines run at a fixed {TICK_MS} ms tick, got {}",
                self.tick_ms
            )));
        }
        let f = &self.frost;
        if f.cols < 2 || f.rows < 2 {
            return Err(invalid("frost grid must be at least 2x2"));
        }
        positive("frost.edge_growth", f.edge_growth)?;
        positive("frost.interior_growth", f.interior_growth)?;
        positive("frost.clear_radius", f.clear_radius)?;
        positive("frost.clear_displacement", f.clear_displacement)?;
        unit("frost.spread_threshold", f.spread_threshold)?;
        unit("frost.frosted_threshold", f.frosted_threshold)?;

        let r = &self.food_rain;
        positive("food_rain.duration_s", r.duration_s)?;
        positive("food_rain.spawn_interval_s", r.spawn_interval_s)?;
        positive("food_rain.fall_speed", r.fall_speed)?;
        positive("food_rain.catch_half_width", r.catch_half_width)?;
        positive("food_rain.catch_half_height", r.catch_half_height)?;
        unit("food_rain.fruit_probability", r.fruit_probability)?;
        unit("food_rain.spawn_x_min", r.spawn_x_min)?;
        unit("food_rain.spawn_x_max", r.spawn_x_max)?;
        if r.spawn_x_min > r.spawn_x_max {
            return Err(invalid("food_rain spawn range is inverted"));
        }

        let v = &self.virus_hitter;
        positive("virus_hitter.duration_s", v.duration_s)?;
        if v.bomb_cap == 0 || v.aim_dwell_ms == 0 || v.hp_per_assistant == 0 {
            return Err(invalid(
                "virus_hitter bomb cap, dwell and hp per assistant must be positive",
            ));
        }
        if !(v.torch_smoothing > 0.0 && v.torch_smoothing <= 1.0) {
            return Err(invalid("virus_hitter.torch_smoothing must lie in (0, 1]"));
        }
        Ok(())
    }
}
