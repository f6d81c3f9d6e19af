//! Frost: ice creeps in from the tile border and is wiped off by movement.

use chairplay_gesture::{KeypointSet, ParticipantId, PoseFrame};
use serde::{Deserialize, Serialize};

use crate::config::{FrostConfig, DT};
use crate::error::GameError;
use crate::game::{GameOutput, Player};

/// Row-major cell intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrostGrid {
    pub cols: usize,
    pub rows: usize,
    pub cells: Vec<f64>,
}

impl FrostGrid {
    pub fn new(cols: usize, rows: usize) -> Self {
        Self {
            cols,
            rows,
            cells: vec![0.0; cols * rows],
        }
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.cells[row * self.cols + col]
    }

    pub fn set(&mut self, col: usize, row: usize, v: f64) {
        self.cells[row * self.cols + col] = v.clamp(0.0, 1.0);
    }

    pub fn is_edge(&self, col: usize, row: usize) -> bool {
        col == 0 || row == 0 || col + 1 == self.cols || row + 1 == self.rows
    }

    /// Cell centre in normalized tile coordinates.
    pub fn center(&self, col: usize, row: usize) -> (f64, f64) {
        (
            (col as f64 + 0.5) / self.cols as f64,
            (row as f64 + 0.5) / self.rows as f64,
        )
    }

    /// Fraction of cells at or above `threshold`.
    pub fn coverage(&self, threshold: f64) -> f64 {
        let frosted = self.cells.iter().filter(|&&c| c >= threshold).count();
        frosted as f64 / self.cells.len() as f64
    }

    fn max_neighbor(&self, col: usize, row: usize) -> f64 {
        let mut m: f64 = 0.0;
        if col > 0 {
            m = m.max(self.get(col - 1, row));
        }
        if col + 1 < self.cols {
            m = m.max(self.get(col + 1, row));
        }
        if row > 0 {
            m = m.max(self.get(col, row - 1));
        }
        if row + 1 < self.rows {
            m = m.max(self.get(col, row + 1));
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrostPlayer {
    pub player: Player,
    pub grid: FrostGrid,
    /// Frosted cells this player has wiped clear.
    pub clear_count: u64,
    pub last_keypoints: Option<KeypointSet>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrostState {
    pub config: FrostConfig,
    pub players: Vec<FrostPlayer>,
    pub tick: u64,
}

impl FrostState {
    pub fn new(roster: &[Player], config: FrostConfig) -> Self {
        let players = roster
            .iter()
            .map(|p| FrostPlayer {
                player: p.clone(),
                grid: FrostGrid::new(config.cols, config.rows),
                clear_count: 0,
                last_keypoints: None,
            })
            .collect();
        Self {
            config,
            players,
            tick: 0,
        }
    }

    pub fn player(&self, id: ParticipantId) -> Result<&FrostPlayer, GameError> {
        self.players
            .iter()
            .find(|p| p.player.id == id)
            .ok_or(GameError::UnknownParticipant(id))
    }

    pub fn coverage(&self, id: ParticipantId) -> Result<f64, GameError> {
        Ok(self
            .player(id)?
            .grid
            .coverage(self.config.frosted_threshold))
    }

    pub(crate) fn tick(&mut self, frames: &[PoseFrame], out: &mut Vec<GameOutput>) {
        self.tick += 1;
        let cfg = &self.config;
        for p in &mut self.players {
            grow(&mut p.grid, cfg);
            let mut cleared = 0;
            for frame in frames.iter().filter(|f| f.participant_id == p.player.id) {
                let k = frame.keypoints.clamped();
                if let Some(prev) = p.last_keypoints {
                    cleared += clear_around_movers(&mut p.grid, &prev, &k, cfg);
                }
                p.last_keypoints = Some(k);
            }
            if cleared > 0 {
                p.clear_count += cleared;
                out.push(GameOutput::FrostCleared {
                    participant: p.player.id,
                    cells: cleared,
                });
            }
        }
    }
}

/// One synchronous growth step: every cell reads the previous grid.
fn grow(grid: &mut FrostGrid, cfg: &FrostConfig) {
    let before = grid.clone();
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            let v = before.get(col, row);
            let next = if before.is_edge(col, row) {
                v + cfg.edge_growth * DT
            } else {
                let m = before.max_neighbor(col, row);
                if m >= cfg.spread_threshold {
                    v + cfg.interior_growth * DT * m
                } else {
                    v
                }
            };
            grid.set(col, row, next);
        }
    }
}

/// Zeroes cells near every keypoint that moved at least the clearing
/// displacement since the previous frame. Returns how many frosted cells
/// were wiped.
fn clear_around_movers(
    grid: &mut FrostGrid,
    prev: &KeypointSet,
    current: &KeypointSet,
    cfg: &FrostConfig,
) -> u64 {
    let mut wiped = 0;
    for (before, now) in prev.points().iter().zip(current.points().iter()) {
        if !(before.is_visible() && now.is_visible()) {
            continue;
        }
        if now.distance(before) < cfg.clear_displacement {
            continue;
        }
        for row in 0..grid.rows {
            for col in 0..grid.cols {
                let (cx, cy) = grid.center(col, row);
                if (cx - now.x).hypot(cy - now.y) <= cfg.clear_radius {
                    let v = grid.get(col, row);
                    if v >= cfg.frosted_threshold {
                        wiped += 1;
                    }
                    grid.set(col, row, 0.0);
                }
            }
        }
    }
    wiped
}
