//! Food Rain: catch falling fruit with an open mouth, avoid desserts.
//!
//! Every spawn draws one item (position and type) and drops a copy into each
//! player's tile, so all players face the same sequence.

use chairplay_gesture::{GestureEvent, GestureKind, ParticipantId, PoseFrame};
use serde::{Deserialize, Serialize};

use crate::config::{ticks_for, FoodRainConfig, DT};
use crate::error::GameError;
use crate::game::{GameOutput, Player};
use crate::prng::Prng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoodKind {
    Fruit,
    Dessert,
}

impl FoodKind {
    pub fn points(self) -> i64 {
        match self {
            FoodKind::Fruit => 1,
            FoodKind::Dessert => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoodItem {
    pub id: u32,
    pub kind: FoodKind,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoodRainPlayer {
    pub player: Player,
    pub items: Vec<FoodItem>,
    pub score: i64,
    pub fruits_caught: u32,
    pub desserts_caught: u32,
    pub missed: u32,
    pub mouth_open: bool,
    pub mouth_center: Option<(f64, f64)>,
}

impl FoodRainPlayer {
    pub fn caught(&self) -> u32 {
        self.fruits_caught + self.desserts_caught
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoodRainState {
    pub config: FoodRainConfig,
    pub players: Vec<FoodRainPlayer>,
    pub prng: Prng,
    pub tick: u64,
    /// Items spawned so far (each one lands in every tile).
    pub spawned: u32,
}

impl FoodRainState {
    pub fn new(roster: &[Player], config: FoodRainConfig, prng: Prng) -> Self {
        let players = roster
            .iter()
            .map(|p| FoodRainPlayer {
                player: p.clone(),
                items: Vec::new(),
                score: 0,
                fruits_caught: 0,
                desserts_caught: 0,
                missed: 0,
                mouth_open: false,
                mouth_center: None,
            })
            .collect();
        Self {
            config,
            players,
            prng,
            tick: 0,
            spawned: 0,
        }
    }

    pub fn duration_ticks(&self) -> u64 {
        ticks_for(self.config.duration_s)
    }

    pub fn spawn_interval_ticks(&self) -> u64 {
        ticks_for(self.config.spawn_interval_s)
    }

    pub fn is_terminal(&self) -> bool {
        self.tick >= self.duration_ticks()
    }

    pub fn player(&self, id: ParticipantId) -> Result<&FoodRainPlayer, GameError> {
        self.players
            .iter()
            .find(|p| p.player.id == id)
            .ok_or(GameError::UnknownParticipant(id))
    }

    /// `(nickname, score)` in join order.
    pub fn scores(&self) -> Vec<(String, i64)> {
        self.players
            .iter()
            .map(|p| (p.player.nickname.clone(), p.score))
            .collect()
    }

    pub(crate) fn tick(
        &mut self,
        events: &[GestureEvent],
        frames: &[PoseFrame],
        out: &mut Vec<GameOutput>,
    ) {
        self.tick += 1;
        for p in &mut self.players {
            let id = p.player.id;
            for e in events.iter().filter(|e| e.participant_id == id) {
                match e.kind {
                    GestureKind::MouthOpen => p.mouth_open = true,
                    GestureKind::MouthClose => p.mouth_open = false,
                    _ => {}
                }
            }
            for f in frames.iter().filter(|f| f.participant_id == id) {
                if let Some(c) = f.keypoints.clamped().mouth_center() {
                    p.mouth_center = Some(c);
                }
            }
            for item in &mut p.items {
                item.y += self.config.fall_speed * DT;
            }
        }

        if self.tick % self.spawn_interval_ticks() == 0 {
            let cfg = &self.config;
            let x = cfg.spawn_x_min + (cfg.spawn_x_max - cfg.spawn_x_min) * self.prng.next_unit();
            let kind = if self.prng.next_unit() < cfg.fruit_probability {
                FoodKind::Fruit
            } else {
                FoodKind::Dessert
            };
            let item = FoodItem {
                id: self.spawned,
                kind,
                x,
                y: 0.0,
            };
            self.spawned += 1;
            for p in &mut self.players {
                p.items.push(item);
            }
            out.push(GameOutput::ItemSpawned {
                item: item.id,
                kind,
                x,
            });
        }

        let (hw, hh) = (self.config.catch_half_width, self.config.catch_half_height);
        for p in &mut self.players {
            let id = p.player.id;
            let mouth = p.mouth_center.filter(|_| p.mouth_open);
            let mut kept = Vec::with_capacity(p.items.len());
            for item in p.items.drain(..) {
                let in_box = mouth
                    .is_some_and(|(mx, my)| (item.x - mx).abs() <= hw && (item.y - my).abs() <= hh);
                if in_box {
                    p.score += item.kind.points();
                    match item.kind {
                        FoodKind::Fruit => p.fruits_caught += 1,
                        FoodKind::Dessert => p.desserts_caught += 1,
                    }
                    out.push(GameOutput::ItemCaught {
                        participant: id,
                        item: item.id,
                        kind: item.kind,
                        score: p.score,
                    });
                } else if item.y > 1.0 {
                    p.missed += 1;
                    out.push(GameOutput::ItemMissed {
                        participant: id,
                        item: item.id,
                    });
                } else {
                    kept.push(item);
                }
            }
            p.items = kept;
        }
    }
}
