//! Virus Hitter: assistants load bombs with chair twists, the hitter aims a
//! nose-driven torch at colour-matched watchtowers to launch them.

use chairplay_gesture::{GestureEvent, GestureKind, PoseFrame};
use serde::{Deserialize, Serialize};

use crate::config::{ticks_for, VirusHitterConfig, TICK_MS};
use crate::error::GameError;
use crate::game::{GameKind, GameOutput, Outcome, Player};
use crate::prng::Prng;

/// Number of distinct watchtower colours.
pub const PALETTE_SIZE: usize = 8;
pub const MIN_PLAYERS: usize = 2;
pub const MAX_PLAYERS: usize = PALETTE_SIZE + 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assistant {
    pub player: Player,
    /// Palette index; also the watchtower slot, left to right.
    pub color: u8,
    pub bombs: u32,
    pub bombs_loaded: u32,
}

/// Picks the hitter uniformly with `prng.below(n)`; the remaining players
/// keep roster order and take palette colours `0..k`.
pub fn assign_roles(
    roster: &[Player],
    prng: &mut Prng,
) -> Result<(Player, Vec<Assistant>), GameError> {
    if roster.len() < MIN_PLAYERS {
        return Err(GameError::TooFewParticipants {
            game: GameKind::VirusHitter,
            needed: MIN_PLAYERS,
            got: roster.len(),
        });
    }
    if roster.len() > MAX_PLAYERS {
        return Err(GameError::TooManyParticipants {
            max: MAX_PLAYERS,
            got: roster.len(),
        });
    }
    let hitter_index = prng.below(roster.len() as u64)? as usize;
    let assistants = roster
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != hitter_index)
        .enumerate()
        .map(|(color, (_, p))| Assistant {
            player: p.clone(),
            color: color as u8,
            bombs: 0,
            bombs_loaded: 0,
        })
        .collect();
    Ok((roster[hitter_index].clone(), assistants))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VirusHitterState {
    pub config: VirusHitterConfig,
    pub hitter: Player,
    pub assistants: Vec<Assistant>,
    pub torch_x: f64,
    pub hitter_nose_x: Option<f64>,
    /// Milliseconds the torch has rested on each tower, by slot.
    pub dwell_ms: Vec<u64>,
    pub hp: u32,
    pub max_hp: u32,
    pub launches: u32,
    pub tick: u64,
    pub outcome: Outcome,
}

impl VirusHitterState {
    pub fn new(
        roster: &[Player],
        config: VirusHitterConfig,
        prng: &mut Prng,
    ) -> Result<Self, GameError> {
        let (hitter, assistants) = assign_roles(roster, prng)?;
        let max_hp = config.hp_per_assistant * assistants.len() as u32;
        Ok(Self {
            config,
            hitter,
            dwell_ms: vec![0; assistants.len()],
            assistants,
            torch_x: 0.5,
            hitter_nose_x: None,
            hp: max_hp,
            max_hp,
            launches: 0,
            tick: 0,
            outcome: Outcome::Ongoing,
        })
    }

    pub fn duration_ticks(&self) -> u64 {
        ticks_for(self.config.duration_s)
    }

    pub fn is_terminal(&self) -> bool {
        self.outcome != Outcome::Ongoing
    }

    /// Index of the watchtower slot under the torch; slots split `[0, 1]`
    /// evenly in x.
    pub fn slot_under_torch(&self) -> usize {
        let k = self.assistants.len();
        ((self.torch_x * k as f64).floor().max(0.0) as usize).min(k - 1)
    }

    pub(crate) fn tick(
        &mut self,
        events: &[GestureEvent],
        frames: &[PoseFrame],
        out: &mut Vec<GameOutput>,
    ) {
        self.tick += 1;
        let cap = self.config.bomb_cap;
        for e in events.iter().filter(|e| e.kind == GestureKind::TwistRep) {
            if let Some(a) = self
                .assistants
                .iter_mut()
                .find(|a| a.player.id == e.participant_id)
            {
                if a.bombs < cap {
                    a.bombs += 1;
                    a.bombs_loaded += 1;
                    out.push(GameOutput::BombLoaded {
                        participant: a.player.id,
                        tower: a.color,
                        bombs: a.bombs,
                    });
                }
            }
        }

        for f in frames.iter().filter(|f| f.participant_id == self.hitter.id) {
            let nose = f.keypoints.clamped().nose;
            if nose.is_visible() {
                self.hitter_nose_x = Some(nose.x);
            }
        }
        if let Some(target) = self.hitter_nose_x {
            self.torch_x += self.config.torch_smoothing * (target - self.torch_x);
            self.torch_x = self.torch_x.clamp(0.0, 1.0);
        }

        let aimed = self.slot_under_torch();
        for (slot, a) in self.assistants.iter_mut().enumerate() {
            if slot != aimed || a.bombs == 0 {
                self.dwell_ms[slot] = 0;
                continue;
            }
            self.dwell_ms[slot] += TICK_MS;
            if self.dwell_ms[slot] >= self.config.aim_dwell_ms && self.hp > 0 {
                a.bombs -= 1;
                self.hp -= 1;
                self.launches += 1;
                self.dwell_ms[slot] = 0;
                out.push(GameOutput::BombLaunched {
                    tower: a.color,
                    hp: self.hp,
                });
            }
        }

        if self.hp == 0 {
            self.outcome = Outcome::Won;
        } else if self.tick >= self.duration_ticks() {
            self.outcome = Outcome::Lost;
        }
    }
}
