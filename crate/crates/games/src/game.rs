use std::collections::BTreeMap;
use std::fmt;

use chairplay_gesture::{GestureEvent, ParticipantId, PoseFrame, RepCounts};
use serde::{Deserialize, Serialize};

use crate::config::{GameConfig, TICK_MS};
use crate::error::GameError;
use crate::food_rain::{FoodItem, FoodKind, FoodRainState};
use crate::frost::FrostState;
use crate::leaderboard::{leaderboard, LeaderboardEntry};
use crate::prng::Prng;
use crate::results::{GameResults, ParticipantResult, Role};
use crate::virus_hitter::VirusHitterState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    Frost,
    FoodRain,
    VirusHitter,
}

impl GameKind {
    pub const ALL: [GameKind; 3] = [GameKind::Frost, GameKind::FoodRain, GameKind::VirusHitter];

    /// Stable identifier shared with the catalog and the wire protocol.
    pub fn id(self) -> &'static str {
        match self {
            GameKind::Frost => "frost",
            GameKind::FoodRain => "food_rain",
            GameKind::VirusHitter => "virus_hitter",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.id() == id)
    }

    pub fn min_players(self) -> usize {
        match self {
            GameKind::VirusHitter => crate::virus_hitter::MIN_PLAYERS,
            _ => 1,
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Player {
    pub id: ParticipantId,
    pub nickname: String,
}

impl Player {
    pub fn new(id: ParticipantId, nickname: impl Into<String>) -> Self {
        Self {
            id,
            nickname: nickname.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Ongoing,
    /// Ran its full course (or, for Frost, was ended by the host).
    Completed,
    Won,
    Lost,
    /// Ended before a timed game reached its conclusion.
    Aborted,
}

/// Discrete happenings produced by a tick, in the order they occurred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum GameOutput {
    FrostCleared {
        participant: ParticipantId,
        cells: u64,
    },
    ItemSpawned {
        item: u32,
        kind: FoodKind,
        x: f64,
    },
    ItemCaught {
        participant: ParticipantId,
        item: u32,
        kind: FoodKind,
        score: i64,
    },
    ItemMissed {
        participant: ParticipantId,
        item: u32,
    },
    BombLoaded {
        participant: ParticipantId,
        tower: u8,
        bombs: u32,
    },
    BombLaunched {
        tower: u8,
        hp: u32,
    },
    GameEnded {
        outcome: Outcome,
    },
}

/// Everything observed during one 50 ms tick, ordered by `(t_ms, join order)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct TickInput<'a> {
    pub events: &'a [GestureEvent],
    pub frames: &'a [PoseFrame],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "game", rename_all = "snake_case")]
pub enum GameState {
    Frost(FrostState),
    FoodRain(FoodRainState),
    VirusHitter(VirusHitterState),
}

impl GameState {
    pub fn new(
        kind: GameKind,
        roster: &[Player],
        config: &GameConfig,
        seed: u64,
    ) -> Result<Self, GameError> {
        config.validate()?;
        if roster.is_empty() {
            return Err(GameError::EmptyRoster);
        }
        if roster.len() < kind.min_players() {
            return Err(GameError::TooFewParticipants {
                game: kind,
                needed: kind.min_players(),
                got: roster.len(),
            });
        }
        let mut prng = Prng::new(seed);
        Ok(match kind {
            GameKind::Frost => GameState::Frost(FrostState::new(roster, config.frost.clone())),
            GameKind::FoodRain => {
                GameState::FoodRain(FoodRainState::new(roster, config.food_rain.clone(), prng))
            }
            GameKind::VirusHitter => GameState::VirusHitter(VirusHitterState::new(
                roster,
                config.virus_hitter.clone(),
                &mut prng,
            )?),
        })
    }

    pub fn kind(&self) -> GameKind {
        match self {
            GameState::Frost(_) => GameKind::Frost,
            GameState::FoodRain(_) => GameKind::FoodRain,
            GameState::VirusHitter(_) => GameKind::VirusHitter,
        }
    }

    pub fn tick_count(&self) -> u64 {
        match self {
            GameState::Frost(s) => s.tick,
            GameState::FoodRain(s) => s.tick,
            GameState::VirusHitter(s) => s.tick,
        }
    }

    pub fn elapsed_ms(&self) -> u64 {
        self.tick_count() * TICK_MS
    }

    /// Frost never ends on its own; the other games end on time or outcome.
    pub fn is_terminal(&self) -> bool {
        match self {
            GameState::Frost(_) => false,
            GameState::FoodRain(s) => s.is_terminal(),
            GameState::VirusHitter(s) => s.is_terminal(),
        }
    }

    pub fn outcome(&self) -> Outcome {
        match self {
            GameState::Frost(_) => Outcome::Ongoing,
            GameState::FoodRain(s) if s.is_terminal() => Outcome::Completed,
            GameState::FoodRain(_) => Outcome::Ongoing,
            GameState::VirusHitter(s) => s.outcome,
        }
    }

    /// Advances one fixed 50 ms step.
    pub fn tick(&mut self, input: TickInput<'_>) -> Result<Vec<GameOutput>, GameError> {
        if self.is_terminal() {
            return Err(GameError::TerminalState);
        }
        let mut out = Vec::new();
        match self {
            GameState::Frost(s) => s.tick(input.frames, &mut out),
            GameState::FoodRain(s) => s.tick(input.events, input.frames, &mut out),
            GameState::VirusHitter(s) => s.tick(input.events, input.frames, &mut out),
        }
        if self.is_terminal() {
            out.push(GameOutput::GameEnded {
                outcome: self.outcome(),
            });
        }
        Ok(out)
    }

    pub fn frost_coverage(&self, id: ParticipantId) -> Result<f64, GameError> {
        match self {
            GameState::Frost(s) => s.coverage(id),
            _ => Err(GameError::UnknownParticipant(id)),
        }
    }

    /// Food Rain standings; empty for the other games.
    pub fn leaderboard(&self) -> Vec<LeaderboardEntry> {
        match self {
            GameState::FoodRain(s) => leaderboard(&s.scores()),
            _ => Vec::new(),
        }
    }

    /// Compact view broadcast to clients every tick.
    pub fn snapshot(&self) -> GameSnapshot {
        match self {
            GameState::Frost(s) => GameSnapshot::Frost {
                players: s
                    .players
                    .iter()
                    .map(|p| FrostTile {
                        participant: p.player.id,
                        coverage: p.grid.coverage(s.config.frosted_threshold),
                        cols: p.grid.cols,
                        rows: p.grid.rows,
                        cells: p
                            .grid
                            .cells
                            .iter()
                            .map(|c| (c * 255.0).round() as u8)
                            .collect(),
                        clear_count: p.clear_count,
                    })
                    .collect(),
            },
            GameState::FoodRain(s) => GameSnapshot::FoodRain {
                remaining_ms: s.duration_ticks().saturating_sub(s.tick) * TICK_MS,
                players: s
                    .players
                    .iter()
                    .map(|p| FoodRainTile {
                        participant: p.player.id,
                        score: p.score,
                        mouth_open: p.mouth_open,
                        items: p.items.clone(),
                    })
                    .collect(),
                leaderboard: leaderboard(&s.scores()),
            },
            GameState::VirusHitter(s) => GameSnapshot::VirusHitter {
                remaining_ms: s.duration_ticks().saturating_sub(s.tick) * TICK_MS,
                hitter: s.hitter.id,
                torch_x: s.torch_x,
                hp: s.hp,
                max_hp: s.max_hp,
                towers: s
                    .assistants
                    .iter()
                    .zip(&s.dwell_ms)
                    .map(|(a, &dwell_ms)| Tower {
                        participant: a.player.id,
                        color: a.color,
                        bombs: a.bombs,
                        dwell_ms,
                    })
                    .collect(),
                outcome: s.outcome,
            },
        }
    }

    /// Summary of the episode so far; call once it is terminal or ended.
    pub fn results(&self, reps: &BTreeMap<ParticipantId, RepCounts>) -> GameResults {
        let reps_for = |id: ParticipantId| reps.get(&id).copied().unwrap_or_default();
        let (outcome, participants) = match self {
            GameState::Frost(s) => (
                Outcome::Completed,
                s.players
                    .iter()
                    .map(|p| ParticipantResult {
                        final_coverage: Some(p.grid.coverage(s.config.frosted_threshold)),
                        clear_count: Some(p.clear_count),
                        ..ParticipantResult::new(
                            &p.player,
                            p.clear_count as i64,
                            reps_for(p.player.id),
                        )
                    })
                    .collect(),
            ),
            GameState::FoodRain(s) => (
                if s.is_terminal() {
                    Outcome::Completed
                } else {
                    Outcome::Aborted
                },
                s.players
                    .iter()
                    .map(|p| ParticipantResult {
                        fruits_caught: Some(p.fruits_caught),
                        desserts_caught: Some(p.desserts_caught),
                        missed: Some(p.missed),
                        ..ParticipantResult::new(&p.player, p.score, reps_for(p.player.id))
                    })
                    .collect(),
            ),
            GameState::VirusHitter(s) => {
                let mut rows = vec![ParticipantResult {
                    role: Some(Role::Hitter),
                    launches: Some(s.launches),
                    ..ParticipantResult::new(&s.hitter, s.launches as i64, reps_for(s.hitter.id))
                }];
                rows.extend(s.assistants.iter().map(|a| ParticipantResult {
                    role: Some(Role::Assistant { color: a.color }),
                    bombs_loaded: Some(a.bombs_loaded),
                    ..ParticipantResult::new(
                        &a.player,
                        a.bombs_loaded as i64,
                        reps_for(a.player.id),
                    )
                }));
                let outcome = match s.outcome {
                    Outcome::Ongoing => Outcome::Aborted,
                    o => o,
                };
                (outcome, rows)
            }
        };
        GameResults {
            game: self.kind(),
            outcome,
            duration_ms: self.elapsed_ms(),
            participants,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrostTile {
    pub participant: ParticipantId,
    pub coverage: f64,
    pub cols: usize,
    pub rows: usize,
    /// Row-major intensities scaled to 0..=255.
    pub cells: Vec<u8>,
    pub clear_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoodRainTile {
    pub participant: ParticipantId,
    pub score: i64,
    pub mouth_open: bool,
    pub items: Vec<FoodItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tower {
    pub participant: ParticipantId,
    pub color: u8,
    pub bombs: u32,
    pub dwell_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "game", rename_all = "snake_case")]
pub enum GameSnapshot {
    Frost {
        players: Vec<FrostTile>,
    },
    FoodRain {
        remaining_ms: u64,
        players: Vec<FoodRainTile>,
        leaderboard: Vec<LeaderboardEntry>,
    },
    VirusHitter {
        remaining_ms: u64,
        hitter: ParticipantId,
        torch_x: f64,
        hp: u32,
        max_hp: u32,
        towers: Vec<Tower>,
        outcome: Outcome,
    },
}
