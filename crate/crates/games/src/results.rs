use chairplay_gesture::{ParticipantId, RepCounts};
use serde::{Deserialize, Serialize};

use crate::game::{GameKind, Outcome, Player};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum Role {
    Hitter,
    Assistant { color: u8 },
}

/// One participant's line in an episode summary. `score` is what the
/// cumulative leaderboard sums: Food Rain points, Frost clears, Virus Hitter
/// bombs loaded (assistants) or launched (hitter).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipantResult {
    pub participant: ParticipantId,
    pub nickname: String,
    pub score: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_coverage: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clear_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fruits_caught: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub desserts_caught: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub missed: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bombs_loaded: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub launches: Option<u32>,
    pub reps: RepCounts,
}

impl ParticipantResult {
    pub(crate) fn new(player: &Player, score: i64, reps: RepCounts) -> Self {
        Self {
            participant: player.id,
            nickname: player.nickname.clone(),
            score,
            role: None,
            final_coverage: None,
            clear_count: None,
            fruits_caught: None,
            desserts_caught: None,
            missed: None,
            bombs_loaded: None,
            launches: None,
            reps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameResults {
    pub game: GameKind,
    pub outcome: Outcome,
    pub duration_ms: u64,
    pub participants: Vec<ParticipantResult>,
}
