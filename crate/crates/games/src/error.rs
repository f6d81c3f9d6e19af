use chairplay_gesture::ParticipantId;
use thiserror::Error;

use crate::GameKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("roster is empty")]
    EmptyRoster,
    #[error("{game} needs at least {needed} participants, got {got}")]
    TooFewParticipants {
        game: GameKind,
        needed: usize,
        got: usize,
    },
    #[error("at most {max} participants are supported, got {got}")]
    TooManyParticipants { max: usize, got: usize },
    #[error("game has already finished")]
    TerminalState,
    #[error("participant {0} is not in this game")]
    UnknownParticipant(ParticipantId),
    #[error("random bound must be at least 1")]
    ZeroBound,
    #[error("invalid game config: {0}")]
    InvalidConfig(String),
}
