use thiserror::Error;

use crate::frame::ParticipantId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GestureError {
    #[error("invalid tracker parameters: {0}")]
    InvalidParams(String),
    #[error("stale frame for {participant}: t_ms {t_ms} is not after {last_t_ms}")]
    StaleFrame {
        participant: ParticipantId,
        t_ms: u64,
        last_t_ms: u64,
    },
    #[error("participant {0} was never registered")]
    UnknownParticipant(ParticipantId),
    #[error("mouth landmarks missing or below confidence gate")]
    MissingLandmarks,
}
