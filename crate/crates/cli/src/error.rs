use std::path::PathBuf;

use chairplay_games::GameError;
use chairplay_gesture::GestureError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Gesture(#[from] GestureError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn code(&self) -> &'static str {
        match self {
            HarnessError::InvalidScenario(_) | HarnessError::Game(_) => "scenario-invalid",
            HarnessError::InvalidSegment(_) => "invalid-segment",
            HarnessError::Gesture(_) => "gesture-error",
            HarnessError::Io { .. } => "io-error",
        }
    }
}
