use thiserror::Error;

use crate::dimension::Dimension;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("catalog is empty")]
    EmptyCatalog,
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("rating {value} for {game}/{dimension} is outside [0, 1]")]
    OutOfRange {
        game: String,
        dimension: Dimension,
        value: f64,
    },
    #[error("unknown dimension {0:?}")]
    UnknownDimension(String),
    #[error("missing header, expected `participant_id,game_id,dimension,value`")]
    MissingHeader,
    #[error("line {line}: {reason}")]
    BadRow { line: u64, reason: String },
    #[error("inverted interval for {game}/{dimension}: q1 {q1} > q3 {q3}")]
    InvertedInterval {
        game: String,
        dimension: Dimension,
        q1: f64,
        q3: f64,
    },
}
