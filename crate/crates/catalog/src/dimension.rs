use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CatalogError;

/// The seven numeric sub-dimensions games are rated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Exertion,
    Stretch,
    BodyParts,
    Attention,
    BodilyInterplay,
    Duration,
    /// 0 = private, 1 = shared/public.
    SpaceType,
}

impl Dimension {
    pub const ALL: [Dimension; 7] = [
        Dimension::Exertion,
        Dimension::Stretch,
        Dimension::BodyParts,
        Dimension::Attention,
        Dimension::BodilyInterplay,
        Dimension::Duration,
        Dimension::SpaceType,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Dimension::Exertion => "exertion",
            Dimension::Stretch => "stretch",
            Dimension::BodyParts => "body_parts",
            Dimension::Attention => "attention",
            Dimension::BodilyInterplay => "bodily_interplay",
            Dimension::Duration => "duration",
            Dimension::SpaceType => "space_type",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Dimension {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dimension::ALL
            .into_iter()
            .find(|d| d.id() == s)
            .ok_or_else(|| CatalogError::UnknownDimension(s.to_string()))
    }
}

/// When a game is best launched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartTime {
    MidMeeting,
    Break,
    Either,
}

/// Meeting-window layout a game is designed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    Symmetric,
    Asymmetric,
    Either,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for d in Dimension::ALL {
            assert_eq!(d.id().parse::<Dimension>().unwrap(), d);
            assert_eq!(
                serde_json::to_string(&d).unwrap(),
                format!("\"{}\"", d.id())
            );
        }
        assert_eq!(
            "agility".parse::<Dimension>(),
            Err(CatalogError::UnknownDimension("agility".into()))
        );
    }
}
