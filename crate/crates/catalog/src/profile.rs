use serde::{Deserialize, Serialize};

use crate::dimension::{Dimension, Layout, StartTime};

pub const FROST: &str = "frost";
pub const FOOD_RAIN: &str = "food_rain";
pub const VIRUS_HITTER: &str = "virus_hitter";

/// A game's position in the design space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameProfile {
    pub game: String,
    pub exertion: f64,
    pub stretch: f64,
    pub body_parts: f64,
    pub attention: f64,
    pub bodily_interplay: f64,
    pub duration: f64,
    pub space_type: f64,
    pub start_time: StartTime,
    pub layout: Layout,
}

impl GameProfile {
    pub fn get(&self, d: Dimension) -> f64 {
        match d {
            Dimension::Exertion => self.exertion,
            Dimension::Stretch => self.stretch,
            Dimension::BodyParts => self.body_parts,
            Dimension::Attention => self.attention,
            Dimension::BodilyInterplay => self.bodily_interplay,
            Dimension::Duration => self.duration,
            Dimension::SpaceType => self.space_type,
        }
    }

    pub fn is_valid(&self) -> bool {
        Dimension::ALL
            .iter()
            .all(|&d| (0.0..=1.0).contains(&self.get(d)))
    }
}

/// Profiles of the three bundled games; numeric scores are the mean panel
/// ratings.
pub fn default_catalog() -> Vec<GameProfile> {
    vec![
        GameProfile {
            game: FROST.into(),
            exertion: 0.207,
            stretch: 0.349,
            body_parts: 0.206,
            attention: 0.228,
            bodily_interplay: 0.178,
            duration: 0.503,
            space_type: 0.458,
            start_time: StartTime::MidMeeting,
            layout: Layout::Symmetric,
        },
        GameProfile {
            game: FOOD_RAIN.into(),
            exertion: 0.462,
            stretch: 0.474,
            body_parts: 0.278,
            attention: 0.781,
            bodily_interplay: 0.414,
            duration: 0.478,
            space_type: 0.322,
            start_time: StartTime::Break,
            layout: Layout::Symmetric,
        },
        GameProfile {
            game: VIRUS_HITTER.into(),
            exertion: 0.551,
            stretch: 0.609,
            body_parts: 0.570,
            attention: 0.523,
            bodily_interplay: 0.858,
            duration: 0.491,
            space_type: 0.570,
            start_time: StartTime::Break,
            layout: Layout::Asymmetric,
        },
    ]
}
