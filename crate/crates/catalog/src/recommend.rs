use serde::{Deserialize, Serialize};

use crate::dimension::{Dimension, Layout, StartTime};
use crate::error::CatalogError;
use crate::profile::GameProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeetingPhase {
    Break,
    MidMeeting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeetingContext {
    pub phase: MeetingPhase,
    /// `Symmetric` or `Asymmetric`; `Either` is rejected.
    pub layout: Layout,
    /// 1 = fully private surroundings.
    pub privacy: f64,
    pub attention_budget: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub desired_exertion: Option<f64>,
    pub minutes_available: f64,
}

impl MeetingContext {
    pub fn new(phase: MeetingPhase, layout: Layout, privacy: f64, attention_budget: f64) -> Self {
        Self {
            phase,
            layout,
            privacy,
            attention_budget,
            desired_exertion: None,
            minutes_available: 5.0,
        }
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(CatalogError::InvalidContext(format!(
                    "{name} {v} outside [0, 1]"
                )))
            }
        };
        unit("privacy", self.privacy)?;
        unit("attention_budget", self.attention_budget)?;
        if let Some(e) = self.desired_exertion {
            unit("desired_exertion", e)?;
        }
        if self.layout == Layout::Either {
            return Err(CatalogError::InvalidContext(
                "layout must be symmetric or asymmetric".into(),
            ));
        }
        if !(self.minutes_available > 0.0) {
            return Err(CatalogError::InvalidContext(format!(
                "minutes_available {} must be positive",
                self.minutes_available
            )));
        }
        Ok(())
    }

    /// `(dimension, target)` pairs the score is measured against.
    pub fn targets(&self) -> Vec<(Dimension, f64)> {
        let mut t = vec![(Dimension::Attention, self.attention_budget)];
        if let Some(e) = self.desired_exertion {
            t.push((Dimension::Exertion, e));
        }
        t.push((Dimension::SpaceType, 1.0 - self.privacy));
        t
    }

    /// Whether the game's categorical fields allow it in this context.
    pub fn admits(&self, p: &GameProfile) -> bool {
        let time_ok = match (p.start_time, self.phase) {
            (StartTime::Either, _) => true,
            (StartTime::Break, MeetingPhase::Break) => true,
            (StartTime::MidMeeting, MeetingPhase::MidMeeting) => true,
            _ => false,
        };
        time_ok && (p.layout == Layout::Either || p.layout == self.layout)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub game: String,
    pub score: f64,
}

/// Mean absolute distance between the profile and the context targets.
pub fn distance(ctx: &MeetingContext, p: &GameProfile) -> f64 {
    let targets = ctx.targets();
    let sum: f64 = targets.iter().map(|&(d, t)| (p.get(d) - t).abs()).sum();
    sum / targets.len() as f64
}

/// Admitted games ranked by `1 - mean|profile - target|`, best first; ties
/// keep catalog order.
pub fn recommend(
    ctx: &MeetingContext,
    catalog: &[GameProfile],
) -> Result<Vec<Recommendation>, CatalogError> {
    recommend_scaled(ctx, catalog, 1.0)
}

/// Like [`recommend`] with distances multiplied by `scale`. Scores are not
/// clamped, so only the ordering is meaningful for `scale > 1`.
pub fn recommend_scaled(
    ctx: &MeetingContext,
    catalog: &[GameProfile],
    scale: f64,
) -> Result<Vec<Recommendation>, CatalogError> {
    if catalog.is_empty() {
        return Err(CatalogError::EmptyCatalog);
    }
    ctx.validate()?;
    let mut ranked: Vec<Recommendation> = catalog
        .iter()
        .filter(|p| ctx.admits(p))
        .map(|p| Recommendation {
            game: p.game.clone(),
            score: 1.0 - scale * distance(ctx, p),
        })
        .collect();
    ranked.sort_by(|a, b| b.score.total_cmp(&a.score));
    Ok(ranked)
}
