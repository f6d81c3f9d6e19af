use serde::{Deserialize, Serialize};

use crate::dimension::Dimension;
use crate::error::CatalogError;
use crate::stats::StatsTable;

/// One horizontal interquartile bar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IqrSegment {
    pub game: String,
    pub dimension: Dimension,
    pub q1: f64,
    pub q3: f64,
    pub mean: f64,
}

/// One segment per `(game, dimension)`, ordered by dimension then game id.
pub fn iqr_plot_data(stats: &StatsTable) -> Result<Vec<IqrSegment>, CatalogError> {
    let mut segments = Vec::with_capacity(stats.len());
    for ((game, dimension), s) in stats {
        if s.q1 > s.q3 {
            return Err(CatalogError::InvertedInterval {
                game: game.clone(),
                dimension: *dimension,
                q1: s.q1,
                q3: s.q3,
            });
        }
        segments.push(IqrSegment {
            game: game.clone(),
            dimension: *dimension,
            q1: s.q1,
            q3: s.q3,
            mean: s.mean,
        });
    }
    segments.sort_by(|a, b| (a.dimension, &a.game).cmp(&(b.dimension, &b.game)));
    Ok(segments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{panel_fixture, DimensionStats};

    #[test]
    fn inverted_interval() {
        let mut t = StatsTable::new();
        t.insert(
            ("frost".into(), Dimension::Stretch),
            DimensionStats {
                n: 3,
                mean: 0.5,
                sd: None,
                q1: 0.6,
                q3: 0.4,
            },
        );
        assert!(matches!(
            iqr_plot_data(&t),
            Err(CatalogError::InvertedInterval { .. })
        ));
    }

    #[test]
    fn fixture_segments_are_grouped_by_dimension() {
        let segs = iqr_plot_data(&panel_fixture()).unwrap();
        assert_eq!(segs.len(), 21);
        assert_eq!(segs[0].dimension, Dimension::Exertion);
        assert_eq!(segs[0].game, "food_rain");
        assert_eq!(segs[20].dimension, Dimension::SpaceType);
    }
}
