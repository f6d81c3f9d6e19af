use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dimension::Dimension;
use crate::error::CatalogError;
use crate::ratings::RatingRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; `None` below two ratings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sd: Option<f64>,
    pub q1: f64,
    pub q3: f64,
}

/// Stats keyed by `(game id, dimension)`.
pub type StatsTable = BTreeMap<(String, Dimension), DimensionStats>;

/// Linear-interpolation quantile of an ascending sample at `h = (n - 1) p`.
///
/// # Panics
/// If `sorted` is empty.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl DimensionStats {
    /// Summarizes a non-empty sample. Order of `values` does not matter.
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let mean = sorted.iter().sum::<f64>() / n as f64;
        let sd = (n >= 2).then(|| {
            let ss: f64 = sorted.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n - 1) as f64).sqrt()
        });
        Some(Self {
            n,
            mean,
            sd,
            q1: quantile(&sorted, 0.25),
            q3: quantile(&sorted, 0.75),
        })
    }
}

pub fn aggregate_ratings(records: &[RatingRecord]) -> Result<StatsTable, CatalogError> {
    let mut groups: BTreeMap<(String, Dimension), Vec<f64>> = BTreeMap::new();
    for r in records {
        if !(0.0..=1.0).contains(&r.value) {
            return Err(CatalogError::OutOfRange {
                game: r.game.clone(),
                dimension: r.dimension,
                value: r.value,
            });
        }
        groups
            .entry((r.game.clone(), r.dimension))
            .or_default()
            .push(r.value);
    }
    Ok(groups
        .into_iter()
        .filter_map(|(k, v)| DimensionStats::from_values(&v).map(|s| (k, s)))
        .collect())
}

const PANEL_TABLE: [(&str, Dimension, f64, f64, f64, f64); 21] = [
    ("food_rain", Dimension::Exertion, 0.462, 0.251, 0.306, 0.528),
    (
        "virus_hitter",
        Dimension::Exertion,
        0.551,
        0.156,
        0.466,
        0.649,
    ),
    ("frost", Dimension::Exertion, 0.207, 0.109, 0.158, 0.263),
    ("food_rain", Dimension::Stretch, 0.474, 0.276, 0.278, 0.636),
    (
        "virus_hitter",
        Dimension::Stretch,
        0.609,
        0.210,
        0.453,
        0.750,
    ),
    ("frost", Dimension::Stretch, 0.349, 0.144, 0.250, 0.418),
    (
        "food_rain",
        Dimension::BodyParts,
        0.278,
        0.172,
        0.157,
        0.430,
    ),
    (
        "virus_hitter",
        Dimension::BodyParts,
        0.570,
        0.212,
        0.419,
        0.750,
    ),
    ("frost", Dimension::BodyParts, 0.206, 0.220, 0.090, 0.236),
    (
        "food_rain",
        Dimension::Attention,
        0.781,
        0.256,
        0.703,
        0.984,
    ),
    (
        "virus_hitter",
        Dimension::Attention,
        0.523,
        0.276,
        0.422,
        0.690,
    ),
    ("frost", Dimension::Attention, 0.228, 0.160, 0.141, 0.306),
    (
        "food_rain",
        Dimension::BodilyInterplay,
        0.414,
        0.270,
        0.220,
        0.594,
    ),
    (
        "virus_hitter",
        Dimension::BodilyInterplay,
        0.858,
        0.176,
        0.799,
        1.000,
    ),
    (
        "frost",
        Dimension::BodilyInterplay,
        0.178,
        0.273,
        0.000,
        0.248,
    ),
    ("food_rain", Dimension::Duration, 0.478, 0.271, 0.337, 0.601),
    (
        "virus_hitter",
        Dimension::Duration,
        0.491,
        0.167,
        0.390,
        0.573,
    ),
    ("frost", Dimension::Duration, 0.503, 0.270, 0.282, 0.669),
    ("food_rain", Dimension::SpaceType, 0.322, 0.310, 0.08, 0.395),
    (
        "virus_hitter",
        Dimension::SpaceType,
        0.570,
        0.311,
        0.330,
        0.784,
    ),
    ("frost", Dimension::SpaceType, 0.458, 0.340, 0.225, 0.722),
];

/// Published panel statistics for the three bundled games (15 raters).
pub fn panel_fixture() -> StatsTable {
    PANEL_TABLE
        .iter()
        .map(|&(game, dimension, mean, sd, q1, q3)| {
            (
                (game.to_string(), dimension),
                DimensionStats {
                    n: 15,
                    mean,
                    sd: Some(sd),
                    q1,
                    q3,
                },
            )
        })
        .collect()
}
