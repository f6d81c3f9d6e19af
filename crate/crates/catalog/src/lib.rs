//! Design-space catalog for the bundled meeting games.
//!
//! Each game is profiled on seven numeric sub-dimensions in `[0, 1]` plus a
//! preferred start time and layout. The crate recommends games for a meeting
//! context, ingests panel ratings from CSV, summarizes them (mean, sample
//! SD, linearly interpolated quartiles) and exports interquartile bars.

mod dimension;
mod error;
mod plot;
mod profile;
mod ratings;
mod recommend;
mod stats;

pub use dimension::{Dimension, Layout, StartTime};
pub use error::CatalogError;
pub use plot::{iqr_plot_data, IqrSegment};
pub use profile::{default_catalog, GameProfile, FOOD_RAIN, FROST, VIRUS_HITTER};
pub use ratings::{parse_ratings_csv, write_ratings_csv, RatingRecord, RATINGS_HEADER};
pub use recommend::{
    distance, recommend, recommend_scaled, MeetingContext, MeetingPhase, Recommendation,
};
pub use stats::{aggregate_ratings, panel_fixture, quantile, DimensionStats, StatsTable};
