//! Gesture detection from streams of pose keypoints.
//!
//! Frames carry nine normalized landmarks per participant. A [`Tracker`]
//! turns them into debounced [`GestureEvent`]s (side sway, chair twist, neck
//! nod, mouth open/close) and a saturating motion-energy signal.

mod error;
mod event;
mod frame;
mod params;
mod tracker;
mod window;

pub use error::GestureError;
pub use event::{GestureEvent, GestureKind, RepCounts};
pub use frame::{
    mouth_aperture, Keypoint, KeypointSet, Landmark, ParticipantId, PoseFrame, MIN_CONFIDENCE,
};
pub use params::{Hysteresis, TrackerParams};
pub use tracker::{ParticipantTracker, Tracker};
