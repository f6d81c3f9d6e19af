//! Headless simulation harness for the chairplay games.
//!
//! A [`Scenario`] lists participants and the motion each performs over time.
//! [`run_scenario`] synthesizes their pose frames, runs them through gesture
//! tracking and a game engine tick by tick and returns a [`MetricsReport`]
//! plus a per-tick snapshot log. Runs are deterministic down to the byte.

mod error;
mod harness;
mod scenario;
mod synth;

pub use error::HarnessError;
pub use harness::{
    report_json, run_scenario, snapshots_jsonl, write_report, write_snapshots, MetricsReport,
    ParticipantMetrics, Run, SnapshotRecord, MOVING_ENERGY,
};
pub use scenario::{segment_at, ParticipantSpec, Scenario, SegmentKind, TraceSegment};
pub use synth::{chase_pose, chase_target, neutral, pose_at, synth_frames, trace_pose, MOUTH_Y};
