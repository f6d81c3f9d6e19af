//! Headless scenario runner: synthesized frames feed a tracker and a game
//! one tick at a time, single threaded, with no clock but the tick counter.

use std::collections::BTreeMap;
use std::path::Path;

use chairplay_games::{
    leaderboard, GameKind, GameOutput, GameResults, GameSnapshot, GameState, LeaderboardEntry,
    Player, TickInput, DT, TICK_MS,
};
use chairplay_gesture::{
    GestureEvent, ParticipantId, PoseFrame, RepCounts, Tracker, TrackerParams,
};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::scenario::{segment_at, Scenario, SegmentKind, TraceSegment};
use crate::synth::{chase_pose, trace_pose};

/// Motion energy above this marks a tick as spent moving.
pub const MOVING_ENERGY: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipantMetrics {
    pub name: String,
    pub participant: ParticipantId,
    pub reps: RepCounts,
    /// Seconds of ticks whose motion energy exceeded [`MOVING_ENERGY`].
    pub movement_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub game: GameKind,
    pub seed: u64,
    pub duration_s: f64,
    /// Ticks actually executed; timed games may finish early.
    pub ticks: u64,
    pub participants: Vec<ParticipantMetrics>,
    pub results: GameResults,
    /// Per-participant Frost coverage after every tick; empty for other games.
    pub frost_coverage: BTreeMap<String, Vec<f64>>,
    pub leaderboard: Vec<LeaderboardEntry>,
}

/// Everything that happened in one tick.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub tick: u64,
    pub t_ms: u64,
    pub gestures: Vec<GestureEvent>,
    pub outputs: Vec<GameOutput>,
    pub state: GameSnapshot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub report: MetricsReport,
    pub snapshots: Vec<SnapshotRecord>,
}

fn pid(index: usize) -> ParticipantId {
    ParticipantId(index as u32 + 1)
}

pub fn run_scenario(scenario: &Scenario) -> Result<Run, HarnessError> {
    scenario.validate()?;
    let players: Vec<Player> = scenario
        .participants
        .iter()
        .enumerate()
        .map(|(i, p)| Player::new(pid(i), p.name.clone()))
        .collect();
    let mut tracker = Tracker::new(TrackerParams::default())?;
    for p in &players {
        tracker.register(p.id);
    }
    let mut game = GameState::new(scenario.game, &players, &scenario.config, scenario.seed)?;

    let hitter = match &game {
        GameState::VirusHitter(s) => Some(s.hitter.id),
        _ => None,
    };
    let traces: Vec<&[TraceSegment]> = scenario
        .participants
        .iter()
        .enumerate()
        .map(|(i, p)| match (&p.hitter_trace, hitter == Some(pid(i))) {
            (Some(t), true) => t.as_slice(),
            _ => p.trace.as_slice(),
        })
        .collect();

    let n = players.len();
    let mut reps = BTreeMap::new();
    let mut moving = vec![0u64; n];
    let mut coverage = vec![
        Vec::new();
        if scenario.game == GameKind::Frost {
            n
        } else {
            0
        }
    ];
    let mut snapshots = Vec::new();
    let mut ticks = 0;

    for k in 0..scenario.ticks() {
        let t_ms = k * TICK_MS;
        let frames: Vec<PoseFrame> = (0..n)
            .map(|i| PoseFrame {
                participant_id: pid(i),
                t_ms,
                keypoints: pose_for(&game, traces[i], pid(i), t_ms),
            })
            .collect();
        let gestures = tracker.ingest_batch(&frames)?;
        for e in &gestures {
            reps.entry(e.participant_id)
                .or_insert_with(RepCounts::default)
                .record(e.kind);
        }
        for (i, m) in moving.iter_mut().enumerate() {
            if tracker.motion_energy(pid(i))? > MOVING_ENERGY {
                *m += 1;
            }
        }
        let outputs = game.tick(TickInput {
            events: &gestures,
            frames: &frames,
        })?;
        for (i, series) in coverage.iter_mut().enumerate() {
            series.push(game.frost_coverage(pid(i))?);
        }
        ticks += 1;
        snapshots.push(SnapshotRecord {
            tick: game.tick_count(),
            t_ms,
            gestures,
            outputs,
            state: game.snapshot(),
        });
        if game.is_terminal() {
            break;
        }
    }

    let results = game.results(&reps);
    let scores: Vec<(String, i64)> = results
        .participants
        .iter()
        .map(|p| (p.nickname.clone(), p.score))
        .collect();
    let report = MetricsReport {
        game: scenario.game,
        seed: scenario.seed,
        duration_s: scenario.duration_s,
        ticks,
        participants: players
            .iter()
            .zip(&moving)
            .map(|(p, &m)| ParticipantMetrics {
                name: p.nickname.clone(),
                participant: p.id,
                reps: reps.get(&p.id).copied().unwrap_or_default(),
                movement_s: m as f64 * DT,
            })
            .collect(),
        results,
        frost_coverage: players
            .iter()
            .map(|p| p.nickname.clone())
            .zip(coverage)
            .collect(),
        leaderboard: leaderboard(&scores),
    };
    Ok(Run { report, snapshots })
}

fn pose_for(
    game: &GameState,
    trace: &[TraceSegment],
    id: ParticipantId,
    t_ms: u64,
) -> chairplay_gesture::KeypointSet {
    let chasing = segment_at(trace, t_ms as f64 / 1000.0)
        .is_some_and(|s| s.kind == SegmentKind::ChaseItems {});
    match game {
        GameState::FoodRain(s) if chasing => {
            let items = s.player(id).map(|p| p.items.as_slice()).unwrap_or_default();
            chase_pose(items, &s.config)
        }
        _ => trace_pose(trace, t_ms),
    }
}

/// Pretty JSON with keys sorted at every level, so equal reports produce
/// identical bytes.
pub fn report_json(report: &MetricsReport) -> String {
    let value = serde_json::to_value(report).expect("report serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

/// One compact JSON object per tick, keys sorted.
pub fn snapshots_jsonl(snapshots: &[SnapshotRecord]) -> String {
    let mut out = String::new();
    for s in snapshots {
        let value = serde_json::to_value(s).expect("snapshot serializes");
        out.push_str(&value.to_string());
        out.push('\n');
    }
    out
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_report(report: &MetricsReport, path: &Path) -> Result<(), HarnessError> {
    write(path, &report_json(report))
}

pub fn write_snapshots(snapshots: &[SnapshotRecord], path: &Path) -> Result<(), HarnessError> {
    write(path, &snapshots_jsonl(snapshots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ParticipantSpec;
    use chairplay_games::GameConfig;

    fn frost_still(secs: f64) -> Scenario {
        Scenario {
            seed: 3,
            game: GameKind::Frost,
            duration_s: secs,
            participants: vec![ParticipantSpec::new("a", vec![])],
            config: GameConfig::default(),
        }
    }

    #[test]
    fn series_length_matches_executed_ticks() {
        let run = run_scenario(&frost_still(5.0)).unwrap();
        assert_eq!(run.report.ticks, 100);
        assert_eq!(run.report.frost_coverage["a"].len(), 100);
        assert_eq!(run.snapshots.len(), 100);
        assert_eq!(run.snapshots[0].tick, 1);
        assert_eq!(run.snapshots[99].t_ms, 4950);
    }

    #[test]
    fn empty_series_is_valid_json() {
        let mut run = run_scenario(&frost_still(1.0)).unwrap();
        run.report.frost_coverage.insert("a".into(), Vec::new());
        let v: serde_json::Value = serde_json::from_str(&report_json(&run.report)).unwrap();
        assert_eq!(v["frost_coverage"]["a"], serde_json::json!([]));
    }

    #[test]
    fn report_round_trips() {
        let run = run_scenario(&frost_still(4.0)).unwrap();
        let back: MetricsReport = serde_json::from_str(&report_json(&run.report)).unwrap();
        assert_eq!(back, run.report);
    }

    #[test]
    fn unwritable_path_is_an_io_error() {
        let run = run_scenario(&frost_still(1.0)).unwrap();
        let err = write_report(&run.report, Path::new("/nonexistent-dir/report.json")).unwrap_err();
        assert_eq!(err.code(), "io-error");
    }

    #[test]
    fn too_few_players_is_rejected() {
        let mut s = frost_still(1.0);
        s.game = GameKind::VirusHitter;
        assert_eq!(run_scenario(&s).unwrap_err().code(), "scenario-invalid");
    }
}
