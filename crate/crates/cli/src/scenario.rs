use std::collections::BTreeSet;
use std::path::Path;

use chairplay_games::{GameConfig, GameKind};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

/// One motion pattern over a time window. Outside every segment a
/// participant holds the neutral pose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSegment {
    #[serde(flatten)]
    pub kind: SegmentKind,
    pub start_s: f64,
    pub len_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentKind {
    Still,
    /// Nose sways sideways: `x = 0.5 + A sin(2πt/P)`.
    Sway {
        amplitude: f64,
        period_s: f64,
    },
    /// Shoulder span breathes between 0.30 and 0.12 once per period.
    Twist {
        period_s: f64,
    },
    /// Nose bobs vertically: `y = 0.4 + A sin(2πt/P)`.
    Nod {
        amplitude: f64,
        period_s: f64,
    },
    /// Mouth opens for `open_s`, then closes for `closed_s`, repeating.
    Mouth {
        open_s: f64,
        closed_s: f64,
    },
    /// Closed loop: the head follows the next catchable fruit and the mouth
    /// opens when it reaches the catch box.
    ChaseItems {},
    /// The whole body zigzags across the tile, one horizontal pass per
    /// `period_s` and one vertical pass per four.
    Sweep {
        period_s: f64,
    },
}

impl TraceSegment {
    pub fn new(kind: SegmentKind, start_s: f64, len_s: f64) -> Self {
        Self {
            kind,
            start_s,
            len_s,
        }
    }

    pub fn end_s(&self) -> f64 {
        self.start_s + self.len_s
    }

    pub fn contains(&self, t_s: f64) -> bool {
        t_s >= self.start_s && t_s < self.end_s()
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::InvalidSegment(msg));
        if !(self.start_s >= 0.0 && self.start_s.is_finite()) {
            return bad(format!(
                "start_s must be a nonnegative number, got {}",
                self.start_s
            ));
        }
        if !(self.len_s > 0.0 && self.len_s.is_finite()) {
            return bad(format!("len_s must be positive, got {}", self.len_s));
        }
        let amplitude = |a: f64| a > 0.0 && a <= 0.5;
        let period = |p: f64| p > 0.0 && p.is_finite();
        match self.kind {
            SegmentKind::Still | SegmentKind::ChaseItems {} => Ok(()),
            SegmentKind::Sway {
                amplitude: a,
                period_s: p,
            }
            | SegmentKind::Nod {
                amplitude: a,
                period_s: p,
            } => {
                if !amplitude(a) {
                    bad(format!("amplitude must lie in (0, 0.5], got {a}"))
                } else if !period(p) {
                    bad(format!("period_s must be positive, got {p}"))
                } else {
                    Ok(())
                }
            }
            SegmentKind::Twist { period_s: p } | SegmentKind::Sweep { period_s: p } => {
                if period(p) {
                    Ok(())
                } else {
                    bad(format!("period_s must be positive, got {p}"))
                }
            }
            SegmentKind::Mouth { open_s, closed_s } => {
                if period(open_s) && period(closed_s) {
                    Ok(())
                } else {
                    bad(format!(
                        "open_s and closed_s must be positive, got {open_s} and {closed_s}"
                    ))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipantSpec {
    pub name: String,
    #[serde(default)]
    pub trace: Vec<TraceSegment>,
    /// Replaces `trace` if this participant is drawn as the Virus Hitter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hitter_trace: Option<Vec<TraceSegment>>,
}

impl ParticipantSpec {
    pub fn new(name: impl Into<String>, trace: Vec<TraceSegment>) -> Self {
        Self {
            name: name.into(),
            trace,
            hitter_trace: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub seed: u64,
    pub game: GameKind,
    pub duration_s: f64,
    pub participants: Vec<ParticipantSpec>,
    #[serde(default)]
    pub config: GameConfig,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| HarnessError::InvalidScenario(format!("{}: {e}", path.display())))
    }

    /// Whole 50 ms ticks in `duration_s`, at least one.
    pub fn ticks(&self) -> u64 {
        ((self.duration_s * 20.0).round() as u64).max(1)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::InvalidScenario(msg));
        if !(self.duration_s > 0.0 && self.duration_s.is_finite()) {
            return bad(format!(
                "duration_s must be positive, got {}",
                self.duration_s
            ));
        }
        if self.participants.is_empty() {
            return bad("at least one participant is required".into());
        }
        let mut names = BTreeSet::new();
        for p in &self.participants {
            if p.name.trim().is_empty() {
                return bad("participant names must not be empty".into());
            }
            if !names.insert(p.name.as_str()) {
                return bad(format!("duplicate participant name {:?}", p.name));
            }
            for trace in std::iter::once(&p.trace).chain(p.hitter_trace.as_ref()) {
                validate_trace(trace)?;
            }
        }
        self.config.validate()?;
        Ok(())
    }
}

fn validate_trace(trace: &[TraceSegment]) -> Result<(), HarnessError> {
    for s in trace {
        s.validate()?;
    }
    for w in trace.windows(2) {
        if w[1].start_s < w[0].end_s() {
            return Err(HarnessError::InvalidSegment(format!(
                "segment at {} s overlaps or precedes the one ending at {} s",
                w[1].start_s,
                w[0].end_s()
            )));
        }
    }
    Ok(())
}

/// The segment active at `t_s`, if any.
pub fn segment_at(trace: &[TraceSegment], t_s: f64) -> Option<&TraceSegment> {
    trace.iter().find(|s| s.contains(t_s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(trace: Vec<TraceSegment>) -> Scenario {
        Scenario {
            seed: 1,
            game: GameKind::Frost,
            duration_s: 10.0,
            participants: vec![ParticipantSpec::new("a", trace)],
            config: GameConfig::default(),
        }
    }

    #[test]
    fn json_shape() {
        let s = TraceSegment::new(
            SegmentKind::Sway {
                amplitude: 0.1,
                period_s: 2.0,
            },
            2.0,
            10.0,
        );
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"kind": "sway", "amplitude": 0.1, "period_s": 2.0, "start_s": 2.0, "len_s": 10.0})
        );
        let chase: TraceSegment =
            serde_json::from_str(r#"{"kind":"chase_items","start_s":0,"len_s":5}"#).unwrap();
        assert_eq!(chase.kind, SegmentKind::ChaseItems {});
    }

    #[test]
    fn validation() {
        assert!(scenario(vec![]).validate().is_ok());
        let still = |a, b| TraceSegment::new(SegmentKind::Still, a, b);
        assert!(scenario(vec![still(0.0, 2.0), still(2.0, 2.0)])
            .validate()
            .is_ok());
        assert!(scenario(vec![still(0.0, 2.0), still(1.0, 2.0)])
            .validate()
            .is_err());
        assert!(scenario(vec![still(3.0, 1.0), still(0.0, 1.0)])
            .validate()
            .is_err());
        assert!(scenario(vec![still(0.0, 0.0)]).validate().is_err());
        let sway = |a| {
            TraceSegment::new(
                SegmentKind::Sway {
                    amplitude: a,
                    period_s: 1.0,
                },
                0.0,
                1.0,
            )
        };
        assert!(scenario(vec![sway(0.5)]).validate().is_ok());
        assert!(scenario(vec![sway(0.6)]).validate().is_err());
        assert!(scenario(vec![sway(0.0)]).validate().is_err());
        let twist = TraceSegment::new(SegmentKind::Twist { period_s: 0.0 }, 0.0, 1.0);
        assert!(scenario(vec![twist]).validate().is_err());

        let mut s = scenario(vec![]);
        s.duration_s = 0.0;
        assert!(s.validate().is_err());
        let mut s = scenario(vec![]);
        s.participants.push(ParticipantSpec::new("a", vec![]));
        assert!(s.validate().is_err());
        let mut s = scenario(vec![]);
        s.participants.clear();
        assert!(s.validate().is_err());
    }

    #[test]
    fn tick_count() {
        let mut s = scenario(vec![]);
        assert_eq!(s.ticks(), 200);
        s.duration_s = 0.01;
        assert_eq!(s.ticks(), 1);
    }
}
