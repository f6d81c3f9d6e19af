//! Closed-form pose synthesis at 20 Hz.

use std::f64::consts::PI;

use chairplay_games::{FoodItem, FoodKind, FoodRainConfig, DT, TICK_MS};
use chairplay_gesture::{Keypoint, KeypointSet, Landmark, ParticipantId, PoseFrame};

use crate::error::HarnessError;
use crate::scenario::{SegmentKind, TraceSegment};

/// Height of the mouth-corner midpoint in the neutral pose.
pub const MOUTH_Y: f64 = 0.47;

const SWEEP_X: f64 = 0.4;
const SWEEP_Y: f64 = 0.35;

pub fn neutral() -> KeypointSet {
    KeypointSet {
        nose: Keypoint::at(0.5, 0.4),
        left_eye: Keypoint::at(0.45, 0.36),
        right_eye: Keypoint::at(0.55, 0.36),
        left_shoulder: Keypoint::at(0.35, 0.55),
        right_shoulder: Keypoint::at(0.65, 0.55),
        mouth_left: Keypoint::at(0.46, MOUTH_Y),
        mouth_right: Keypoint::at(0.54, MOUTH_Y),
        mouth_top: Keypoint::at(0.5, 0.465),
        mouth_bottom: Keypoint::at(0.5, 0.475),
    }
}

fn is_head(l: Landmark) -> bool {
    !matches!(l, Landmark::LeftShoulder | Landmark::RightShoulder)
}

fn shift_head(k: KeypointSet, dx: f64, dy: f64) -> KeypointSet {
    k.map_points(|l, x, y| if is_head(l) { (x + dx, y + dy) } else { (x, y) })
}

/// Mouth aspect ratio 0.5, well above the open threshold.
fn open_mouth(mut k: KeypointSet) -> KeypointSet {
    k.mouth_top.y = k.mouth_left.y - 0.02;
    k.mouth_bottom.y = k.mouth_left.y + 0.02;
    k
}

/// Triangle wave in `[-1, 1]` with unit period, rising through 0 at `u = 0`.
fn triangle(u: f64) -> f64 {
    1.0 - 4.0 * ((u + 0.25).rem_euclid(1.0) - 0.5).abs()
}

/// Open-loop pose `local_s` seconds into a segment of this kind.
/// `ChaseItems` with nothing to chase holds the neutral pose.
pub fn pose_at(kind: &SegmentKind, local_s: f64) -> KeypointSet {
    let k = neutral();
    match *kind {
        SegmentKind::Still | SegmentKind::ChaseItems {} => k,
        SegmentKind::Sway {
            amplitude,
            period_s,
        } => shift_head(k, amplitude * (2.0 * PI * local_s / period_s).sin(), 0.0),
        SegmentKind::Nod {
            amplitude,
            period_s,
        } => shift_head(k, 0.0, amplitude * (2.0 * PI * local_s / period_s).sin()),
        SegmentKind::Twist { period_s } => {
            let span = 0.30 * (0.7 + 0.3 * (2.0 * PI * local_s / period_s).cos());
            let mut k = k;
            k.left_shoulder.x = 0.5 - span / 2.0;
            k.right_shoulder.x = 0.5 + span / 2.0;
            k
        }
        SegmentKind::Mouth { open_s, closed_s } => {
            if local_s.rem_euclid(open_s + closed_s) < open_s {
                open_mouth(k)
            } else {
                k
            }
        }
        SegmentKind::Sweep { period_s } => {
            let dx = SWEEP_X * triangle(local_s / period_s);
            let dy = SWEEP_Y * triangle(local_s / (4.0 * period_s));
            k.map_points(|_, x, y| (x + dx, y + dy))
        }
    }
}

/// Pose at absolute time `t_ms` for a trace; neutral between segments.
pub fn trace_pose(trace: &[TraceSegment], t_ms: u64) -> KeypointSet {
    let t_s = t_ms as f64 / 1000.0;
    match crate::scenario::segment_at(trace, t_s) {
        Some(s) => pose_at(&s.kind, t_s - s.start_s),
        None => neutral(),
    }
}

/// Frames for one segment at the 20 Hz tick rate, starting at its start.
pub fn synth_frames(
    segment: &TraceSegment,
    participant: ParticipantId,
) -> Result<Vec<PoseFrame>, HarnessError> {
    segment.validate()?;
    let start_ms = (segment.start_s * 1000.0).round() as u64;
    let n = ((segment.len_s * 20.0).round() as u64).max(1);
    Ok((0..n)
        .map(|i| {
            let t_ms = start_ms + i * TICK_MS;
            PoseFrame {
                participant_id: participant,
                t_ms,
                keypoints: pose_at(&segment.kind, (i * TICK_MS) as f64 / 1000.0),
            }
        })
        .collect())
}

/// The fruit a chaser goes for: the lowest one that has not yet fallen past
/// the catch box after this tick's fall. Ties go to the older item.
pub fn chase_target<'a>(items: &'a [FoodItem], config: &FoodRainConfig) -> Option<&'a FoodItem> {
    let reach = MOUTH_Y + config.catch_half_height;
    items
        .iter()
        .filter(|i| i.kind == FoodKind::Fruit && i.y + config.fall_speed * DT <= reach)
        .fold(None, |best: Option<&FoodItem>, i| match best {
            Some(b) if b.y > i.y || (b.y == i.y && b.id < i.id) => Some(b),
            _ => Some(i),
        })
}

/// Chase policy pose given the items in this participant's tile before the
/// tick: the head moves under the target and the mouth opens once the target
/// will be inside the catch box.
pub fn chase_pose(items: &[FoodItem], config: &FoodRainConfig) -> KeypointSet {
    let Some(target) = chase_target(items, config) else {
        return neutral();
    };
    let k = shift_head(neutral(), target.x - 0.5, 0.0);
    let next_y = target.y + config.fall_speed * DT;
    if (next_y - MOUTH_Y).abs() <= config.catch_half_height {
        open_mouth(k)
    } else {
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chairplay_gesture::mouth_aperture;

    fn mar(k: KeypointSet) -> f64 {
        mouth_aperture(&PoseFrame {
            participant_id: ParticipantId(1),
            t_ms: 0,
            keypoints: k,
        })
        .unwrap()
    }

    #[test]
    fn still_second_is_twenty_identical_frames() {
        let frames = synth_frames(
            &TraceSegment::new(SegmentKind::Still, 1.0, 1.0),
            ParticipantId(3),
        )
        .unwrap();
        assert_eq!(frames.len(), 20);
        assert!(frames.iter().all(|f| f.keypoints == neutral()));
        assert_eq!(frames[0].t_ms, 1000);
        assert_eq!(frames[19].t_ms, 1950);
    }

    #[test]
    fn closed_forms() {
        let sway = pose_at(
            &SegmentKind::Sway {
                amplitude: 0.1,
                period_s: 2.0,
            },
            0.5,
        );
        assert!((sway.nose.x - 0.6).abs() < 1e-12);
        let nod = pose_at(
            &SegmentKind::Nod {
                amplitude: 0.05,
                period_s: 2.0,
            },
            1.5,
        );
        assert!((nod.nose.y - 0.35).abs() < 1e-12);
        let twist = pose_at(&SegmentKind::Twist { period_s: 2.0 }, 1.0);
        assert!((twist.shoulder_span().unwrap() - 0.12).abs() < 1e-12);
        assert!((twist.left_shoulder.x + twist.right_shoulder.x - 1.0).abs() < 1e-12);
        let twist = pose_at(&SegmentKind::Twist { period_s: 2.0 }, 0.0);
        assert!((twist.shoulder_span().unwrap() - 0.30).abs() < 1e-12);
    }

    #[test]
    fn mouth_alternates_across_thresholds() {
        let kind = SegmentKind::Mouth {
            open_s: 1.0,
            closed_s: 0.5,
        };
        assert!(mar(pose_at(&kind, 0.2)) > 0.35);
        assert!(mar(pose_at(&kind, 1.2)) < 0.25);
        assert!(mar(pose_at(&kind, 1.6)) > 0.35);
        assert!(mar(neutral()) < 0.25);
    }

    #[test]
    fn triangle_wave() {
        for (u, want) in [
            (0.0, 0.0),
            (0.25, 1.0),
            (0.5, 0.0),
            (0.75, -1.0),
            (1.0, 0.0),
            (1.25, 1.0),
        ] {
            assert!((triangle(u) - want).abs() < 1e-12, "{u}");
        }
    }

    #[test]
    fn chase_picks_the_lowest_catchable_fruit() {
        let cfg = FoodRainConfig::default();
        let item = |id, kind, x, y| FoodItem { id, kind, x, y };
        let items = [
            item(0, FoodKind::Fruit, 0.2, 0.6),
            item(1, FoodKind::Dessert, 0.3, 0.45),
            item(2, FoodKind::Fruit, 0.7, 0.30),
            item(3, FoodKind::Fruit, 0.8, 0.10),
        ];
        assert_eq!(chase_target(&items, &cfg).unwrap().id, 2);
        let k = chase_pose(&items, &cfg);
        assert!((k.mouth_center().unwrap().0 - 0.7).abs() < 1e-12);
        assert!(mar(k) < 0.25);

        let close = [item(4, FoodKind::Fruit, 0.25, 0.42)];
        let k = chase_pose(&close, &cfg);
        assert!(mar(k) > 0.35);
        assert_eq!(chase_pose(&[], &cfg), neutral());
    }
}
