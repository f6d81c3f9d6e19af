//! Pose and event builders shared by unit tests.

use chairplay_gesture::{
    GestureEvent, GestureKind, Keypoint, KeypointSet, ParticipantId, PoseFrame,
};

pub fn neutral_pose() -> KeypointSet {
    KeypointSet {
        nose: Keypoint::at(0.5, 0.4),
        left_eye: Keypoint::at(0.45, 0.36),
        right_eye: Keypoint::at(0.55, 0.36),
        left_shoulder: Keypoint::at(0.35, 0.55),
        right_shoulder: Keypoint::at(0.65, 0.55),
        mouth_left: Keypoint::at(0.46, 0.47),
        mouth_right: Keypoint::at(0.54, 0.47),
        mouth_top: Keypoint::at(0.5, 0.465),
        mouth_bottom: Keypoint::at(0.5, 0.475),
    }
}

pub fn frame_with_mouth_at(id: ParticipantId, t_ms: u64, x: f64, y: f64) -> PoseFrame {
    let mut k = neutral_pose();
    k.mouth_left = Keypoint::at(x - 0.04, y);
    k.mouth_right = Keypoint::at(x + 0.04, y);
    PoseFrame {
        participant_id: id,
        t_ms,
        keypoints: k,
    }
}

pub fn frame_with_nose_x(id: ParticipantId, t_ms: u64, x: f64) -> PoseFrame {
    let mut k = neutral_pose();
    k.nose.x = x;
    PoseFrame {
        participant_id: id,
        t_ms,
        keypoints: k,
    }
}

fn event(id: ParticipantId, t_ms: u64, kind: GestureKind) -> GestureEvent {
    GestureEvent {
        kind,
        participant_id: id,
        t_ms,
        magnitude: 0.5,
    }
}

pub fn mouth_event(id: ParticipantId, t_ms: u64, kind: GestureKind) -> GestureEvent {
    event(id, t_ms, kind)
}

pub fn twist(id: ParticipantId, t_ms: u64) -> GestureEvent {
    event(id, t_ms, GestureKind::TwistRep)
}
