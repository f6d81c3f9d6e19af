//! Pose frames and the nine-point keypoint schema.

use serde::{Deserialize, Serialize};

use crate::error::GestureError;

/// Keypoints below this confidence are treated as missing.
pub const MIN_CONFIDENCE: f64 = 0.3;

/// Opaque participant identifier, unique within a session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParticipantId(pub u32);

impl std::fmt::Display for ParticipantId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// A single landmark in normalized tile coordinates.
///
/// Serialized as `[x, y, confidence]`. Construction and deserialization clamp
/// every component to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Keypoint {
    pub x: f64,
    pub y: f64,
    pub confidence: f64,
}

impl Keypoint {
    pub const MISSING: Keypoint = Keypoint {
        x: 0.0,
        y: 0.0,
        confidence: 0.0,
    };

    pub fn new(x: f64, y: f64, confidence: f64) -> Self {
        Self {
            x: clamp_unit(x),
            y: clamp_unit(y),
            confidence: clamp_unit(confidence),
        }
    }

    /// A fully confident point.
    pub fn at(x: f64, y: f64) -> Self {
        Self::new(x, y, 1.0)
    }

    pub fn is_visible(&self) -> bool {
        self.confidence >= MIN_CONFIDENCE
    }

    pub fn clamped(self) -> Self {
        Self::new(self.x, self.y, self.confidence)
    }

    pub fn distance(&self, other: &Keypoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<[f64; 3]> for Keypoint {
    fn from([x, y, c]: [f64; 3]) -> Self {
        Keypoint::new(x, y, c)
    }
}

impl From<Keypoint> for [f64; 3] {
    fn from(k: Keypoint) -> Self {
        [k.x, k.y, k.confidence]
    }
}

/// NaN maps to 0 so a bad tracker value can never poison a baseline.
fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

/// Names of the nine tracked landmarks, in schema order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Landmark {
    Nose,
    LeftEye,
    RightEye,
    LeftShoulder,
    RightShoulder,
    MouthLeft,
    MouthRight,
    MouthTop,
    MouthBottom,
}

impl Landmark {
    pub const ALL: [Landmark; 9] = [
        Landmark::Nose,
        Landmark::LeftEye,
        Landmark::RightEye,
        Landmark::LeftShoulder,
        Landmark::RightShoulder,
        Landmark::MouthLeft,
        Landmark::MouthRight,
        Landmark::MouthTop,
        Landmark::MouthBottom,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeypointSet {
    pub nose: Keypoint,
    pub left_eye: Keypoint,
    pub right_eye: Keypoint,
    pub left_shoulder: Keypoint,
    pub right_shoulder: Keypoint,
    pub mouth_left: Keypoint,
    pub mouth_right: Keypoint,
    pub mouth_top: Keypoint,
    pub mouth_bottom: Keypoint,
}

impl KeypointSet {
    pub fn get(&self, landmark: Landmark) -> &Keypoint {
        match landmark {
            Landmark::Nose => &self.nose,
            Landmark::LeftEye => &self.left_eye,
            Landmark::RightEye => &self.right_eye,
            Landmark::LeftShoulder => &self.left_shoulder,
            Landmark::RightShoulder => &self.right_shoulder,
            Landmark::MouthLeft => &self.mouth_left,
            Landmark::MouthRight => &self.mouth_right,
            Landmark::MouthTop => &self.mouth_top,
            Landmark::MouthBottom => &self.mouth_bottom,
        }
    }

    pub fn get_mut(&mut self, landmark: Landmark) -> &mut Keypoint {
        match landmark {
            Landmark::Nose => &mut self.nose,
            Landmark::LeftEye => &mut self.left_eye,
            Landmark::RightEye => &mut self.right_eye,
            Landmark::LeftShoulder => &mut self.left_shoulder,
            Landmark::RightShoulder => &mut self.right_shoulder,
            Landmark::MouthLeft => &mut self.mouth_left,
            Landmark::MouthRight => &mut self.mouth_right,
            Landmark::MouthTop => &mut self.mouth_top,
            Landmark::MouthBottom => &mut self.mouth_bottom,
        }
    }

    /// Keypoints in schema order.
    pub fn points(&self) -> [Keypoint; 9] {
        Landmark::ALL.map(|l| *self.get(l))
    }

    pub fn clamped(mut self) -> Self {
        for l in Landmark::ALL {
            let k = self.get_mut(l);
            *k = k.clamped();
        }
        self
    }

    /// Applies `f` to every landmark position, keeping confidences.
    pub fn map_points(mut self, mut f: impl FnMut(Landmark, f64, f64) -> (f64, f64)) -> Self {
        for l in Landmark::ALL {
            let k = self.get_mut(l);
            let (x, y) = f(l, k.x, k.y);
            *k = Keypoint::new(x, y, k.confidence);
        }
        self
    }

    /// Midpoint of the mouth corners, if both are visible.
    pub fn mouth_center(&self) -> Option<(f64, f64)> {
        let (l, r) = (self.mouth_left, self.mouth_right);
        (l.is_visible() && r.is_visible()).then(|| ((l.x + r.x) / 2.0, (l.y + r.y) / 2.0))
    }

    /// Horizontal distance between the shoulders, if both are visible.
    pub fn shoulder_span(&self) -> Option<f64> {
        let (l, r) = (self.left_shoulder, self.right_shoulder);
        (l.is_visible() && r.is_visible()).then(|| (r.x - l.x).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseFrame {
    pub participant_id: ParticipantId,
    pub t_ms: u64,
    pub keypoints: KeypointSet,
}

/// Mouth aspect ratio: vertical opening over mouth width.
pub fn mouth_aperture(frame: &PoseFrame) -> Result<f64, GestureError> {
    mouth_aspect_ratio(&frame.keypoints)
}

pub(crate) fn mouth_aspect_ratio(k: &KeypointSet) -> Result<f64, GestureError> {
    let pts = [k.mouth_top, k.mouth_bottom, k.mouth_left, k.mouth_right];
    if pts.iter().any(|p| !p.is_visible()) {
        return Err(GestureError::MissingLandmarks);
    }
    let height = (k.mouth_top.y - k.mouth_bottom.y).abs();
    let width = (k.mouth_right.x - k.mouth_left.x).abs().max(1e-6);
    Ok(height / width)
}
