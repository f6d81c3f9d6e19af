use serde::{Deserialize, Serialize};

use crate::frame::ParticipantId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GestureKind {
    SwayLeft,
    SwayRight,
    TwistRep,
    NodRep,
    MouthOpen,
    MouthClose,
}

impl GestureKind {
    pub const ALL: [GestureKind; 6] = [
        GestureKind::SwayLeft,
        GestureKind::SwayRight,
        GestureKind::TwistRep,
        GestureKind::NodRep,
        GestureKind::MouthOpen,
        GestureKind::MouthClose,
    ];

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GestureEvent {
    pub kind: GestureKind,
    pub participant_id: ParticipantId,
    /// Timestamp of the frame that triggered the event.
    pub t_ms: u64,
    /// Excursion past the trigger threshold, relative to it, clamped to `[0, 1]`.
    pub magnitude: f64,
}

/// Per-kind event tally for one participant.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepCounts {
    pub sway_left: u32,
    pub sway_right: u32,
    pub twist: u32,
    pub nod: u32,
    pub mouth_open: u32,
    pub mouth_close: u32,
}

impl RepCounts {
    pub fn record(&mut self, kind: GestureKind) {
        *self.get_mut(kind) += 1;
    }

    pub fn get(&self, kind: GestureKind) -> u32 {
        match kind {
            GestureKind::SwayLeft => self.sway_left,
            GestureKind::SwayRight => self.sway_right,
            GestureKind::TwistRep => self.twist,
            GestureKind::NodRep => self.nod,
            GestureKind::MouthOpen => self.mouth_open,
            GestureKind::MouthClose => self.mouth_close,
        }
    }

    fn get_mut(&mut self, kind: GestureKind) -> &mut u32 {
        match kind {
            GestureKind::SwayLeft => &mut self.sway_left,
            GestureKind::SwayRight => &mut self.sway_right,
            GestureKind::TwistRep => &mut self.twist,
            GestureKind::NodRep => &mut self.nod,
            GestureKind::MouthOpen => &mut self.mouth_open,
            GestureKind::MouthClose => &mut self.mouth_close,
        }
    }

    pub fn from_events<'a>(events: impl IntoIterator<Item = &'a GestureEvent>) -> Self {
        let mut counts = Self::default();
        for e in events {
            counts.record(e.kind);
        }
        counts
    }
}
