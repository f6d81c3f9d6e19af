//! Baseline-relative gesture detectors.
//!
//! Each participant owns a [`ParticipantTracker`]. Every frame first updates
//! the motion-energy window, then (once warm) runs the sway, twist, nod and
//! mouth detectors against baselines built from *earlier* frames, and only
//! then folds the frame into those baselines.

use std::collections::{BTreeMap, VecDeque};

use crate::error::GestureError;
use crate::event::{GestureEvent, GestureKind};
use crate::frame::{mouth_aspect_ratio, KeypointSet, ParticipantId, PoseFrame};
use crate::params::TrackerParams;
use crate::window::TimedWindow;

#[derive(Debug, Clone, Copy, PartialEq)]
enum SwayPhase {
    Neutral,
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ExcursionPhase {
    Rest,
    /// Holds the deepest excursion seen so far.
    Out(f64),
}

#[derive(Debug, Clone)]
pub struct ParticipantTracker {
    id: ParticipantId,
    params: TrackerParams,
    first_t_ms: Option<u64>,
    last_t_ms: Option<u64>,
    nose_x: TimedWindow,
    nose_y: TimedWindow,
    span: TimedWindow,
    previous: Option<KeypointSet>,
    /// `(t_ms, per-landmark displacement since the previous frame)`.
    displacements: VecDeque<(u64, [Option<f64>; 9])>,
    visible_now: usize,
    sway: SwayPhase,
    twist: ExcursionPhase,
    nod: ExcursionPhase,
    mouth_open: bool,
    refractory_until: [Option<u64>; 6],
}

impl ParticipantTracker {
    pub fn new(id: ParticipantId, params: TrackerParams) -> Result<Self, GestureError> {
        params.validate()?;
        Ok(Self {
            id,
            params,
            first_t_ms: None,
            last_t_ms: None,
            nose_x: TimedWindow::new(params.baseline_window_ms),
            nose_y: TimedWindow::new(params.baseline_window_ms),
            span: TimedWindow::new(params.span_window_ms),
            previous: None,
            displacements: VecDeque::new(),
            visible_now: 0,
            sway: SwayPhase::Neutral,
            twist: ExcursionPhase::Rest,
            nod: ExcursionPhase::Rest,
            mouth_open: false,
            refractory_until: [None; 6],
        })
    }

    pub fn id(&self) -> ParticipantId {
        self.id
    }

    pub fn params(&self) -> &TrackerParams {
        &self.params
    }

    pub fn last_t_ms(&self) -> Option<u64> {
        self.last_t_ms
    }

    pub fn is_warm(&self) -> bool {
        match (self.first_t_ms, self.last_t_ms) {
            (Some(first), Some(last)) => last - first >= self.params.warmup_ms,
            _ => false,
        }
    }

    /// Current mouth state. During warmup this can change without an event.
    pub fn mouth_open(&self) -> bool {
        self.mouth_open
    }

    /// Earliest time each kind may fire again; `None` when not gated.
    pub fn refractory_deadline(&self, kind: GestureKind) -> Option<u64> {
        self.refractory_until[kind.index()]
    }

    pub fn ingest(&mut self, frame: &PoseFrame) -> Result<Vec<GestureEvent>, GestureError> {
        let t = frame.t_ms;
        if let Some(last) = self.last_t_ms {
            if t <= last {
                return Err(GestureError::StaleFrame {
                    participant: self.id,
                    t_ms: t,
                    last_t_ms: last,
                });
            }
        }
        let k = frame.keypoints.clamped();
        self.first_t_ms.get_or_insert(t);
        self.last_t_ms = Some(t);

        self.record_displacements(t, &k);
        for slot in &mut self.refractory_until {
            if slot.is_some_and(|d| d <= t) {
                *slot = None;
            }
        }

        self.nose_x.evict(t);
        self.nose_y.evict(t);
        self.span.evict(t);

        let mut events = Vec::new();
        if self.is_warm() {
            self.detect_sway(t, &k, &mut events);
            self.detect_twist(t, &k, &mut events);
            self.detect_nod(t, &k, &mut events);
            self.detect_mouth(t, &k, &mut events);
        } else {
            // Mouth state needs no baseline; follow it silently so a mouth
            // held open through warmup does not fire afterwards.
            let mut muted = Vec::new();
            self.detect_mouth(t, &k, &mut muted);
        }

        if k.nose.is_visible() {
            self.nose_x.push(t, k.nose.x);
            self.nose_y.push(t, k.nose.y);
        }
        if let Some(span) = k.shoulder_span() {
            self.span.push(t, span);
        }
        self.previous = Some(k);
        Ok(events)
    }

    /// Mean windowed displacement over visible landmarks, saturated to `[0, 1]`.
    /// Always 0 during warmup.
    pub fn motion_energy(&self) -> f64 {
        if !self.is_warm() || self.visible_now == 0 {
            return 0.0;
        }
        // The displacement window was trimmed against the latest frame.
        let current = self.previous.expect("warm tracker has a frame").points();
        let mut total = 0.0;
        for (i, point) in current.iter().enumerate() {
            if !point.is_visible() {
                continue;
            }
            let sum: f64 = self.displacements.iter().filter_map(|(_, d)| d[i]).sum();
            total += sum;
        }
        let mean = total / self.visible_now as f64;
        (mean / self.params.energy_saturation).clamp(0.0, 1.0)
    }

    fn record_displacements(&mut self, t: u64, k: &KeypointSet) {
        let current = k.points();
        self.visible_now = current.iter().filter(|p| p.is_visible()).count();
        if let Some(prev) = self.previous {
            let prev = prev.points();
            let mut d = [None; 9];
            for i in 0..9 {
                if prev[i].is_visible() && current[i].is_visible() {
                    d[i] = Some(current[i].distance(&prev[i]));
                }
            }
            self.displacements.push_back((t, d));
        }
        let window = self.params.energy_window_ms;
        while let Some(&(te, _)) = self.displacements.front() {
            if t >= window && te <= t - window {
                self.displacements.pop_front();
            } else {
                break;
            }
        }
    }

    fn emit(&mut self, kind: GestureKind, t: u64, magnitude: f64, out: &mut Vec<GestureEvent>) {
        if self.refractory_until[kind.index()].is_some() {
            return;
        }
        let refractory = match kind {
            GestureKind::SwayLeft | GestureKind::SwayRight => self.params.sway_refractory_ms,
            GestureKind::TwistRep => self.params.twist_refractory_ms,
            GestureKind::NodRep => self.params.nod_refractory_ms,
            GestureKind::MouthOpen | GestureKind::MouthClose => self.params.mouth_refractory_ms,
        };
        if refractory > 0 {
            self.refractory_until[kind.index()] = Some(t + refractory);
        }
        out.push(GestureEvent {
            kind,
            participant_id: self.id,
            t_ms: t,
            magnitude,
        });
    }

    fn detect_sway(&mut self, t: u64, k: &KeypointSet, out: &mut Vec<GestureEvent>) {
        if !k.nose.is_visible() {
            return;
        }
        let Some(baseline) = self.nose_x.median() else {
            return;
        };
        let h = self.params.sway;
        let dev = k.nose.x - baseline;
        if self.sway != SwayPhase::Neutral && dev.abs() < h.release {
            self.sway = SwayPhase::Neutral;
        }
        // A jump straight across the baseline releases one side and may
        // trigger the other within the same frame.
        match self.sway {
            SwayPhase::Left if dev > 0.0 => self.sway = SwayPhase::Neutral,
            SwayPhase::Right if dev < 0.0 => self.sway = SwayPhase::Neutral,
            _ => {}
        }
        if self.sway == SwayPhase::Neutral && dev.abs() > h.trigger {
            let (phase, kind) = if dev < 0.0 {
                (SwayPhase::Left, GestureKind::SwayLeft)
            } else {
                (SwayPhase::Right, GestureKind::SwayRight)
            };
            self.sway = phase;
            self.emit(kind, t, h.magnitude(dev.abs()), out);
        }
    }

    fn detect_twist(&mut self, t: u64, k: &KeypointSet, out: &mut Vec<GestureEvent>) {
        let Some(span) = k.shoulder_span() else {
            return;
        };
        let Some(reference) = self.span.percentile(self.params.span_percentile) else {
            return;
        };
        if reference <= 1e-6 {
            return;
        }
        let h = self.params.twist;
        let compression = 1.0 - span / reference;
        match self.twist {
            ExcursionPhase::Rest if compression > h.trigger => {
                self.twist = ExcursionPhase::Out(compression);
            }
            ExcursionPhase::Out(deepest) => {
                if compression < h.release {
                    self.twist = ExcursionPhase::Rest;
                    self.emit(GestureKind::TwistRep, t, h.magnitude(deepest), out);
                } else {
                    self.twist = ExcursionPhase::Out(deepest.max(compression));
                }
            }
            ExcursionPhase::Rest => {}
        }
    }

    fn detect_nod(&mut self, t: u64, k: &KeypointSet, out: &mut Vec<GestureEvent>) {
        if !k.nose.is_visible() {
            return;
        }
        let Some(baseline) = self.nose_y.median() else {
            return;
        };
        let h = self.params.nod;
        let excursion = (k.nose.y - baseline).abs();
        match self.nod {
            ExcursionPhase::Rest if excursion > h.trigger => {
                self.nod = ExcursionPhase::Out(excursion);
            }
            ExcursionPhase::Out(peak) => {
                if excursion < h.release {
                    self.nod = ExcursionPhase::Rest;
                    self.emit(GestureKind::NodRep, t, h.magnitude(peak), out);
                } else {
                    self.nod = ExcursionPhase::Out(peak.max(excursion));
                }
            }
            ExcursionPhase::Rest => {}
        }
    }

    fn detect_mouth(&mut self, t: u64, k: &KeypointSet, out: &mut Vec<GestureEvent>) {
        // Missing landmarks leave the mouth state unchanged.
        let Ok(mar) = mouth_aspect_ratio(k) else {
            return;
        };
        let h = self.params.mouth;
        if !self.mouth_open && mar > h.trigger {
            self.mouth_open = true;
            self.emit(GestureKind::MouthOpen, t, h.magnitude(mar), out);
        } else if self.mouth_open && mar < h.release {
            self.mouth_open = false;
            let magnitude = ((h.release - mar) / h.release).clamp(0.0, 1.0);
            self.emit(GestureKind::MouthClose, t, magnitude, out);
        }
    }
}

/// Trackers for every registered participant of a session.
#[derive(Debug, Clone)]
pub struct Tracker {
    params: TrackerParams,
    participants: BTreeMap<ParticipantId, ParticipantTracker>,
}

impl Tracker {
    pub fn new(params: TrackerParams) -> Result<Self, GestureError> {
        params.validate()?;
        Ok(Self {
            params,
            participants: BTreeMap::new(),
        })
    }

    pub fn params(&self) -> &TrackerParams {
        &self.params
    }

    /// Returns `false` if the participant was already registered.
    pub fn register(&mut self, id: ParticipantId) -> bool {
        if self.participants.contains_key(&id) {
            return false;
        }
        let tracker = ParticipantTracker::new(id, self.params).expect("params validated");
        self.participants.insert(id, tracker);
        true
    }

    pub fn unregister(&mut self, id: ParticipantId) -> bool {
        self.participants.remove(&id).is_some()
    }

    pub fn participant(&self, id: ParticipantId) -> Option<&ParticipantTracker> {
        self.participants.get(&id)
    }

    pub fn ingest_frame(&mut self, frame: &PoseFrame) -> Result<Vec<GestureEvent>, GestureError> {
        self.participants
            .get_mut(&frame.participant_id)
            .ok_or(GestureError::UnknownParticipant(frame.participant_id))?
            .ingest(frame)
    }

    /// Ingests frames in order, stopping at the first error.
    pub fn ingest_batch<'a>(
        &mut self,
        frames: impl IntoIterator<Item = &'a PoseFrame>,
    ) -> Result<Vec<GestureEvent>, GestureError> {
        let mut events = Vec::new();
        for frame in frames {
            events.extend(self.ingest_frame(frame)?);
        }
        Ok(events)
    }

    pub fn motion_energy(&self, id: ParticipantId) -> Result<f64, GestureError> {
        self.participant(id)
            .map(ParticipantTracker::motion_energy)
            .ok_or(GestureError::UnknownParticipant(id))
    }
}
