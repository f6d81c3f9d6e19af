use serde::{Deserialize, Serialize};

use crate::error::GestureError;

/// Trigger/release pair. An excursion past `trigger` fires; the detector
/// re-arms only after the excursion falls back below `release`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hysteresis {
    pub trigger: f64,
    pub release: f64,
}

impl Hysteresis {
    pub const fn new(trigger: f64, release: f64) -> Self {
        Self { trigger, release }
    }

    /// `(excursion - trigger) / trigger`, clamped to `[0, 1]`.
    pub(crate) fn magnitude(&self, excursion: f64) -> f64 {
        ((excursion - self.trigger) / self.trigger).clamp(0.0, 1.0)
    }

    fn validate(&self, name: &str) -> Result<(), GestureError> {
        if !(self.trigger > 0.0 && self.release > 0.0) {
            return Err(GestureError::InvalidParams(format!(
                "{name}: thresholds must be positive"
            )));
        }
        if self.release >= self.trigger {
            return Err(GestureError::InvalidParams(format!(
                "{name}: release {} must be below trigger {}",
                self.release, self.trigger
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrackerParams {
    /// Nose-x deviation from its rolling median.
    pub sway: Hysteresis,
    /// Shoulder-span compression, `1 - span / reference_span`. The defaults
    /// enter below 0.6x the reference span and complete above 0.8x.
    pub twist: Hysteresis,
    /// Absolute nose-y deviation from its rolling median.
    pub nod: Hysteresis,
    /// Mouth aspect ratio: opens above `trigger`, closes below `release`.
    pub mouth: Hysteresis,
    pub sway_refractory_ms: u64,
    pub twist_refractory_ms: u64,
    pub nod_refractory_ms: u64,
    pub mouth_refractory_ms: u64,
    pub warmup_ms: u64,
    pub baseline_window_ms: u64,
    pub span_window_ms: u64,
    pub span_percentile: f64,
    pub energy_window_ms: u64,
    pub energy_saturation: f64,
}

impl Default for TrackerParams {
    fn default() -> Self {
        Self {
            sway: Hysteresis::new(0.08, 0.04),
            twist: Hysteresis::new(0.4, 0.2),
            nod: Hysteresis::new(0.05, 0.02),
            mouth: Hysteresis::new(0.35, 0.25),
            sway_refractory_ms: 300,
            twist_refractory_ms: 500,
            nod_refractory_ms: 400,
            mouth_refractory_ms: 0,
            warmup_ms: 2000,
            baseline_window_ms: 2000,
            span_window_ms: 5000,
            span_percentile: 0.95,
            energy_window_ms: 500,
            energy_saturation: 0.05,
        }
    }
}

impl TrackerParams {
    pub fn validate(&self) -> Result<(), GestureError> {
        self.sway.validate("sway")?;
        self.twist.validate("twist")?;
        self.nod.validate("nod")?;
        self.mouth.validate("mouth")?;
        if self.twist.trigger >= 1.0 {
            return Err(GestureError::InvalidParams(
                "twist: compression trigger must be below 1".into(),
            ));
        }
        if self.baseline_window_ms == 0 || self.span_window_ms == 0 || self.energy_window_ms == 0 {
            return Err(GestureError::InvalidParams(
                "window lengths must be positive".into(),
            ));
        }
        if !(self.span_percentile > 0.0 && self.span_percentile <= 1.0) {
            return Err(GestureError::InvalidParams(
                "span percentile must lie in (0, 1]".into(),
            ));
        }
        if !(self.energy_saturation > 0.0) {
            return Err(GestureError::InvalidParams(
                "energy saturation must be positive".into(),
            ));
        }
        Ok(())
    }
}
