use std::collections::VecDeque;

/// Samples kept for a trailing time span ending at the most recent frame.
#[derive(Debug, Clone)]
pub(crate) struct TimedWindow {
    span_ms: u64,
    samples: VecDeque<(u64, f64)>,
}

impl TimedWindow {
    pub fn new(span_ms: u64) -> Self {
        Self {
            span_ms,
            samples: VecDeque::new(),
        }
    }

    /// Drops samples at or before `now - span`.
    pub fn evict(&mut self, now_ms: u64) {
        let cutoff = now_ms.saturating_sub(self.span_ms);
        while let Some(&(t, _)) = self.samples.front() {
            if now_ms >= self.span_ms && t <= cutoff {
                self.samples.pop_front();
            } else {
                break;
            }
        }
    }

    pub fn push(&mut self, t_ms: u64, value: f64) {
        self.samples.push_back((t_ms, value));
    }

    fn sorted(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.samples.iter().map(|&(_, x)| x).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn median(&self) -> Option<f64> {
        let v = self.sorted();
        let n = v.len();
        match n {
            0 => None,
            _ if n % 2 == 1 => Some(v[n / 2]),
            _ => Some((v[n / 2 - 1] + v[n / 2]) / 2.0),
        }
    }

    /// Linear-interpolated percentile, `p` in `[0, 1]`.
    pub fn percentile(&self, p: f64) -> Option<f64> {
        let v = self.sorted();
        if v.is_empty() {
            return None;
        }
        let h = (v.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        Some(v[lo] + (h - lo as f64) * (v[hi] - v[lo]))
    }
}
