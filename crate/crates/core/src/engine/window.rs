//! Moving-window mean of transaction intervals and the self-modulated noise
//! amplitude derived from it. The same window drives the engine and the
//! `e(n)` estimator in [`crate::stats`].

use std::collections::VecDeque;

/// Intervals whose closing transaction lies within the last `tau` time units.
///
/// After pushing the interval `I(n)` closing at time `t(n)`, the window holds
/// every `I(n-k)` with `t(n-k) >= t(n) - tau`. It always contains `I(n)`
/// itself, so when `I(n) > tau` the mean is exactly `I(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalWindow {
    tau: f64,
    entries: VecDeque<(f64, f64)>,
}

impl IntervalWindow {
    pub fn new(tau: f64) -> Self {
        IntervalWindow {
            tau,
            entries: VecDeque::new(),
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Records the interval closing at time `t` and returns the window mean.
    pub fn push(&mut self, t: f64, interval: f64) -> f64 {
        self.entries.push_back((t, interval));
        let cutoff = t - self.tau;
        while let Some(&(te, _)) = self.entries.front() {
            if te < cutoff {
                self.entries.pop_front();
            } else {
                break;
            }
        }
        self.mean().expect("window holds the latest interval")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mean(&self) -> Option<f64> {
        if self.entries.is_empty() {
            return None;
        }
        let sum: f64 = self.entries.iter().map(|&(_, i)| i).sum();
        Some(sum / self.entries.len() as f64)
    }
}

/// Noise amplitude `c(n) = sqrt((L²/2) / <I>)` with `<I>` clamped to
/// `[clamp_lo, clamp_hi]`. `L²/2` is the mean interval of the plain model at
/// unit amplitude.
pub fn noise_for_mean_interval(
    mean_interval: f64,
    spread: f64,
    clamp_lo: f64,
    clamp_hi: f64,
) -> f64 {
    let m = mean_interval.clamp(clamp_lo, clamp_hi);
    (0.5 * spread * spread / m).sqrt()
}

/// Self-modulated amplitude from the current window contents, falling back to
/// `bootstrap` when no interval has been recorded yet.
pub fn modulated_c(
    window: &IntervalWindow,
    spread: f64,
    clamp_lo: f64,
    clamp_hi: f64,
    bootstrap: f64,
) -> f64 {
    let mean = window.mean().unwrap_or(bootstrap);
    noise_for_mean_interval(mean, spread, clamp_lo, clamp_hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_amplitude_formula() {
        let c = noise_for_mean_interval(5.0, 0.01, 3.0, 50.0);
        assert!((c - 3.1623e-3).abs() < 1e-7, "{c}");
    }

    #[test]
    fn clamps_high_and_low() {
        let hi = noise_for_mean_interval(100.0, 0.01, 3.0, 50.0);
        assert!((hi - 1e-3).abs() < 1e-15);
        let lo = noise_for_mean_interval(1.0, 0.01, 3.0, 50.0);
        assert_eq!(lo, noise_for_mean_interval(3.0, 0.01, 3.0, 50.0));
    }

    #[test]
    fn window_drops_old_intervals() {
        let mut w = IntervalWindow::new(10.0);
        assert_eq!(w.push(4.0, 4.0), 4.0);
        assert_eq!(w.push(6.0, 2.0), 3.0);
        assert_eq!(w.push(14.5, 8.5), 5.25); // t=4 is older than 14.5-10
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn long_interval_replaces_window() {
        let mut w = IntervalWindow::new(10.0);
        w.push(1.0, 1.0);
        w.push(2.0, 1.0);
        assert_eq!(w.push(30.0, 28.0), 28.0);
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn bootstrap_used_when_empty() {
        let w = IntervalWindow::new(150.0);
        let c = modulated_c(&w, 0.01, 3.0, 50.0, 5.0);
        assert_eq!(c, noise_for_mean_interval(5.0, 0.01, 3.0, 50.0));
    }
}
