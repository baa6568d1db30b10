use std::collections::VecDeque;

use crate::{Error, Result};

/// Linearly weighted moving average of the most recent price changes.
///
/// `recent[0]` is the latest change `ΔP(n)`, `recent[k]` is `ΔP(n-k)`, and
/// the depth `M` is `recent.len()`. Weights `2(M-k)/(M(M+1))` sum to one.
pub fn weighted_ma(recent: &[f64]) -> Result<f64> {
    let m = recent.len();
    if m == 0 {
        return Err(Error::Config("M must be at least 1".into()));
    }
    Ok(weighted_ma_iter(recent.iter().copied(), m))
}

#[inline]
fn weighted_ma_iter(recent: impl Iterator<Item = f64>, m: usize) -> f64 {
    let norm = 2.0 / (m as f64 * (m as f64 + 1.0));
    let acc: f64 = recent
        .take(m)
        .enumerate()
        .map(|(k, x)| (m - k) as f64 * x)
        .sum();
    norm * acc
}

/// Fixed-depth history of price changes, newest first, zero-padded at start.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangeHistory {
    depth: usize,
    changes: VecDeque<f64>,
}

impl ChangeHistory {
    pub fn new(depth: usize) -> Self {
        ChangeHistory {
            depth,
            changes: std::iter::repeat_n(0.0, depth).collect(),
        }
    }

    pub fn push(&mut self, dprice: f64) {
        self.changes.push_front(dprice);
        self.changes.truncate(self.depth);
    }

    pub fn weighted_ma(&self) -> f64 {
        weighted_ma_iter(self.changes.iter().copied(), self.depth)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Newest first.
    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.changes.iter()
    }
}
