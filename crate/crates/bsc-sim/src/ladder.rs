//! The discrete set of bitrates a video is encoded at.
//!
//! Every adaptation decision in this crate resolves to a rung of a
//! [`BitrateLadder`]. Rates are integer bits per second so that segment sizes
//! (rate times duration) stay exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted, deduplicated encoding bitrates in bits/s.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BitrateLadder {
    rungs: Vec<u64>,
}

impl BitrateLadder {
    /// Builds a ladder from strictly increasing positive rates. At least two
    /// rungs are required; with a single rung there is nothing to adapt.
    pub fn new(rungs: Vec<u64>) -> Result<Self> {
        if rungs.len() < 2 {
            return Err(Error::Ladder(format!(
                "need at least 2 rungs, got {}",
                rungs.len()
            )));
        }
        if rungs[0] == 0 {
            return Err(Error::Ladder("rates must be positive".into()));
        }
        if !rungs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Ladder("rates must be strictly increasing".into()));
        }
        Ok(Self { rungs })
    }

    pub fn rungs(&self) -> &[u64] {
        &self.rungs
    }

    pub fn min_rate(&self) -> u64 {
        self.rungs[0]
    }

    pub fn max_rate(&self) -> u64 {
        *self.rungs.last().unwrap()
    }

    pub fn contains(&self, rate_bps: u64) -> bool {
        self.rungs.binary_search(&rate_bps).is_ok()
    }

    fn position(&self, rate_bps: u64) -> Result<usize> {
        self.rungs
            .binary_search(&rate_bps)
            .map_err(|_| Error::UnknownRate(rate_bps))
    }

    /// Highest rung not above `throughput_bps`, if any.
    pub fn floor(&self, throughput_bps: f64) -> Option<u64> {
        self.rungs
            .iter()
            .rev()
            .copied()
            .find(|&r| (r as f64) <= throughput_bps)
    }

    /// Lowest rung not below `throughput_bps`, if any.
    pub fn ceil(&self, throughput_bps: f64) -> Option<u64> {
        self.rungs.iter().copied().find(|&r| (r as f64) >= throughput_bps)
    }

    /// Highest rung strictly below `x`, clamped to the bottom rung when every
    /// rung is at or above `x`.
    pub fn highest_below(&self, x: f64) -> u64 {
        self.rungs
            .iter()
            .rev()
            .copied()
            .find(|&r| (r as f64) < x)
            .unwrap_or(self.min_rate())
    }

    /// Lowest rung strictly above `x`, clamped to the top rung when every
    /// rung is at or below `x`.
    pub fn lowest_above(&self, x: f64) -> u64 {
        self.rungs
            .iter()
            .copied()
            .find(|&r| (r as f64) > x)
            .unwrap_or(self.max_rate())
    }

    /// One rung up from `rate_bps`; the top rung maps to itself.
    pub fn step_up(&self, rate_bps: u64) -> Result<u64> {
        let i = self.position(rate_bps)?;
        Ok(self.rungs[(i + 1).min(self.rungs.len() - 1)])
    }

    /// One rung down from `rate_bps`; the bottom rung maps to itself.
    pub fn step_down(&self, rate_bps: u64) -> Result<u64> {
        let i = self.position(rate_bps)?;
        Ok(self.rungs[i.saturating_sub(1)])
    }
}

impl Default for BitrateLadder {
    /// The eight-rung profile used by the bundled scenarios:
    /// 140..2900 Kbps.
    fn default() -> Self {
        Self::new(vec![
            140_000, 250_000, 420_000, 760_000, 1_000_000, 1_500_000, 2_100_000, 2_900_000,
        ])
        .unwrap()
    }
}
