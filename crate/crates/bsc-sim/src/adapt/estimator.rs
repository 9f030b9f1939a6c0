//! Throughput estimation from per-block download measurements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorMode {
    /// Last measurement wins.
    Instant,
    /// Exponential smoothing: `w * latest + (1 - w) * previous`.
    Smoothed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputEstimator {
    mode: EstimatorMode,
    weight: f64,
    value: Option<f64>,
}

impl ThroughputEstimator {
    /// `weight` only matters in smoothed mode and must sit in (0, 1].
    pub fn new(mode: EstimatorMode, weight: f64) -> Result<Self> {
        if !(weight > 0.0 && weight <= 1.0) {
            return Err(Error::Config(format!(
                "smoothing weight must be in (0, 1], got {weight}"
            )));
        }
        Ok(Self {
            mode,
            weight,
            value: None,
        })
    }

    /// Feeds one measured throughput sample in bits/s. The first sample
    /// initializes the estimate in either mode.
    pub fn observe(&mut self, sample_bps: f64) {
        self.value = Some(match (self.mode, self.value) {
            (EstimatorMode::Instant, _) | (_, None) => sample_bps,
            (EstimatorMode::Smoothed, Some(prev)) => {
                self.weight * sample_bps + (1.0 - self.weight) * prev
            }
        });
    }

    /// Current estimate; `None` until the first sample arrives.
    pub fn estimate_bps(&self) -> Option<f64> {
        self.value
    }
}
