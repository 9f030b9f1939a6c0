//! Buffer-to-bitrate adjustment map used by the buffer-based policies.

use crate::error::{Error, Result};
use crate::ladder::BitrateLadder;

/// Piecewise-linear map from buffer occupancy to a target bitrate.
///
/// Below the reservoir it pins the bottom rung, above reservoir + cushion it
/// pins the top rung, and in between it interpolates linearly. The output is
/// a real-valued target; callers quantize it onto the ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjustmentFunction {
    reservoir_s: f64,
    cushion_s: f64,
    ladder: BitrateLadder,
}

impl AdjustmentFunction {
    pub fn new(ladder: BitrateLadder, reservoir_s: f64, cushion_s: f64) -> Result<Self> {
        if !(reservoir_s > 0.0) || !reservoir_s.is_finite() {
            return Err(Error::Config(format!(
                "reservoir must be positive, got {reservoir_s}"
            )));
        }
        if !(cushion_s > 0.0) || !cushion_s.is_finite() {
            return Err(Error::Config(format!(
                "cushion must be positive, got {cushion_s}"
            )));
        }
        Ok(Self {
            reservoir_s,
            cushion_s,
            ladder,
        })
    }

    pub fn reservoir_s(&self) -> f64 {
        self.reservoir_s
    }

    /// Buffer level at which the map saturates at the top rung.
    pub fn upper_knee_s(&self) -> f64 {
        self.reservoir_s + self.cushion_s
    }

    pub fn ladder(&self) -> &BitrateLadder {
        &self.ladder
    }

    /// Target bitrate in bits/s for buffer occupancy `buffer_s`.
    pub fn eval(&self, buffer_s: f64) -> f64 {
        let min = self.ladder.min_rate() as f64;
        let max = self.ladder.max_rate() as f64;
        if buffer_s <= self.reservoir_s {
            min
        } else if buffer_s >= self.upper_knee_s() {
            max
        } else {
            min + (buffer_s - self.reservoir_s) / self.cushion_s * (max - min)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(reservoir: f64, cushion: f64) -> AdjustmentFunction {
        AdjustmentFunction::new(BitrateLadder::default(), reservoir, cushion).unwrap()
    }

    #[test]
    fn saturates_at_both_knees() {
        let f1 = f(20.0, 70.0);
        assert_eq!(f1.eval(0.0), 140_000.0);
        assert_eq!(f1.eval(20.0), 140_000.0);
        assert_eq!(f1.eval(90.0), 2_900_000.0);
        assert_eq!(f1.eval(500.0), 2_900_000.0);
    }

    #[test]
    fn interpolates_linearly_in_between() {
        let f1 = f(20.0, 70.0);
        // Midpoint of the cushion: halfway up the rate range.
        assert_eq!(f1.eval(55.0), 1_520_000.0);
        // 22/70 of the way up.
        let got = f1.eval(42.0);
        assert!((got - 1_007_428.5714285714).abs() < 1e-6, "got {got}");
        // Continuity at the knees.
        assert!((f1.eval(20.0 + 1e-12) - 140_000.0).abs() < 1.0);
        assert!((f1.eval(90.0 - 1e-12) - 2_900_000.0).abs() < 1.0);
    }

    #[test]
    fn shorter_cushion_rises_faster() {
        let f1 = f(20.0, 70.0);
        let f2 = f(20.0, 50.0);
        for b in [25.0, 40.0, 55.0, 65.0] {
            assert!(f2.eval(b) > f1.eval(b));
        }
    }

    #[test]
    fn rejects_nonpositive_knobs() {
        assert!(AdjustmentFunction::new(BitrateLadder::default(), 0.0, 70.0).is_err());
        assert!(AdjustmentFunction::new(BitrateLadder::default(), 20.0, 0.0).is_err());
        assert!(AdjustmentFunction::new(BitrateLadder::default(), -5.0, 70.0).is_err());
    }
}
