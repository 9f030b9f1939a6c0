//! Buffer-occupancy-driven rate selection.
//!
//! These rules never look at throughput estimates. A target rate is read off
//! an [`AdjustmentFunction`] and quantized onto the ladder with a dead band
//! around the previous choice, so the rate only moves once the target clears
//! the next rung in either direction. The layered top-layer rule compares
//! the target against what recent segments cost on average to enhance, which
//! makes it switch even more reluctantly.

use crate::adapt::adjustment::AdjustmentFunction;
use crate::error::{Error, Result};
use crate::ladder::BitrateLadder;

/// Base-layer selection (also whole-segment selection when used alone).
///
/// Reservoir and saturation first, then the dead band: climb only when the
/// target clears the rung above the previous rate, drop only when it falls
/// to the rung below, otherwise hold.
pub fn base_rate(f: &AdjustmentFunction, buffer_s: f64, prev_bps: u64) -> Result<u64> {
    let ladder = f.ladder();
    let up = ladder.step_up(prev_bps)?;
    let down = ladder.step_down(prev_bps)?;
    if buffer_s <= f.reservoir_s() {
        return Ok(ladder.min_rate());
    }
    if buffer_s >= f.upper_knee_s() {
        return Ok(ladder.max_rate());
    }
    let target = f.eval(buffer_s);
    if target >= up as f64 {
        Ok(ladder.highest_below(target))
    } else if target <= down as f64 {
        Ok(ladder.lowest_above(target))
    } else {
        Ok(prev_bps)
    }
}

/// Top-layer (enhancement target) selection for the layered scheme.
///
/// Called only on re-decision blocks; in between, the previous target is
/// held. `window_base_bps` are the base rates of the segments the upcoming
/// target will stack on (one offset window back); the dead band compares the
/// adjustment target with the average cost of raising those segments to the
/// rung above/below the previous target, so a single cheap segment does not
/// trigger a switch.
///
/// `shipped_base_bps` is the base rate of the block's own segment; it is the
/// fallback when the buffer is inside the reservoir (no enhancement at all).
pub fn top_rate(
    f: &AdjustmentFunction,
    buffer_s: f64,
    prev_top_bps: u64,
    window_base_bps: &[u64],
    shipped_base_bps: u64,
) -> Result<u64> {
    let ladder = f.ladder();
    if window_base_bps.is_empty() {
        return Err(Error::Misuse(
            "top-layer decision needs a nonempty base-rate window".into(),
        ));
    }
    for &r in window_base_bps {
        if !ladder.contains(r) {
            return Err(Error::UnknownRate(r));
        }
    }
    if !ladder.contains(shipped_base_bps) {
        return Err(Error::UnknownRate(shipped_base_bps));
    }
    let up = ladder.step_up(prev_top_bps)?;
    let down = ladder.step_down(prev_top_bps)?;
    let avg_to = |rung: u64| {
        let sum: f64 = window_base_bps
            .iter()
            .map(|&b| b.max(rung) as f64)
            .sum();
        sum / window_base_bps.len() as f64
    };
    if buffer_s <= f.reservoir_s() {
        return Ok(shipped_base_bps);
    }
    if buffer_s >= f.upper_knee_s() {
        return Ok(ladder.max_rate());
    }
    let target = f.eval(buffer_s);
    if target >= avg_to(up) {
        Ok(ladder.highest_below(target))
    } else if target <= avg_to(down) {
        Ok(ladder.lowest_above(target))
    } else {
        Ok(prev_top_bps)
    }
}

/// Band thresholds for the stepwise whole-segment rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepwiseThresholds {
    pub low_s: f64,
    pub hold_s: f64,
    pub high_s: f64,
}

impl StepwiseThresholds {
    pub fn new(low_s: f64, hold_s: f64, high_s: f64) -> Result<Self> {
        if !(low_s > 0.0 && low_s < hold_s && hold_s < high_s) {
            return Err(Error::Config(format!(
                "stepwise thresholds must satisfy 0 < low < hold < high, \
                 got {low_s} / {hold_s} / {high_s}"
            )));
        }
        Ok(Self {
            low_s,
            hold_s,
            high_s,
        })
    }
}

/// Stepwise whole-segment selection: panic to the bottom rung under the low
/// threshold, step down below the hold band, hold inside it, step up above
/// the high threshold.
pub fn stepwise_rate(
    ladder: &BitrateLadder,
    th: &StepwiseThresholds,
    buffer_s: f64,
    prev_bps: u64,
) -> Result<u64> {
    if buffer_s < th.low_s {
        // step_down validates prev is a rung even though the result is fixed
        ladder.step_down(prev_bps)?;
        Ok(ladder.min_rate())
    } else if buffer_s < th.hold_s {
        ladder.step_down(prev_bps)
    } else if buffer_s < th.high_s {
        ladder.step_down(prev_bps)?;
        Ok(prev_bps)
    } else {
        ladder.step_up(prev_bps)
    }
}
