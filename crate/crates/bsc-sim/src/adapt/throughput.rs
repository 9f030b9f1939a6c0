//! Throughput-driven rate selection.
//!
//! One ladder rule drives everything here: drop to the highest rung the
//! estimated throughput sustains when it falls below the previous choice,
//! otherwise climb a single rung until the top. Whole-segment streaming
//! applies it directly; the layered scheme applies it to base layers and
//! additionally picks an enhancement target for the current segment when the
//! buffer is comfortable.

use crate::error::{Error, Result};
use crate::ladder::BitrateLadder;

/// What the ladder rule wants to do given an estimate and the previous rate.
enum Drive {
    /// No estimate yet, or the link cannot even sustain the bottom rung.
    AtMin,
    /// Throughput dropped below the previous rate: fall to its floor rung.
    Floor(u64),
    /// Throughput holds: climb one rung.
    StepUp,
    /// Already at the top with throughput to spare.
    AtMax,
}

fn drive(ladder: &BitrateLadder, estimate_bps: Option<f64>, prev_bps: u64) -> Result<Drive> {
    if !ladder.contains(prev_bps) {
        return Err(Error::UnknownRate(prev_bps));
    }
    let Some(est) = estimate_bps else {
        return Ok(Drive::AtMin);
    };
    if est <= ladder.min_rate() as f64 {
        Ok(Drive::AtMin)
    } else if est < prev_bps as f64 {
        // est > min rate, so the floor rung exists.
        Ok(Drive::Floor(ladder.floor(est).unwrap()))
    } else if prev_bps < ladder.max_rate() {
        Ok(Drive::StepUp)
    } else {
        Ok(Drive::AtMax)
    }
}

/// Whole-segment rate choice (also the base-layer choice of the layered
/// scheme): `prev_bps` is the previous selection, `estimate_bps` the current
/// throughput estimate (`None` before any measurement).
pub fn segment_rate(
    ladder: &BitrateLadder,
    estimate_bps: Option<f64>,
    prev_bps: u64,
) -> Result<u64> {
    Ok(match drive(ladder, estimate_bps, prev_bps)? {
        Drive::AtMin => ladder.min_rate(),
        Drive::Floor(r) => r,
        Drive::StepUp => ladder.step_up(prev_bps)?,
        Drive::AtMax => ladder.max_rate(),
    })
}

/// Whole-segment rate for the bootstrap blocks of a layered session.
///
/// Each bootstrap block also ships one base layer at the bottom rate, so the
/// chosen rate must leave that much headroom under the estimate. On top of
/// that the start ramps smoothly: never more than one rung above the previous
/// bootstrap choice. The very first block (`prev_full` = `None`) takes the
/// bottom rung.
pub fn bootstrap_rate(
    ladder: &BitrateLadder,
    estimate_bps: Option<f64>,
    prev_full: Option<u64>,
) -> Result<u64> {
    let Some(prev) = prev_full else {
        return Ok(ladder.min_rate());
    };
    let headroom = match estimate_bps {
        Some(est) => ladder
            .floor(est - ladder.min_rate() as f64)
            .unwrap_or(ladder.min_rate()),
        None => ladder.min_rate(),
    };
    Ok(headroom.min(ladder.step_up(prev)?))
}

/// Rates for a regular layered block: `(base, enhancement)`.
///
/// * `shipped_base_bps`: base rate the current segment was already delivered
///   at (chosen `offset - 1` blocks ago); the enhancement target can never go
///   below it.
/// * `prev_base_bps` / `prev_enh_bps`: previous block's choices.
///
/// With at most `offset_window_s` of content buffered, enhancements are
/// skipped entirely (the segment would be played too soon for them to be
/// worth the bits) and only the base layer follows the ladder rule. With a
/// larger buffer the enhancement target rises as throughput allows, one rung
/// at a time, and falls back to the throughput ceiling on drops.
pub fn block_rates(
    ladder: &BitrateLadder,
    offset_window_s: f64,
    buffer_s: f64,
    estimate_bps: Option<f64>,
    prev_base_bps: u64,
    prev_enh_bps: u64,
    shipped_base_bps: u64,
) -> Result<(u64, u64)> {
    for rate in [prev_enh_bps, shipped_base_bps] {
        if !ladder.contains(rate) {
            return Err(Error::UnknownRate(rate));
        }
    }
    let d = drive(ladder, estimate_bps, prev_base_bps)?;
    let base = match d {
        Drive::AtMin => ladder.min_rate(),
        Drive::Floor(r) => r,
        Drive::StepUp => ladder.step_up(prev_base_bps)?,
        Drive::AtMax => ladder.max_rate(),
    };
    let enh = if buffer_s <= offset_window_s {
        shipped_base_bps
    } else {
        match d {
            Drive::AtMin => shipped_base_bps,
            // est < prev_base <= max rate, so the ceiling rung exists.
            Drive::Floor(_) => shipped_base_bps.max(ladder.ceil(estimate_bps.unwrap()).unwrap()),
            Drive::StepUp => shipped_base_bps.max(ladder.step_up(prev_enh_bps)?),
            Drive::AtMax => ladder.max_rate(),
        }
    };
    Ok((base, enh))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder() -> BitrateLadder {
        BitrateLadder::default()
    }

    #[test]
    fn segment_rate_covers_all_four_branches() {
        let l = ladder();
        // No estimate yet.
        assert_eq!(segment_rate(&l, None, 1_000_000).unwrap(), 140_000);
        // Link below the bottom rung.
        assert_eq!(segment_rate(&l, Some(100_000.0), 1_000_000).unwrap(), 140_000);
        assert_eq!(segment_rate(&l, Some(140_000.0), 1_000_000).unwrap(), 140_000);
        // Throughput drop: floor of the estimate.
        assert_eq!(
            segment_rate(&l, Some(1_800_000.0), 2_100_000).unwrap(),
            1_500_000
        );
        // Throughput holds: one rung up.
        assert_eq!(
            segment_rate(&l, Some(1_800_000.0), 1_000_000).unwrap(),
            1_500_000
        );
        // Estimate exactly at the previous rate counts as holding.
        assert_eq!(
            segment_rate(&l, Some(1_000_000.0), 1_000_000).unwrap(),
            1_500_000
        );
        // Saturated at the top.
        assert_eq!(
            segment_rate(&l, Some(3_500_000.0), 2_900_000).unwrap(),
            2_900_000
        );
        assert!(segment_rate(&l, Some(1e6), 123).is_err());
    }

    #[test]
    fn bootstrap_starts_at_the_bottom_and_ramps_one_rung() {
        let l = ladder();
        assert_eq!(bootstrap_rate(&l, None, None).unwrap(), 140_000);
        // Plenty of throughput, but the ramp caps the climb at one rung.
        assert_eq!(
            bootstrap_rate(&l, Some(5_000_000.0), Some(140_000)).unwrap(),
            250_000
        );
        assert_eq!(
            bootstrap_rate(&l, Some(5_000_000.0), Some(420_000)).unwrap(),
            760_000
        );
        // Tight throughput: must leave room for the bottom-rate layer ahead.
        // 300 Kbps estimate minus 140 leaves 160 -> only the bottom rung fits.
        assert_eq!(
            bootstrap_rate(&l, Some(300_000.0), Some(140_000)).unwrap(),
            140_000
        );
        // 1 Mbps estimate: headroom floor(860K) = 760K, ramp allows 250K.
        assert_eq!(
            bootstrap_rate(&l, Some(1_000_000.0), Some(140_000)).unwrap(),
            250_000
        );
        // Nothing fits at all: clamp to the bottom rung.
        assert_eq!(
            bootstrap_rate(&l, Some(200_000.0), Some(140_000)).unwrap(),
            140_000
        );
    }

    #[test]
    fn low_buffer_arm_skips_enhancements() {
        let l = ladder();
        // 10 s buffered against a 20 s offset window.
        let (base, enh) = block_rates(
            &l,
            20.0,
            10.0,
            Some(1_800_000.0),
            2_100_000,
            2_100_000,
            760_000,
        )
        .unwrap();
        assert_eq!((base, enh), (1_500_000, 760_000));
        // Boundary: exactly at the window still counts as low.
        let (_, enh) = block_rates(
            &l,
            20.0,
            20.0,
            Some(2_500_000.0),
            1_000_000,
            1_500_000,
            420_000,
        )
        .unwrap();
        assert_eq!(enh, 420_000);
    }

    #[test]
    fn high_buffer_arm_tracks_throughput_for_enhancements() {
        let l = ladder();
        // Drop branch: base falls to the floor, enhancement to the ceiling.
        let (base, enh) = block_rates(
            &l,
            20.0,
            30.0,
            Some(1_800_000.0),
            2_100_000,
            2_100_000,
            760_000,
        )
        .unwrap();
        assert_eq!((base, enh), (1_500_000, 2_100_000));
        // Climb branch: both move one rung up from their own previous value.
        let (base, enh) = block_rates(
            &l,
            20.0,
            30.0,
            Some(2_500_000.0),
            1_000_000,
            1_500_000,
            420_000,
        )
        .unwrap();
        assert_eq!((base, enh), (1_500_000, 2_100_000));
        // Dead link: base at the bottom, no enhancement.
        let (base, enh) = block_rates(
            &l,
            20.0,
            30.0,
            Some(100_000.0),
            1_000_000,
            1_500_000,
            420_000,
        )
        .unwrap();
        assert_eq!((base, enh), (140_000, 420_000));
        // Saturated: everything at the top.
        let (base, enh) = block_rates(
            &l,
            20.0,
            30.0,
            Some(3_500_000.0),
            2_900_000,
            2_900_000,
            2_900_000,
        )
        .unwrap();
        assert_eq!((base, enh), (2_900_000, 2_900_000));
    }

    #[test]
    fn enhancement_never_undercuts_the_shipped_base() {
        let l = ladder();
        let buffers = [5.0, 20.0, 20.1, 60.0];
        let estimates = [
            None,
            Some(50_000.0),
            Some(140_000.0),
            Some(900_000.0),
            Some(2_050_000.0),
            Some(4_000_000.0),
        ];
        for &shipped in l.rungs() {
            for &prev_base in l.rungs() {
                for &prev_enh in l.rungs().iter().filter(|&&e| e >= shipped) {
                    for &b in &buffers {
                        for &est in &estimates {
                            let (base, enh) =
                                block_rates(&l, 20.0, b, est, prev_base, prev_enh, shipped)
                                    .unwrap();
                            assert!(l.contains(base) && l.contains(enh));
                            assert!(
                                enh >= shipped,
                                "enh {enh} < shipped {shipped} (b={b}, est={est:?})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn low_buffer_base_rate_is_throughput_safe() {
        // Whenever the buffer is low and an estimate exists, the base choice
        // never exceeds one rung above the previous pick, and on drops it
        // stays at or below the estimate.
        let l = ladder();
        for &prev in l.rungs() {
            for est in [150_000.0, 800_000.0, 1_600_000.0, 2_890_000.0, 3_200_000.0] {
                let (base, _) =
                    block_rates(&l, 20.0, 3.0, Some(est), prev, prev, l.min_rate()).unwrap();
                if est < prev as f64 {
                    assert!(base as f64 <= est);
                } else {
                    assert!(base <= l.step_up(prev).unwrap());
                }
            }
        }
    }
}
