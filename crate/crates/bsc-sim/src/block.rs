//! Per-block download plans.
//!
//! A regular block `k` bundles two things: the base layer of the shifted
//! segment `k + offset - 1`, and the enhancement layers that raise segment
//! `k` from the base rate it was shipped at (`offset - 1` blocks ago) up to
//! its final rate. Bootstrap blocks at the start of a session instead carry
//! a whole segment plus one base layer sent ahead at the bottom rate.

use crate::error::{Error, Result};
use crate::manifest::Manifest;

/// Sizes in bits of the two parts of a regular block.
///
/// * base layer of the shifted segment: `rate_base * L`
/// * enhancement of the current segment: `(rate_enh - rate_base_shipped) * L`
///
/// `rate_base_shipped` is the base rate segment `k` was downloaded at, i.e.
/// the base rate chosen `offset - 1` blocks earlier. `rate_enh` equal to it
/// means no enhancement layers at all.
pub fn block_sizes(
    manifest: &Manifest,
    rate_base_shipped: u64,
    rate_base: u64,
    rate_enh: u64,
) -> Result<(u64, u64)> {
    let ladder = manifest.ladder();
    for rate in [rate_base_shipped, rate_base, rate_enh] {
        if !ladder.contains(rate) {
            return Err(Error::UnknownRate(rate));
        }
    }
    if rate_enh < rate_base_shipped {
        return Err(Error::Plan(format!(
            "enhancement target {rate_enh} bps is below the already shipped base layer \
             ({rate_base_shipped} bps); layers cannot be taken back"
        )));
    }
    let size_base = manifest.layer_bits(rate_base);
    let size_enh = manifest.layer_bits(rate_enh) - manifest.layer_bits(rate_base_shipped);
    Ok((size_base, size_enh))
}

/// A regular block, ready to download.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPlan {
    pub index: usize,
    pub rate_base: u64,
    pub rate_enh: u64,
    pub size_base_bits: u64,
    pub size_enh_bits: u64,
}

impl BlockPlan {
    /// Plans block `index`. When the block points past the last segment
    /// (`manifest.carries_base_layer` is false) the base-layer part is empty:
    /// there is no segment left to ship ahead.
    pub fn new(
        manifest: &Manifest,
        index: usize,
        rate_base_shipped: u64,
        rate_base: u64,
        rate_enh: u64,
    ) -> Result<Self> {
        if manifest.is_bootstrap(index) || index > manifest.segment_count() {
            return Err(Error::Plan(format!(
                "block {index} is not a regular block of this session"
            )));
        }
        let (size_base, size_enh) = block_sizes(manifest, rate_base_shipped, rate_base, rate_enh)?;
        let size_base_bits = if manifest.carries_base_layer(index) {
            size_base
        } else {
            0
        };
        Ok(Self {
            index,
            rate_base,
            rate_enh,
            size_base_bits,
            size_enh_bits: size_enh,
        })
    }

    pub fn total_bits(&self) -> u64 {
        self.size_base_bits + self.size_enh_bits
    }
}

/// One of the first `offset - 1` blocks: a whole segment at `rate_full` plus,
/// while there are segments left to ship ahead, one base layer at the bottom
/// rate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapBlockPlan {
    pub index: usize,
    pub rate_full: u64,
    pub rate_ahead: u64,
    pub size_full_bits: u64,
    pub size_ahead_bits: u64,
}

impl BootstrapBlockPlan {
    pub fn new(manifest: &Manifest, index: usize, rate_full: u64) -> Result<Self> {
        if !manifest.is_bootstrap(index) || index == 0 {
            return Err(Error::Plan(format!(
                "block {index} is not a bootstrap block of this session"
            )));
        }
        if !manifest.ladder().contains(rate_full) {
            return Err(Error::UnknownRate(rate_full));
        }
        let rate_ahead = manifest.ladder().min_rate();
        let size_ahead_bits = if manifest.carries_base_layer(index) {
            manifest.layer_bits(rate_ahead)
        } else {
            0
        };
        Ok(Self {
            index,
            rate_full,
            rate_ahead,
            size_full_bits: manifest.layer_bits(rate_full),
            size_ahead_bits,
        })
    }

    pub fn total_bits(&self) -> u64 {
        self.size_full_bits + self.size_ahead_bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::BitrateLadder;

    fn manifest(n: usize, phi: usize) -> Manifest {
        Manifest::new(n, 2.0, phi, 25.0, BitrateLadder::default()).unwrap()
    }

    #[test]
    fn sizes_with_no_enhancement() {
        let m = manifest(20, 4);
        // Base 1000 Kbps for the shifted segment, no enhancement on top of a
        // 420 Kbps base already shipped.
        let (b, e) = block_sizes(&m, 420_000, 1_000_000, 420_000).unwrap();
        assert_eq!(b, 2_000_000);
        assert_eq!(e, 0);
    }

    #[test]
    fn sizes_with_enhancement() {
        let m = manifest(20, 4);
        let (b, e) = block_sizes(&m, 420_000, 760_000, 1_000_000).unwrap();
        assert_eq!(b, 1_520_000);
        assert_eq!(e, 1_160_000);
    }

    #[test]
    fn total_matches_the_combined_rate() {
        // size_base + size_enh == (rate_enh - rate_base_shipped + rate_base) * L
        let m = manifest(20, 4);
        let l = m.ladder().clone();
        for &shipped in l.rungs() {
            for &base in l.rungs() {
                for &enh in l.rungs().iter().filter(|&&e| e >= shipped) {
                    let (b, eb) = block_sizes(&m, shipped, base, enh).unwrap();
                    assert_eq!(b + eb, m.layer_bits(enh - shipped + base));
                }
            }
        }
    }

    #[test]
    fn rejects_rates_off_the_ladder_and_shrinking_targets() {
        let m = manifest(20, 4);
        assert!(matches!(
            block_sizes(&m, 420_000, 999_999, 420_000),
            Err(Error::UnknownRate(999_999))
        ));
        assert!(matches!(
            block_sizes(&m, 760_000, 760_000, 420_000),
            Err(Error::Plan(_))
        ));
    }

    #[test]
    fn tail_blocks_drop_the_base_layer_part() {
        let m = manifest(10, 4);
        // Block 8 would ship segment 11's base layer; there is none.
        let p = BlockPlan::new(&m, 8, 140_000, 760_000, 420_000).unwrap();
        assert_eq!(p.size_base_bits, 0);
        assert_eq!(p.size_enh_bits, 560_000);
        assert_eq!(p.total_bits(), 560_000);
        // Block 7 still does (segment 10 exists).
        let p = BlockPlan::new(&m, 7, 140_000, 760_000, 420_000).unwrap();
        assert_eq!(p.size_base_bits, 1_520_000);
    }

    #[test]
    fn bootstrap_block_bundles_whole_segment_and_one_base_ahead() {
        let m = manifest(20, 4);
        let p = BootstrapBlockPlan::new(&m, 2, 250_000).unwrap();
        assert_eq!(p.rate_ahead, 140_000);
        assert_eq!(p.size_full_bits, 500_000);
        assert_eq!(p.size_ahead_bits, 280_000);
        assert_eq!(p.total_bits(), 780_000);
    }

    #[test]
    fn bootstrap_ahead_is_dropped_past_the_last_segment() {
        // offset 10, 10 segments: bootstrap block 2 would ship segment 11.
        let m = manifest(10, 10);
        let p = BootstrapBlockPlan::new(&m, 2, 140_000).unwrap();
        assert_eq!(p.size_ahead_bits, 0);
        let p = BootstrapBlockPlan::new(&m, 1, 140_000).unwrap();
        assert_eq!(p.size_ahead_bits, 280_000); // segment 10 still exists
    }

    #[test]
    fn plans_reject_out_of_role_blocks() {
        let m = manifest(20, 4);
        assert!(BlockPlan::new(&m, 3, 140_000, 140_000, 140_000).is_err());
        assert!(BlockPlan::new(&m, 21, 140_000, 140_000, 140_000).is_err());
        assert!(BootstrapBlockPlan::new(&m, 4, 140_000).is_err());
        assert!(BootstrapBlockPlan::new(&m, 0, 140_000).is_err());
    }
}
