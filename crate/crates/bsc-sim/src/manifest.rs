//! Static description of one video: how many segments, how long each one is,
//! the encoding ladder, and the shift offset used by the layered block
//! scheme.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::BitrateLadder;

/// Immutable session-wide parameters.
///
/// `offset_blocks` is the shift between a segment's base layer and its
/// enhancement layers: block `k` carries the base layer of segment
/// `k + offset - 1` together with the enhancement layers of segment `k`.
/// An offset of 1 would collapse the scheme into plain whole-segment
/// download, so construction requires at least 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    segment_count: usize,
    segment_duration_s: f64,
    offset_blocks: usize,
    fps: f64,
    ladder: BitrateLadder,
}

impl Manifest {
    pub fn new(
        segment_count: usize,
        segment_duration_s: f64,
        offset_blocks: usize,
        fps: f64,
        ladder: BitrateLadder,
    ) -> Result<Self> {
        if offset_blocks < 2 {
            return Err(Error::Manifest(format!(
                "offset must be at least 2 blocks, got {offset_blocks}"
            )));
        }
        if segment_count < offset_blocks {
            return Err(Error::Manifest(format!(
                "need at least as many segments as the offset ({offset_blocks}), got {segment_count}"
            )));
        }
        if !(segment_duration_s > 0.0) || !segment_duration_s.is_finite() {
            return Err(Error::Manifest(format!(
                "segment duration must be positive, got {segment_duration_s}"
            )));
        }
        if !(fps > 0.0) || !fps.is_finite() {
            return Err(Error::Manifest(format!("fps must be positive, got {fps}")));
        }
        Ok(Self {
            segment_count,
            segment_duration_s,
            offset_blocks,
            fps,
            ladder,
        })
    }

    pub fn segment_count(&self) -> usize {
        self.segment_count
    }

    pub fn segment_duration_s(&self) -> f64 {
        self.segment_duration_s
    }

    pub fn offset_blocks(&self) -> usize {
        self.offset_blocks
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn ladder(&self) -> &BitrateLadder {
        &self.ladder
    }

    /// The offset expressed in seconds of content; the threshold the
    /// throughput-based policy compares the buffer against.
    pub fn offset_window_s(&self) -> f64 {
        self.offset_blocks as f64 * self.segment_duration_s
    }

    /// Total playable content in seconds.
    pub fn total_duration_s(&self) -> f64 {
        self.segment_count as f64 * self.segment_duration_s
    }

    /// Payload of one segment-long layer at `rate_bps`, in bits.
    pub fn layer_bits(&self, rate_bps: u64) -> u64 {
        (rate_bps as f64 * self.segment_duration_s).round() as u64
    }

    /// Blocks below the offset are bootstrap blocks: they carry a whole
    /// segment instead of an enhancement, plus one base layer sent ahead.
    pub fn is_bootstrap(&self, block: usize) -> bool {
        block < self.offset_blocks
    }

    /// Index of the segment whose base layer block `block` ships ahead.
    pub fn shifted_segment(&self, block: usize) -> usize {
        block + self.offset_blocks - 1
    }

    /// Whether block `block` still has a base layer to carry; blocks near the
    /// end of the session would point past the last segment and carry only
    /// enhancement layers.
    pub fn carries_base_layer(&self, block: usize) -> bool {
        self.shifted_segment(block) <= self.segment_count
    }
}
