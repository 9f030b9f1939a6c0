//! Download and playback event loop.
//!
//! Blocks download back to back: the decision for block `k + 1` is taken the
//! instant block `k` lands, with the buffer level and throughput estimate of
//! that instant. Playback runs concurrently on the wall clock. The loop
//! records one [`BlockRecord`] per download and one [`SegmentRecord`] per
//! media segment, which is all the metrics layer needs.

pub mod player;

use serde::Serialize;

use crate::adapt::{DecisionContext, History, PolicyConfig, PolicyId};
use crate::block::{BlockPlan, BootstrapBlockPlan};
use crate::error::Result;
use crate::manifest::Manifest;
use crate::network::{measured_throughput, CapacityTrace};
pub use player::{Phase, Player, StallEvent};

/// One downloaded block with the state that shaped its rate decision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockRecord {
    pub index: usize,
    /// Base layer sent ahead (whole-segment rate for unlayered policies).
    pub rate_base_bps: u64,
    /// Cumulative target of the block's own segment.
    pub rate_enh_bps: u64,
    pub size_base_bits: u64,
    pub size_enh_bits: u64,
    pub start_s: f64,
    pub end_s: f64,
    pub buffer_at_decision_s: f64,
    /// Throughput estimate the decision saw; `None` before any measurement.
    pub estimate_bps: Option<f64>,
    /// Throughput measured over this download; `None` for empty blocks.
    pub throughput_bps: Option<f64>,
    /// Media seconds whose first layer arrived in this block.
    pub content_added_s: f64,
    /// Growth of the contiguous playable prefix at this block's arrival.
    pub playable_added_s: f64,
}

impl BlockRecord {
    pub fn total_bits(&self) -> u64 {
        self.size_base_bits + self.size_enh_bits
    }
}

/// How one media segment fared: what was asked for it, what made it in time,
/// and what actually rendered.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentRecord {
    pub index: usize,
    /// Rate of the lowest layer the segment shipped with.
    pub shipped_base_bps: u64,
    /// Cumulative rate the policy asked for.
    pub requested_bps: u64,
    /// Rate on screen: the request if its layers landed by playout, the
    /// shipped base otherwise.
    pub rendered_bps: u64,
    pub base_arrival_s: f64,
    pub enh_arrival_s: f64,
    pub play_start_s: f64,
    pub enhancement_on_time: bool,
}

/// Everything one session produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub policy: PolicyId,
    pub layered: bool,
    pub blocks: Vec<BlockRecord>,
    pub segments: Vec<SegmentRecord>,
    pub startup_delay_s: f64,
    pub stalls: Vec<StallEvent>,
    /// Wall time the last segment finished rendering.
    pub playback_finish_s: f64,
    /// Wall time the last download landed (stragglers may outlive playback).
    pub last_download_end_s: f64,
    pub total_downloaded_bits: u64,
}

impl SimulationResult {
    pub fn total_stall_time_s(&self) -> f64 {
        // fold, not sum: an empty `Sum<f64>` yields -0.0, which then prints
        // as "-0" in every report.
        self.stalls
            .iter()
            .map(StallEvent::duration_s)
            .fold(0.0, |acc, d| acc + d)
    }
}

/// Contiguous playable segments once `block` has landed.
fn playable_prefix(manifest: &Manifest, layered: bool, block: usize) -> usize {
    let n = manifest.segment_count();
    if !layered {
        return block;
    }
    let phi = manifest.offset_blocks();
    if block < phi - 1 {
        block
    } else {
        (block + phi - 1).min(n)
    }
}

/// Runs one full session of `policy_cfg` over `trace` and returns its record.
/// Deterministic: identical inputs reproduce the result bit for bit.
pub fn run_session(
    manifest: &Manifest,
    trace: &CapacityTrace,
    policy_cfg: &PolicyConfig,
) -> Result<SimulationResult> {
    let (mut policy, mut estimator) = policy_cfg.build(manifest.ladder())?;
    let layered = policy.is_layered();
    let n = manifest.segment_count();
    let phi = manifest.offset_blocks();
    let seg_s = manifest.segment_duration_s();

    let mut history = History::new();
    let mut player = Player::new(manifest);
    let mut blocks: Vec<BlockRecord> = Vec::with_capacity(n);
    let mut t = 0.0_f64;
    let mut prefix = 0usize;
    let mut total_bits = 0u64;

    for k in 1..=n {
        let buffer_at_decision = player.buffer_s();
        let estimate = estimator.estimate_bps();
        let decision = {
            let ctx = DecisionContext {
                block: k,
                buffer_s: buffer_at_decision,
                estimate_bps: estimate,
                manifest,
                history: &history,
            };
            policy.decide(&ctx)?
        };
        history.push(decision);

        let (size_base, size_enh, content_added_s) = if !layered {
            (0, manifest.layer_bits(decision.rate_enh), seg_s)
        } else if manifest.is_bootstrap(k) {
            let plan = BootstrapBlockPlan::new(manifest, k, decision.rate_enh)?;
            let ahead_s = if plan.size_ahead_bits > 0 { seg_s } else { 0.0 };
            (plan.size_ahead_bits, plan.size_full_bits, seg_s + ahead_s)
        } else {
            let shipped = history.base(k + 1 - phi)?;
            let plan = BlockPlan::new(manifest, k, shipped, decision.rate_base, decision.rate_enh)?;
            let ahead_s = if manifest.carries_base_layer(k) { seg_s } else { 0.0 };
            (plan.size_base_bits, plan.size_enh_bits, ahead_s)
        };
        let size = size_base + size_enh;
        total_bits += size;

        let start = t;
        let end = if size == 0 {
            t
        } else {
            t + trace.download_time(t, size)?
        };
        t = end;

        let throughput = if size > 0 && end > start {
            Some(measured_throughput(start, end, size)?)
        } else {
            None
        };
        if let Some(tp) = throughput {
            estimator.observe(tp);
        }

        player.set_in_flight(k);
        player.advance_to(end)?;
        let new_prefix = playable_prefix(manifest, layered, k);
        player.extend_playable(new_prefix as f64 * seg_s)?;
        let playable_added_s = (new_prefix - prefix) as f64 * seg_s;
        prefix = new_prefix;
        if k == 1 {
            player.begin_playback()?;
        } else if player.phase() == Phase::Stalled {
            player.resume()?;
        }

        blocks.push(BlockRecord {
            index: k,
            rate_base_bps: decision.rate_base,
            rate_enh_bps: decision.rate_enh,
            size_base_bits: size_base,
            size_enh_bits: size_enh,
            start_s: start,
            end_s: end,
            buffer_at_decision_s: buffer_at_decision,
            estimate_bps: estimate,
            throughput_bps: throughput,
            content_added_s,
            playable_added_s,
        });
    }

    let playback_finish_s = player.drain_to_finish()?;

    let mut segments = Vec::with_capacity(n);
    for s in 1..=n {
        let play_start_s = player
            .play_start_s(s)
            .expect("every segment is stamped once playback finished");
        let rec = if !layered || manifest.is_bootstrap(s) {
            // Whole segment in one block: nothing can arrive late.
            let rate = history.enh(s)?;
            let arrival = blocks[s - 1].end_s;
            SegmentRecord {
                index: s,
                shipped_base_bps: rate,
                requested_bps: rate,
                rendered_bps: rate,
                base_arrival_s: arrival,
                enh_arrival_s: arrival,
                play_start_s,
                enhancement_on_time: true,
            }
        } else {
            let shipped = history.base(s + 1 - phi)?;
            let requested = history.enh(s)?;
            let enh_arrival_s = blocks[s - 1].end_s;
            let on_time = enh_arrival_s <= play_start_s + 1e-9;
            SegmentRecord {
                index: s,
                shipped_base_bps: shipped,
                requested_bps: requested,
                rendered_bps: if on_time { requested } else { shipped },
                base_arrival_s: blocks[s - phi].end_s,
                enh_arrival_s,
                play_start_s,
                enhancement_on_time: on_time,
            }
        };
        segments.push(rec);
    }

    Ok(SimulationResult {
        policy: policy.id(),
        layered,
        blocks,
        segments,
        startup_delay_s: player
            .startup_delay_s()
            .expect("playback began at the first block"),
        stalls: player.stalls().to_vec(),
        playback_finish_s,
        last_download_end_s: t,
        total_downloaded_bits: total_bits,
    })
}
