//! Session quality metrics.
//!
//! All quality figures are computed over the per-segment rate sequence of a
//! finished session, on one of two bases: the rates the policy asked for, or
//! the rates that actually reached the screen (late enhancement layers fall
//! back to the shipped base). Variance is the population variance of that
//! sequence; a switch is any change between consecutive segments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::SimulationResult;
use crate::error::{Error, Result};

/// Which per-segment rate sequence the quality figures describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Rates the policy requested, whether or not they arrived in time.
    Requested,
    /// Rates on screen, the default.
    #[default]
    Rendered,
}

impl Basis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Basis::Requested => "requested",
            Basis::Rendered => "rendered",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "requested" => Ok(Basis::Requested),
            "rendered" => Ok(Basis::Rendered),
            other => Err(Error::Config(format!("unknown metrics basis `{other}`"))),
        }
    }
}

/// Quality summary of one session.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionMetrics {
    pub basis: Basis,
    pub segment_count: usize,
    pub average_quality_bps: f64,
    /// Population variance of the per-segment rate, in bps squared.
    pub quality_variance_bps2: f64,
    /// Changes of rate between consecutive segments.
    pub switch_count: usize,
    pub interruption_count: usize,
    pub total_stall_time_s: f64,
    pub startup_delay_s: f64,
}

impl SessionMetrics {
    pub fn average_quality_kbps(&self) -> f64 {
        self.average_quality_bps / 1e3
    }

    /// The variance in (Kbps)^2, the unit most convenient at ladder scale.
    pub fn quality_variance_kbps2(&self) -> f64 {
        self.quality_variance_bps2 / 1e6
    }

    pub fn quality_std_bps(&self) -> f64 {
        self.quality_variance_bps2.sqrt()
    }
}

/// The rate sequence a basis selects.
pub fn segment_rates(result: &SimulationResult, basis: Basis) -> Vec<u64> {
    result
        .segments
        .iter()
        .map(|s| match basis {
            Basis::Requested => s.requested_bps,
            Basis::Rendered => s.rendered_bps,
        })
        .collect()
}

fn mean(values: &[u64]) -> f64 {
    values.iter().map(|&v| v as f64).sum::<f64>() / values.len() as f64
}

fn population_variance(values: &[u64], mean: f64) -> f64 {
    values
        .iter()
        .map(|&v| {
            let d = v as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / values.len() as f64
}

fn switch_count(values: &[u64]) -> usize {
    values.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Summarizes a finished session on the given basis.
pub fn session_metrics(result: &SimulationResult, basis: Basis) -> SessionMetrics {
    let rates = segment_rates(result, basis);
    let avg = mean(&rates);
    SessionMetrics {
        basis,
        segment_count: rates.len(),
        average_quality_bps: avg,
        quality_variance_bps2: population_variance(&rates, avg),
        switch_count: switch_count(&rates),
        interruption_count: result.stalls.len(),
        total_stall_time_s: result.total_stall_time_s(),
        startup_delay_s: result.startup_delay_s,
    }
}

/// Per-metric means over a batch of sessions (one per seed, typically).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateMetrics {
    pub run_count: usize,
    pub mean_quality_bps: f64,
    pub mean_quality_variance_bps2: f64,
    pub mean_switches: f64,
    pub mean_interruptions: f64,
    pub mean_stall_time_s: f64,
    pub mean_startup_delay_s: f64,
}

impl AggregateMetrics {
    pub fn mean_quality_kbps(&self) -> f64 {
        self.mean_quality_bps / 1e3
    }
}

/// Averages each metric over the batch. Errors on an empty batch.
pub fn aggregate(batch: &[SessionMetrics]) -> Result<AggregateMetrics> {
    if batch.is_empty() {
        return Err(Error::Misuse("aggregating zero sessions".into()));
    }
    let n = batch.len() as f64;
    Ok(AggregateMetrics {
        run_count: batch.len(),
        mean_quality_bps: batch.iter().map(|m| m.average_quality_bps).sum::<f64>() / n,
        mean_quality_variance_bps2: batch.iter().map(|m| m.quality_variance_bps2).sum::<f64>() / n,
        mean_switches: batch.iter().map(|m| m.switch_count as f64).sum::<f64>() / n,
        mean_interruptions: batch.iter().map(|m| m.interruption_count as f64).sum::<f64>() / n,
        mean_stall_time_s: batch.iter().map(|m| m.total_stall_time_s).sum::<f64>() / n,
        mean_startup_delay_s: batch.iter().map(|m| m.startup_delay_s).sum::<f64>() / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapt::{PolicyConfig, PolicyId};
    use crate::engine::{run_session, SegmentRecord};
    use crate::ladder::BitrateLadder;
    use crate::manifest::Manifest;
    use crate::network::CapacityTrace;

    /// A result with just enough filled in for the metrics layer.
    fn result_with(requested: &[u64], rendered: &[u64]) -> SimulationResult {
        let segments = requested
            .iter()
            .zip(rendered)
            .enumerate()
            .map(|(i, (&req, &ren))| SegmentRecord {
                index: i + 1,
                shipped_base_bps: ren.min(req),
                requested_bps: req,
                rendered_bps: ren,
                base_arrival_s: 0.0,
                enh_arrival_s: 0.0,
                play_start_s: 0.0,
                enhancement_on_time: req == ren,
            })
            .collect();
        SimulationResult {
            policy: PolicyId::TbBsc,
            layered: true,
            blocks: Vec::new(),
            segments,
            startup_delay_s: 0.4,
            stalls: Vec::new(),
            playback_finish_s: 0.0,
            last_download_end_s: 0.0,
            total_downloaded_bits: 0,
        }
    }

    #[test]
    fn mean_variance_and_switches_match_hand_figures() {
        // 140, 140, 250 Kbps: mean 176.666.. Kbps, population variance
        // 2688.888.. Kbps^2, one switch.
        let r = result_with(
            &[140_000, 140_000, 250_000],
            &[140_000, 140_000, 250_000],
        );
        let m = session_metrics(&r, Basis::Requested);
        assert!((m.average_quality_bps - 176_666.666_666_666_66).abs() < 1e-6);
        assert!((m.quality_variance_bps2 - 2.688_888_888_888_889e9).abs() < 1.0);
        assert!((m.quality_variance_kbps2() - 2_688.888_888_888_889).abs() < 1e-6);
        assert_eq!(m.switch_count, 1);
        assert_eq!(m.interruption_count, 0);
        assert!((m.startup_delay_s - 0.4).abs() < 1e-12);
    }

    #[test]
    fn bases_diverge_when_enhancements_miss_playout() {
        // Requested climbs, but half the enhancements were late.
        let r = result_with(
            &[140_000, 250_000, 420_000, 760_000],
            &[140_000, 140_000, 420_000, 140_000],
        );
        let req = session_metrics(&r, Basis::Requested);
        let ren = session_metrics(&r, Basis::Rendered);
        assert!(req.average_quality_bps > ren.average_quality_bps);
        assert_eq!(req.switch_count, 3);
        assert_eq!(ren.switch_count, 2);
    }

    #[test]
    fn hand_checked_session_yields_hand_checked_metrics() {
        // The constant 2 Mbps ramp session: one segment per rung.
        let m = Manifest::new(8, 2.0, 4, 25.0, BitrateLadder::default()).unwrap();
        let tr = CapacityTrace::constant(2_000_000);
        let r = run_session(&m, &tr, &PolicyConfig::new(PolicyId::TbBsc)).unwrap();
        let s = session_metrics(&r, Basis::Rendered);
        assert_eq!(s.segment_count, 8);
        assert!((s.average_quality_bps - 1_133_750.0).abs() < 1e-6);
        assert!((s.quality_variance_bps2 - 8.278_734_375e11).abs() < 1e3);
        assert_eq!(s.switch_count, 7);
        assert_eq!(s.interruption_count, 0);
        assert!((s.startup_delay_s - 0.28).abs() < 1e-9);
        // Requested and rendered coincide here: everything was on time.
        let req = session_metrics(&r, Basis::Requested);
        assert_eq!(req.average_quality_bps, s.average_quality_bps);
        assert_eq!(req.switch_count, s.switch_count);
    }

    #[test]
    fn aggregate_averages_each_field() {
        let a = session_metrics(
            &result_with(&[140_000, 140_000], &[140_000, 140_000]),
            Basis::Rendered,
        );
        let b = session_metrics(
            &result_with(&[420_000, 760_000], &[420_000, 760_000]),
            Basis::Rendered,
        );
        let agg = aggregate(&[a, b]).unwrap();
        assert_eq!(agg.run_count, 2);
        assert!((agg.mean_quality_bps - (140_000.0 + 590_000.0) / 2.0).abs() < 1e-9);
        assert!((agg.mean_switches - 0.5).abs() < 1e-12);
        assert!(aggregate(&[]).is_err());
    }
}
