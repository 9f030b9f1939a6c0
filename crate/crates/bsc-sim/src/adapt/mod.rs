//! Adaptation policies: who decides what rate each block is fetched at.
//!
//! Five policies share one interface. Two are layered (they exploit the
//! shifted block structure and decide a base rate and an enhancement target
//! separately), three fetch whole segments and serve as baselines:
//!
//! * [`PolicyId::TbBsc`]: throughput-driven, layered.
//! * [`PolicyId::BbBsc`]: buffer-driven, layered, with a slow top layer.
//! * [`PolicyId::TbSvc`]: throughput-driven whole segments.
//! * [`PolicyId::Bba1`]: buffer-driven whole segments (adjustment function
//!   with a dead band).
//! * [`PolicyId::Bba0`]: buffer-driven whole segments (fixed bands, one rung
//!   per step).

pub mod adjustment;
pub mod buffer;
pub mod estimator;
pub mod throughput;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ladder::BitrateLadder;
use crate::manifest::Manifest;
use adjustment::AdjustmentFunction;
use buffer::StepwiseThresholds;
use estimator::{EstimatorMode, ThroughputEstimator};

/// Rates chosen for one block.
///
/// For layered policies `rate_base` is the base layer going out ahead and
/// `rate_enh` the cumulative target of the block's own segment; bootstrap
/// blocks put the whole-segment rate in `rate_enh` and the fixed bottom-rate
/// layer ahead in `rate_base`. Whole-segment policies set both fields to the
/// segment rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub rate_base: u64,
    pub rate_enh: u64,
}

/// Past decisions, 1-indexed by block.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct History {
    decisions: Vec<Decision>,
}

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, d: Decision) {
        self.decisions.push(d);
    }

    pub fn len(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }

    fn get(&self, block: usize) -> Result<Decision> {
        if block == 0 || block > self.decisions.len() {
            return Err(Error::Misuse(format!(
                "no decision recorded for block {block} (history has {})",
                self.decisions.len()
            )));
        }
        Ok(self.decisions[block - 1])
    }

    /// Base rate chosen at block `block`.
    pub fn base(&self, block: usize) -> Result<u64> {
        Ok(self.get(block)?.rate_base)
    }

    /// Enhancement target (or whole-segment rate) chosen at block `block`.
    pub fn enh(&self, block: usize) -> Result<u64> {
        Ok(self.get(block)?.rate_enh)
    }

    fn base_window(&self, from: usize, to: usize) -> Result<Vec<u64>> {
        (from..=to).map(|i| self.base(i)).collect()
    }
}

/// Everything a policy may look at when deciding block `block`.
pub struct DecisionContext<'a> {
    pub block: usize,
    /// Playable content ahead of the playhead at the decision instant.
    pub buffer_s: f64,
    /// Current throughput estimate; `None` before the first measurement.
    pub estimate_bps: Option<f64>,
    pub manifest: &'a Manifest,
    pub history: &'a History,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolicyId {
    #[serde(rename = "tb-bsc")]
    TbBsc,
    #[serde(rename = "bb-bsc")]
    BbBsc,
    #[serde(rename = "tb-svc")]
    TbSvc,
    #[serde(rename = "bba0")]
    Bba0,
    #[serde(rename = "bba1")]
    Bba1,
}

impl PolicyId {
    pub fn as_str(&self) -> &'static str {
        match self {
            PolicyId::TbBsc => "tb-bsc",
            PolicyId::BbBsc => "bb-bsc",
            PolicyId::TbSvc => "tb-svc",
            PolicyId::Bba0 => "bba0",
            PolicyId::Bba1 => "bba1",
        }
    }

    pub const ALL: [PolicyId; 5] = [
        PolicyId::TbBsc,
        PolicyId::BbBsc,
        PolicyId::TbSvc,
        PolicyId::Bba0,
        PolicyId::Bba1,
    ];
}

impl fmt::Display for PolicyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for PolicyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown policy `{s}`")))
    }
}

fn default_smoothing_weight() -> f64 {
    0.2
}
fn default_reservoir() -> f64 {
    20.0
}
fn default_cushion_base() -> f64 {
    70.0
}
fn default_cushion_top() -> f64 {
    50.0
}
fn default_stepwise() -> [f64; 3] {
    [20.0, 45.0, 70.0]
}
fn default_estimator() -> EstimatorMode {
    EstimatorMode::Smoothed
}

/// Declarative policy selection plus every tunable any of the policies uses.
/// Fields irrelevant to the chosen policy are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    pub id: PolicyId,
    #[serde(default = "default_estimator")]
    pub estimator: EstimatorMode,
    #[serde(default = "default_smoothing_weight")]
    pub smoothing_weight: f64,
    /// Reservoir of the buffer-based rules, seconds.
    #[serde(default = "default_reservoir")]
    pub reservoir_s: f64,
    /// Cushion of the base-layer / whole-segment adjustment map, seconds.
    #[serde(default = "default_cushion_base")]
    pub cushion_base_s: f64,
    /// Cushion of the top-layer adjustment map, seconds.
    #[serde(default = "default_cushion_top")]
    pub cushion_top_s: f64,
    /// `[low, hold, high]` bands of the stepwise rule, seconds.
    #[serde(default = "default_stepwise")]
    pub stepwise_thresholds_s: [f64; 3],
    /// Pin the enhancement target to the base rate (layered throughput
    /// policy only). Turns the layered scheme into a whole-segment
    /// equivalent; used to cross-check the two code paths.
    #[serde(default)]
    pub force_enh_equal_base: bool,
}

impl PolicyConfig {
    pub fn new(id: PolicyId) -> Self {
        Self {
            id,
            estimator: default_estimator(),
            smoothing_weight: default_smoothing_weight(),
            reservoir_s: default_reservoir(),
            cushion_base_s: default_cushion_base(),
            cushion_top_s: default_cushion_top(),
            stepwise_thresholds_s: default_stepwise(),
            force_enh_equal_base: false,
        }
    }

    /// Materializes the policy state machine and its estimator.
    pub fn build(&self, ladder: &BitrateLadder) -> Result<(Policy, ThroughputEstimator)> {
        let estimator = ThroughputEstimator::new(self.estimator, self.smoothing_weight)?;
        let policy = match self.id {
            PolicyId::TbBsc => Policy::TbBsc {
                force_enh_equal_base: self.force_enh_equal_base,
            },
            PolicyId::TbSvc => Policy::TbSvc,
            PolicyId::BbBsc => Policy::BbBsc {
                base_map: AdjustmentFunction::new(
                    ladder.clone(),
                    self.reservoir_s,
                    self.cushion_base_s,
                )?,
                top_map: AdjustmentFunction::new(
                    ladder.clone(),
                    self.reservoir_s,
                    self.cushion_top_s,
                )?,
                pinned_top: None,
            },
            PolicyId::Bba1 => Policy::Bba1 {
                map: AdjustmentFunction::new(
                    ladder.clone(),
                    self.reservoir_s,
                    self.cushion_base_s,
                )?,
            },
            PolicyId::Bba0 => Policy::Bba0 {
                thresholds: StepwiseThresholds::new(
                    self.stepwise_thresholds_s[0],
                    self.stepwise_thresholds_s[1],
                    self.stepwise_thresholds_s[2],
                )?,
            },
        };
        Ok((policy, estimator))
    }
}

/// Policy state machine. Most policies are pure functions of the context;
/// the layered buffer policy additionally carries its pinned top-layer
/// target between blocks.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    TbBsc {
        force_enh_equal_base: bool,
    },
    TbSvc,
    BbBsc {
        base_map: AdjustmentFunction,
        top_map: AdjustmentFunction,
        /// Raw output of the last top-layer decision, held between
        /// re-decision blocks.
        pinned_top: Option<u64>,
    },
    Bba1 {
        map: AdjustmentFunction,
    },
    Bba0 {
        thresholds: StepwiseThresholds,
    },
}

impl Policy {
    /// Layered policies build shifted blocks; the rest fetch whole segments.
    pub fn is_layered(&self) -> bool {
        matches!(self, Policy::TbBsc { .. } | Policy::BbBsc { .. })
    }

    pub fn id(&self) -> PolicyId {
        match self {
            Policy::TbBsc { .. } => PolicyId::TbBsc,
            Policy::TbSvc => PolicyId::TbSvc,
            Policy::BbBsc { .. } => PolicyId::BbBsc,
            Policy::Bba1 { .. } => PolicyId::Bba1,
            Policy::Bba0 { .. } => PolicyId::Bba0,
        }
    }

    pub fn decide(&mut self, ctx: &DecisionContext<'_>) -> Result<Decision> {
        let ladder = ctx.manifest.ladder();
        let k = ctx.block;
        if k == 0 || k > ctx.manifest.segment_count() {
            return Err(Error::Misuse(format!("block {k} out of session range")));
        }
        if ctx.history.len() + 1 != k {
            return Err(Error::Misuse(format!(
                "deciding block {k} but history covers {} blocks",
                ctx.history.len()
            )));
        }
        match self {
            Policy::TbSvc => {
                let prev = if k == 1 {
                    ladder.min_rate()
                } else {
                    ctx.history.base(k - 1)?
                };
                let rate = if k == 1 {
                    ladder.min_rate()
                } else {
                    throughput::segment_rate(ladder, ctx.estimate_bps, prev)?
                };
                Ok(Decision {
                    rate_base: rate,
                    rate_enh: rate,
                })
            }
            Policy::Bba1 { map } => {
                let prev = if k == 1 {
                    ladder.min_rate()
                } else {
                    ctx.history.base(k - 1)?
                };
                let rate = buffer::base_rate(map, ctx.buffer_s, prev)?;
                Ok(Decision {
                    rate_base: rate,
                    rate_enh: rate,
                })
            }
            Policy::Bba0 { thresholds } => {
                let prev = if k == 1 {
                    ladder.min_rate()
                } else {
                    ctx.history.base(k - 1)?
                };
                let rate = buffer::stepwise_rate(ladder, thresholds, ctx.buffer_s, prev)?;
                Ok(Decision {
                    rate_base: rate,
                    rate_enh: rate,
                })
            }
            Policy::TbBsc {
                force_enh_equal_base,
            } => {
                if ctx.manifest.is_bootstrap(k) {
                    let prev_full = if k == 1 {
                        None
                    } else {
                        Some(ctx.history.enh(k - 1)?)
                    };
                    let full = throughput::bootstrap_rate(ladder, ctx.estimate_bps, prev_full)?;
                    return Ok(Decision {
                        rate_base: ladder.min_rate(),
                        rate_enh: full,
                    });
                }
                let phi = ctx.manifest.offset_blocks();
                let shipped = ctx.history.base(k + 1 - phi)?;
                let prev_base = ctx.history.base(k - 1)?;
                if *force_enh_equal_base {
                    let base = throughput::segment_rate(ladder, ctx.estimate_bps, prev_base)?;
                    return Ok(Decision {
                        rate_base: base,
                        rate_enh: base.max(shipped),
                    });
                }
                let prev_enh = ctx.history.enh(k - 1)?;
                let (base, enh) = throughput::block_rates(
                    ladder,
                    ctx.manifest.offset_window_s(),
                    ctx.buffer_s,
                    ctx.estimate_bps,
                    prev_base,
                    prev_enh,
                    shipped,
                )?;
                Ok(Decision {
                    rate_base: base,
                    rate_enh: enh,
                })
            }
            Policy::BbBsc {
                base_map,
                top_map,
                pinned_top,
            } => {
                if ctx.manifest.is_bootstrap(k) {
                    let prev_full = if k == 1 {
                        ladder.min_rate()
                    } else {
                        ctx.history.enh(k - 1)?
                    };
                    let full = buffer::base_rate(base_map, ctx.buffer_s, prev_full)?;
                    return Ok(Decision {
                        rate_base: ladder.min_rate(),
                        rate_enh: full,
                    });
                }
                let phi = ctx.manifest.offset_blocks();
                let shipped = ctx.history.base(k + 1 - phi)?;
                let prev_base = ctx.history.base(k - 1)?;
                let base = buffer::base_rate(base_map, ctx.buffer_s, prev_base)?;
                // The top layer is re-decided every offset-1 blocks and held
                // in between; before a full window of base rates exists it
                // stays down at the shipped rate.
                if (k - 1) % (phi - 1) == 0 {
                    let new_pin = if k >= 2 * phi - 1 {
                        let window = ctx.history.base_window(k + 2 - 2 * phi, k - phi)?;
                        let prev_top = pinned_top.unwrap_or(shipped);
                        buffer::top_rate(top_map, ctx.buffer_s, prev_top, &window, shipped)?
                    } else {
                        shipped
                    };
                    *pinned_top = Some(new_pin);
                }
                let pin = pinned_top.ok_or_else(|| {
                    Error::Misuse("top-layer target missing before first re-decision".into())
                })?;
                Ok(Decision {
                    rate_base: base,
                    rate_enh: pin.max(shipped),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(n: usize, phi: usize) -> Manifest {
        Manifest::new(n, 2.0, phi, 25.0, BitrateLadder::default()).unwrap()
    }

    fn decide(
        policy: &mut Policy,
        manifest: &Manifest,
        history: &mut History,
        buffer_s: f64,
        estimate_bps: Option<f64>,
    ) -> Decision {
        let ctx = DecisionContext {
            block: history.len() + 1,
            buffer_s,
            estimate_bps,
            manifest,
            history,
        };
        let d = policy.decide(&ctx).unwrap();
        history.push(d);
        d
    }

    #[test]
    fn policy_ids_round_trip_through_strings() {
        for id in PolicyId::ALL {
            assert_eq!(id.as_str().parse::<PolicyId>().unwrap(), id);
        }
        assert!("dash".parse::<PolicyId>().is_err());
    }

    #[test]
    fn history_indexing_is_one_based_and_checked() {
        let mut h = History::new();
        assert!(h.base(1).is_err());
        h.push(Decision {
            rate_base: 140_000,
            rate_enh: 250_000,
        });
        assert_eq!(h.base(1).unwrap(), 140_000);
        assert_eq!(h.enh(1).unwrap(), 250_000);
        assert!(h.base(0).is_err());
        assert!(h.base(2).is_err());
    }

    #[test]
    fn decide_rejects_out_of_step_contexts() {
        let m = manifest(10, 4);
        let h = History::new();
        let mut p = Policy::TbSvc;
        let ctx = DecisionContext {
            block: 3, // history is empty, so only block 1 is decidable
            buffer_s: 0.0,
            estimate_bps: None,
            manifest: &m,
            history: &h,
        };
        assert!(p.decide(&ctx).is_err());
    }

    #[test]
    fn layered_throughput_policy_ramps_through_bootstrap() {
        let m = manifest(20, 4);
        let (mut p, _) = PolicyConfig::new(PolicyId::TbBsc).build(m.ladder()).unwrap();
        let mut h = History::new();
        // First block: no estimate, bottom rung, bottom-rate layer ahead.
        let d = decide(&mut p, &m, &mut h, 0.0, None);
        assert_eq!(
            d,
            Decision {
                rate_base: 140_000,
                rate_enh: 140_000
            }
        );
        // Plenty of throughput: one rung per block regardless.
        let d = decide(&mut p, &m, &mut h, 2.0, Some(5_000_000.0));
        assert_eq!(d.rate_enh, 250_000);
        let d = decide(&mut p, &m, &mut h, 4.0, Some(5_000_000.0));
        assert_eq!(d.rate_enh, 420_000);
        assert_eq!(d.rate_base, 140_000);
        // First regular block: base steps up from the bottom-rate layers,
        // enhancement climbs from the last bootstrap segment.
        let d = decide(&mut p, &m, &mut h, 12.0, Some(5_000_000.0));
        assert_eq!(d.rate_base, 250_000);
        assert_eq!(d.rate_enh, 760_000); // step up from 420_000
    }

    #[test]
    fn degenerate_mode_pins_enhancement_to_the_base_rate() {
        let m = manifest(20, 4);
        let cfg = PolicyConfig {
            force_enh_equal_base: true,
            ..PolicyConfig::new(PolicyId::TbBsc)
        };
        let (mut p, _) = cfg.build(m.ladder()).unwrap();
        let mut h = History::new();
        for _ in 0..3 {
            decide(&mut p, &m, &mut h, 5.0, Some(2_000_000.0));
        }
        for k in 4..=20 {
            let d = decide(&mut p, &m, &mut h, 30.0, Some(2_000_000.0));
            let shipped = h.base(k + 1 - 4).unwrap();
            assert_eq!(d.rate_enh, d.rate_base.max(shipped));
        }
    }

    #[test]
    fn layered_buffer_policy_pins_the_top_between_re_decisions() {
        let m = manifest(40, 4);
        let (mut p, _) = PolicyConfig::new(PolicyId::BbBsc).build(m.ladder()).unwrap();
        let mut h = History::new();
        // Bootstrap: tiny buffers, everything at the bottom.
        for _ in 1..4 {
            let d = decide(&mut p, &m, &mut h, 1.0, None);
            assert_eq!(d.rate_enh, 140_000);
        }
        // Blocks 4..6: first re-decision window, history too short, so the
        // target stays at the shipped base.
        for k in 4..7 {
            let d = decide(&mut p, &m, &mut h, 30.0, None);
            assert_eq!(d.rate_enh, h.base(k - 3).unwrap(), "block {k}");
        }
        // Block 7 (k-1 divisible by 3) re-decides with window blocks 1..=3;
        // a 40 s buffer maps above the rung over 140K, so the top moves.
        let d7 = decide(&mut p, &m, &mut h, 40.0, None);
        assert!(d7.rate_enh > 140_000);
        // Blocks 8 and 9 must hold that exact pin.
        let d8 = decide(&mut p, &m, &mut h, 90.0, None);
        let d9 = decide(&mut p, &m, &mut h, 0.0, None);
        assert_eq!(d8.rate_enh, d7.rate_enh);
        assert_eq!(d9.rate_enh, d7.rate_enh);
        // Block 10 re-decides again and may move.
        let d10 = decide(&mut p, &m, &mut h, 90.0, None);
        assert_eq!(d10.rate_enh, 2_900_000); // buffer past the knee
    }

    #[test]
    fn whole_segment_policies_mirror_their_rules() {
        let m = manifest(10, 4);
        // Throughput baseline starts at the bottom and follows the ladder.
        let (mut p, _) = PolicyConfig::new(PolicyId::TbSvc).build(m.ladder()).unwrap();
        let mut h = History::new();
        let d = decide(&mut p, &m, &mut h, 0.0, None);
        assert_eq!(d.rate_base, 140_000);
        let d = decide(&mut p, &m, &mut h, 2.0, Some(1_800_000.0));
        assert_eq!(d.rate_base, 250_000);
        assert_eq!(d.rate_base, d.rate_enh);

        // Stepwise baseline holds inside its band.
        let (mut p, _) = PolicyConfig::new(PolicyId::Bba0).build(m.ladder()).unwrap();
        let mut h = History::new();
        decide(&mut p, &m, &mut h, 50.0, None); // k=1: prev is the bottom rung
        let d = decide(&mut p, &m, &mut h, 50.0, None);
        assert_eq!(d.rate_base, 140_000);
        let d = decide(&mut p, &m, &mut h, 75.0, None);
        assert_eq!(d.rate_base, 250_000);
    }

    #[test]
    fn build_rejects_bad_knobs() {
        let ladder = BitrateLadder::default();
        let mut cfg = PolicyConfig::new(PolicyId::TbBsc);
        cfg.smoothing_weight = 0.0;
        assert!(cfg.build(&ladder).is_err());
        let mut cfg = PolicyConfig::new(PolicyId::BbBsc);
        cfg.cushion_top_s = -3.0;
        assert!(cfg.build(&ladder).is_err());
        let mut cfg = PolicyConfig::new(PolicyId::Bba0);
        cfg.stepwise_thresholds_s = [45.0, 20.0, 70.0];
        assert!(cfg.build(&ladder).is_err());
    }
}
