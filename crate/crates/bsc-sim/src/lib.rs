//! Deterministic simulator for HTTP adaptive streaming with backward-shifted
//! scalable coding.
//!
//! The download unit is a block: the base layer of a segment several
//! positions ahead of the playhead bundled with the enhancement layers of the
//! segment about to leave the buffer. Because every segment's base layer
//! arrived blocks ago, an enhancement that misses its deadline degrades
//! quality instead of stalling playback. This crate models that pipeline end
//! to end: bitrate ladders and block sizing ([`ladder`], [`manifest`],
//! [`block`]), piecewise-constant capacity traces and exact download timing
//! ([`network`], [`synthetic`]), the adaptation policies ([`adapt`]), the
//! download/playback event loop ([`engine`]), and session metrics
//! ([`metrics`]).
//!
//! Everything is deterministic: a manifest, a trace, and a policy
//! configuration reproduce a session bit for bit.

pub mod adapt;
pub mod block;
pub mod cli;
pub mod engine;
pub mod error;
pub mod ladder;
pub mod manifest;
pub mod metrics;
pub mod network;
pub mod scenario;
pub mod synthetic;

pub use adapt::{Decision, DecisionContext, History, Policy, PolicyConfig, PolicyId};
pub use block::{block_sizes, BlockPlan, BootstrapBlockPlan};
pub use engine::{run_session, BlockRecord, SegmentRecord, SimulationResult, StallEvent};
pub use error::{Error, Result};
pub use ladder::BitrateLadder;
pub use manifest::Manifest;
pub use metrics::{aggregate, session_metrics, AggregateMetrics, Basis, SessionMetrics};
pub use network::{measured_throughput, CapacityTrace};
pub use scenario::{apply_param, preset, run_sweep, ScenarioConfig, SweepOutcome, PRESET_NAMES};
pub use synthetic::{generate, SyntheticTraceConfig};
