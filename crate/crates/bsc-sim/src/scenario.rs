//! Scenario files: one document that names a session and everything needed
//! to reproduce it.
//!
//! A scenario is a manifest, a network (either a synthetic model or a trace
//! file), a policy, and the seeds to run. Files are TOML or JSON by
//! extension. Four presets ship with the crate and can be used anywhere a
//! scenario path is expected.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adapt::{PolicyConfig, PolicyId};
use crate::engine::{run_session, SimulationResult};
use crate::error::{Error, Result};
use crate::ladder::BitrateLadder;
use crate::manifest::Manifest;
use crate::metrics::{aggregate, session_metrics, AggregateMetrics, Basis, SessionMetrics};
use crate::network::CapacityTrace;
use crate::synthetic::{self, SyntheticTraceConfig};

/// Presentation shape: how many segments, how long, how far ahead base
/// layers ship.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestConfig {
    pub segment_count: usize,
    #[serde(default = "default_segment_duration")]
    pub segment_duration_s: f64,
    pub offset_blocks: usize,
    #[serde(default = "default_fps")]
    pub fps: f64,
    /// Bitrate ladder in bps, lowest first. Omitted means the built-in
    /// 140 Kbps to 2.9 Mbps ladder.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder_bps: Option<Vec<u64>>,
}

fn default_segment_duration() -> f64 {
    2.0
}

fn default_fps() -> f64 {
    25.0
}

impl ManifestConfig {
    pub fn build(&self) -> Result<Manifest> {
        let ladder = match &self.ladder_bps {
            Some(rungs) => BitrateLadder::new(rungs.clone())?,
            None => BitrateLadder::default(),
        };
        Manifest::new(
            self.segment_count,
            self.segment_duration_s,
            self.offset_blocks,
            self.fps,
            ladder,
        )
    }
}

/// Where the capacity comes from: exactly one of a synthetic model or a
/// trace CSV on disk.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticTraceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_file: Option<PathBuf>,
}

impl NetworkConfig {
    fn validate(&self) -> Result<()> {
        match (&self.synthetic, &self.trace_file) {
            (Some(s), None) => s.validate(),
            (None, Some(_)) => Ok(()),
            (None, None) => Err(Error::Config(
                "network needs either a synthetic model or a trace_file".into(),
            )),
            (Some(_), Some(_)) => Err(Error::Config(
                "network has both a synthetic model and a trace_file; pick one".into(),
            )),
        }
    }
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

/// A complete, reproducible experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub basis: Basis,
    /// Where run artifacts go; defaults to `out/<name>` under the working
    /// directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub manifest: ManifestConfig,
    pub network: NetworkConfig,
    pub policy: PolicyConfig,
    /// Directory of the file this scenario came from; relative trace paths
    /// resolve against it.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

pub const PRESET_NAMES: [&str; 4] = ["scenario1", "scenario2", "scenario3", "hsdpa"];

/// One of the built-in scenarios by name.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let text = match name {
        "scenario1" => include_str!("../presets/scenario1.toml"),
        "scenario2" => include_str!("../presets/scenario2.toml"),
        "scenario3" => include_str!("../presets/scenario3.toml"),
        "hsdpa" => include_str!("../presets/hsdpa.toml"),
        other => {
            return Err(Error::Config(format!(
                "no preset named `{other}` (have: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    ScenarioConfig::from_toml_str(text)
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self =
            toml::from_str(text).map_err(|e| Error::Config(format!("scenario TOML: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario JSON: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads a scenario file, dispatching on the `.toml` / `.json` extension.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => Self::from_toml_str(&text),
            Some("json") => Self::from_json_str(&text),
            _ => Err(Error::Config(format!(
                "cannot tell the format of `{}`; use a .toml or .json extension",
                path.display()
            ))),
        }?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    /// Treats `arg` as a scenario path if one exists there, otherwise as a
    /// preset name.
    pub fn load(arg: &str) -> Result<Self> {
        let path = Path::new(arg);
        if path.exists() {
            Self::from_path(path)
        } else if PRESET_NAMES.contains(&arg) {
            preset(arg)
        } else {
            Err(Error::Config(format!(
                "`{arg}` is neither a scenario file nor a preset name (presets: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::Config("scenario has an empty name".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("scenario has no seeds to run".into()));
        }
        self.manifest.build()?;
        self.network.validate()?;
        let manifest = self.manifest.build()?;
        self.policy.build(manifest.ladder())?;
        Ok(())
    }

    /// The capacity trace for one seed. Synthetic models are re-seeded per
    /// run; a trace file is the same for every seed.
    pub fn build_trace(&self, seed: u64) -> Result<CapacityTrace> {
        match (&self.network.synthetic, &self.network.trace_file) {
            (Some(model), None) => synthetic::generate(&model.clone().with_seed(seed)),
            (None, Some(file)) => {
                let path = match &self.base_dir {
                    Some(dir) if file.is_relative() => dir.join(file),
                    _ => file.clone(),
                };
                CapacityTrace::load(&path)
            }
            _ => Err(Error::Config("network config is not valid".into())),
        }
    }

    /// Runs the scenario once under `seed`.
    pub fn run_one(&self, seed: u64) -> Result<SimulationResult> {
        let manifest = self.manifest.build()?;
        let trace = self.build_trace(seed)?;
        run_session(&manifest, &trace, &self.policy)
    }

    /// Runs every seed in parallel. Results come back in seed order.
    pub fn run_all(&self) -> Result<Vec<(u64, SimulationResult)>> {
        self.seeds
            .par_iter()
            .map(|&seed| Ok((seed, self.run_one(seed)?)))
            .collect()
    }

    /// Metrics for every seed plus their aggregate, on the scenario's basis.
    pub fn run_metrics(&self) -> Result<(Vec<(u64, SessionMetrics)>, AggregateMetrics)> {
        let runs = self.run_all()?;
        let per_seed: Vec<(u64, SessionMetrics)> = runs
            .iter()
            .map(|(seed, r)| (*seed, session_metrics(r, self.basis)))
            .collect();
        let agg = aggregate(&per_seed.iter().map(|(_, m)| *m).collect::<Vec<_>>())?;
        Ok((per_seed, agg))
    }
}

/// Parameters a sweep can vary. Each takes the scenario as a baseline and
/// rewrites one knob.
pub const SWEEP_PARAMS: [&str; 7] = ["phi", "policy", "c1", "c2", "reservoir", "weight", "link"];

/// A copy of `cfg` with `param` set to `value`.
pub fn apply_param(cfg: &ScenarioConfig, param: &str, value: &str) -> Result<ScenarioConfig> {
    let mut out = cfg.clone();
    let bad = |what: &str| Error::Config(format!("`{value}` is not a valid {what} for {param}"));
    match param {
        "phi" => out.manifest.offset_blocks = value.parse().map_err(|_| bad("block count"))?,
        "policy" => out.policy.id = value.parse::<PolicyId>()?,
        "c1" => out.policy.cushion_base_s = value.parse().map_err(|_| bad("duration"))?,
        "c2" => out.policy.cushion_top_s = value.parse().map_err(|_| bad("duration"))?,
        "reservoir" => out.policy.reservoir_s = value.parse().map_err(|_| bad("duration"))?,
        "weight" => out.policy.smoothing_weight = value.parse().map_err(|_| bad("weight"))?,
        "link" => match &mut out.network.synthetic {
            Some(model) => {
                model.link_capacity_bps = value.parse().map_err(|_| bad("bitrate"))?;
            }
            None => {
                return Err(Error::Config(
                    "sweeping `link` needs a synthetic network model".into(),
                ))
            }
        },
        other => {
            return Err(Error::Config(format!(
                "unknown sweep parameter `{other}` (have: {})",
                SWEEP_PARAMS.join(", ")
            )))
        }
    }
    out.validate()?;
    Ok(out)
}

/// Metrics of one (value, seed) cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub value: String,
    pub seed: u64,
    pub metrics: SessionMetrics,
}

/// A finished sweep: every cell plus one aggregate per value, both in input
/// order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub param: String,
    pub cells: Vec<SweepCell>,
    pub aggregates: Vec<(String, AggregateMetrics)>,
}

/// Runs `cfg` once per (value, seed) pair in parallel.
pub fn run_sweep(cfg: &ScenarioConfig, param: &str, values: &[String]) -> Result<SweepOutcome> {
    if values.is_empty() {
        return Err(Error::Config("sweep has no values".into()));
    }
    let variants: Vec<(String, ScenarioConfig)> = values
        .iter()
        .map(|v| Ok((v.clone(), apply_param(cfg, param, v)?)))
        .collect::<Result<_>>()?;
    let pairs: Vec<(&String, &ScenarioConfig, u64)> = variants
        .iter()
        .flat_map(|(v, c)| c.seeds.iter().map(move |&s| (v, c, s)))
        .collect();
    let cells: Vec<SweepCell> = pairs
        .par_iter()
        .map(|(value, variant, seed)| {
            let result = variant.run_one(*seed)?;
            Ok(SweepCell {
                value: (*value).clone(),
                seed: *seed,
                metrics: session_metrics(&result, variant.basis),
            })
        })
        .collect::<Result<_>>()?;
    let aggregates = values
        .iter()
        .map(|v| {
            let ms: Vec<SessionMetrics> = cells
                .iter()
                .filter(|c| &c.value == v)
                .map(|c| c.metrics)
                .collect();
            Ok((v.clone(), aggregate(&ms)?))
        })
        .collect::<Result<_>>()?;
    Ok(SweepOutcome {
        param: param.to_string(),
        cells,
        aggregates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_toml() -> &'static str {
        r#"
            name = "tiny"
            seeds = [3, 4]

            [manifest]
            segment_count = 12
            offset_blocks = 4

            [network.synthetic]
            link_capacity_bps = 2_000_000
            state_levels = [1.0]
            mean_state_holding_s = 60.0
            oscillation_amplitude = 0.0
            oscillation_period_s = 4.0
            duration_s = 60.0

            [policy]
            id = "tb-bsc"
        "#
    }

    #[test]
    fn toml_and_json_describe_the_same_scenario() {
        let a = ScenarioConfig::from_toml_str(tiny_toml()).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        let b = ScenarioConfig::from_json_str(&json).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis, Basis::Rendered);
        assert_eq!(a.manifest.segment_duration_s, 2.0);
    }

    #[test]
    fn network_must_have_exactly_one_source() {
        let mut cfg = ScenarioConfig::from_toml_str(tiny_toml()).unwrap();
        cfg.network.trace_file = Some("trace.csv".into());
        assert!(cfg.validate().is_err());
        cfg.network.synthetic = None;
        cfg.network.trace_file = None;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = tiny_toml().replace("name = \"tiny\"", "name = \"tiny\"\nturbo = true");
        assert!(ScenarioConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn presets_parse_and_run() {
        for name in PRESET_NAMES {
            let cfg = preset(name).unwrap();
            assert_eq!(cfg.name, name);
            // Presets must actually be runnable end to end.
            let r = cfg.run_one(cfg.seeds[0]).unwrap();
            assert_eq!(r.segments.len(), cfg.manifest.segment_count);
        }
        assert!(preset("scenario9").is_err());
    }

    #[test]
    fn trace_files_resolve_against_the_scenario_directory() {
        let dir = tempfile::tempdir().unwrap();
        let trace = CapacityTrace::constant(1_500_000);
        trace.save(&dir.path().join("link.csv")).unwrap();
        let mut cfg = ScenarioConfig::from_toml_str(tiny_toml()).unwrap();
        cfg.network.synthetic = None;
        cfg.network.trace_file = Some("link.csv".into());
        cfg.base_dir = Some(dir.path().to_path_buf());
        let got = cfg.build_trace(0).unwrap();
        assert_eq!(got, trace);
        let r = cfg.run_one(0).unwrap();
        assert_eq!(r.segments.len(), 12);
    }

    #[test]
    fn seeds_change_synthetic_runs_deterministically() {
        let mut cfg = ScenarioConfig::from_toml_str(tiny_toml()).unwrap();
        // Give the flat model some texture so seeds matter.
        cfg.network.synthetic.as_mut().unwrap().oscillation_amplitude = 0.5;
        cfg.network.synthetic.as_mut().unwrap().state_levels = vec![0.3, 1.0];
        let runs = cfg.run_all().unwrap();
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].0, 3);
        assert_eq!(runs[1].0, 4);
        assert_ne!(runs[0].1, runs[1].1, "different seeds, different sessions");
        let again = cfg.run_all().unwrap();
        assert_eq!(runs, again);
    }

    #[test]
    fn sweeps_cover_every_value_seed_pair() {
        let cfg = ScenarioConfig::from_toml_str(tiny_toml()).unwrap();
        let values: Vec<String> = ["2", "4", "6"].iter().map(|s| s.to_string()).collect();
        let out = run_sweep(&cfg, "phi", &values).unwrap();
        assert_eq!(out.cells.len(), 6);
        assert_eq!(out.aggregates.len(), 3);
        assert_eq!(out.aggregates[0].1.run_count, 2);
        // Order is values-major, seeds within.
        assert_eq!(out.cells[0].value, "2");
        assert_eq!(out.cells[0].seed, 3);
        assert_eq!(out.cells[1].seed, 4);
        assert_eq!(out.cells[2].value, "4");
        assert!(run_sweep(&cfg, "altitude", &values).is_err());
        assert!(run_sweep(&cfg, "phi", &[]).is_err());
    }

    #[test]
    fn sweep_values_are_validated_up_front() {
        let cfg = ScenarioConfig::from_toml_str(tiny_toml()).unwrap();
        let bad: Vec<String> = vec!["not-a-number".into()];
        assert!(run_sweep(&cfg, "phi", &bad).is_err());
        // Offset 1 is below the structural minimum and must be rejected by
        // validation, not crash mid-run.
        let bad: Vec<String> = vec!["1".into()];
        assert!(run_sweep(&cfg, "phi", &bad).is_err());
    }
}
