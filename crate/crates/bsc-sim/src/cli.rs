//! Command implementations behind the thin binary: run a scenario, sweep a
//! parameter, or write a synthetic trace to disk.
//!
//! Every command takes a scenario file path or a preset name. `run` leaves
//! `summary.json` and per-seed timeline CSVs in the output directory;
//! `sweep` leaves `sweep.csv` with one row per (value, seed) plus a mean row
//! per value.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::engine::SimulationResult;
use crate::error::{Error, Result};
use crate::metrics::{AggregateMetrics, Basis, SessionMetrics};
use crate::scenario::{run_sweep, ScenarioConfig};

/// Overrides shared by `run` and `sweep`.
#[derive(Debug, Clone, Default)]
pub struct CommonArgs {
    /// Scenario file path or preset name.
    pub config: String,
    pub basis: Option<Basis>,
    pub seeds: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
}

fn load_with_overrides(args: &CommonArgs) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::load(&args.config)?;
    if let Some(basis) = args.basis {
        cfg.basis = basis;
    }
    if let Some(seeds) = &args.seeds {
        cfg.seeds = seeds.clone();
    }
    if let Some(out) = &args.out {
        cfg.output_dir = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn output_dir(cfg: &ScenarioConfig) -> PathBuf {
    cfg.output_dir
        .clone()
        .unwrap_or_else(|| Path::new("out").join(&cfg.name))
}

#[derive(Serialize)]
struct RunSummary {
    seed: u64,
    #[serde(flatten)]
    metrics: SessionMetrics,
    average_quality_kbps: f64,
    quality_variance_kbps2: f64,
}

#[derive(Serialize)]
struct Summary<'a> {
    schema_version: u32,
    name: &'a str,
    basis: Basis,
    scenario: &'a ScenarioConfig,
    runs: Vec<RunSummary>,
    aggregate: AggregateMetrics,
    aggregate_quality_kbps: f64,
}

fn timeline_csv(result: &SimulationResult) -> String {
    let mut out = String::from(
        "segment,requested_bps,rendered_bps,shipped_base_bps,enhancement_on_time,\
         decision_time_s,buffer_at_decision_s,play_start_s\n",
    );
    for (seg, block) in result.segments.iter().zip(&result.blocks) {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            seg.index,
            seg.requested_bps,
            seg.rendered_bps,
            seg.shipped_base_bps,
            seg.enhancement_on_time,
            block.start_s,
            block.buffer_at_decision_s,
            seg.play_start_s,
        )
        .expect("writing to a string cannot fail");
    }
    out
}

/// One timeline file per seed; the first seed doubles as `timeline.csv`.
fn timeline_name(seed: u64, first: bool) -> String {
    if first {
        "timeline.csv".to_string()
    } else {
        format!("timeline-{seed}.csv")
    }
}

/// Runs every seed of the scenario and writes `summary.json` plus timeline
/// CSVs into the output directory, which is returned.
pub fn cmd_run(args: &CommonArgs) -> Result<PathBuf> {
    let cfg = load_with_overrides(args)?;
    let dir = output_dir(&cfg);
    let results = cfg.run_all()?;
    let (per_seed, agg) = cfg.run_metrics()?;

    std::fs::create_dir_all(&dir)?;
    for (i, (seed, result)) in results.iter().enumerate() {
        let path = dir.join(timeline_name(*seed, i == 0));
        std::fs::write(path, timeline_csv(result))?;
    }
    let runs = per_seed
        .iter()
        .map(|(seed, m)| RunSummary {
            seed: *seed,
            metrics: *m,
            average_quality_kbps: m.average_quality_kbps(),
            quality_variance_kbps2: m.quality_variance_kbps2(),
        })
        .collect();
    let summary = Summary {
        schema_version: 1,
        name: &cfg.name,
        basis: cfg.basis,
        scenario: &cfg,
        runs,
        aggregate: agg,
        aggregate_quality_kbps: agg.mean_quality_kbps(),
    };
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::Config(format!("summary serialization: {e}")))?;
    std::fs::write(dir.join("summary.json"), json)?;
    Ok(dir)
}

fn sweep_csv_row(out: &mut String, param: &str, value: &str, seed: &str, m: &SweepRowMetrics) {
    writeln!(
        out,
        "{param},{value},{seed},{},{},{},{},{},{}",
        m.quality_bps, m.variance_bps2, m.switches, m.interruptions, m.stall_time_s, m.startup_s,
    )
    .expect("writing to a string cannot fail");
}

struct SweepRowMetrics {
    quality_bps: f64,
    variance_bps2: f64,
    switches: f64,
    interruptions: f64,
    stall_time_s: f64,
    startup_s: f64,
}

impl From<&SessionMetrics> for SweepRowMetrics {
    fn from(m: &SessionMetrics) -> Self {
        Self {
            quality_bps: m.average_quality_bps,
            variance_bps2: m.quality_variance_bps2,
            switches: m.switch_count as f64,
            interruptions: m.interruption_count as f64,
            stall_time_s: m.total_stall_time_s,
            startup_s: m.startup_delay_s,
        }
    }
}

impl From<&AggregateMetrics> for SweepRowMetrics {
    fn from(a: &AggregateMetrics) -> Self {
        Self {
            quality_bps: a.mean_quality_bps,
            variance_bps2: a.mean_quality_variance_bps2,
            switches: a.mean_switches,
            interruptions: a.mean_interruptions,
            stall_time_s: a.mean_stall_time_s,
            startup_s: a.mean_startup_delay_s,
        }
    }
}

/// Sweeps `param` over `values` and writes `sweep.csv` into the output
/// directory, which is returned.
pub fn cmd_sweep(args: &CommonArgs, param: &str, values: &[String]) -> Result<PathBuf> {
    let cfg = load_with_overrides(args)?;
    let dir = output_dir(&cfg);
    let outcome = run_sweep(&cfg, param, values)?;

    let mut csv = String::from(
        "param,value,seed,average_quality_bps,quality_variance_bps2,switches,\
         interruptions,stall_time_s,startup_delay_s\n",
    );
    for cell in &outcome.cells {
        sweep_csv_row(
            &mut csv,
            param,
            &cell.value,
            &cell.seed.to_string(),
            &(&cell.metrics).into(),
        );
    }
    for (value, agg) in &outcome.aggregates {
        sweep_csv_row(&mut csv, param, value, "mean", &agg.into());
    }
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("sweep.csv"), csv)?;
    Ok(dir)
}

/// Writes the capacity trace the scenario's first seed would see.
pub fn cmd_gen_trace(config: &str, out: &Path, seed: Option<u64>) -> Result<()> {
    let cfg = ScenarioConfig::load(config)?;
    if cfg.network.synthetic.is_none() {
        return Err(Error::Config(
            "this scenario reads a trace file; there is nothing to generate".into(),
        ));
    }
    let seed = seed.unwrap_or(cfg.seeds[0]);
    let trace = cfg.build_trace(seed)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    trace.save(out)
}

/// Process exit code for an error: 2 for anything wrong with the inputs,
/// 3 for a session that can never finish on the given link, 1 for IO.
pub fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NeverCompletes { .. } => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}
