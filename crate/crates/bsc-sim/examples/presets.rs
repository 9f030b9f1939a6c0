//! Runs the first seed of every bundled scenario and prints a one-line
//! summary per preset, a quick smoke pass over the shipped configurations.
//!
//! Run with: cargo run --example presets

use bsc_sim::{preset, session_metrics, Result, PRESET_NAMES};

fn main() -> Result<()> {
    println!("preset     policy  offset  seeds  avg_kbps  switches  stalls  startup_s");
    for name in PRESET_NAMES {
        let cfg = preset(name)?;
        let seed = cfg.seeds[0];
        let result = cfg.run_one(seed)?;
        let m = session_metrics(&result, cfg.basis);
        println!(
            "{:<9}  {:<6}  {:>6}  {:>5}  {:>8.0}  {:>8}  {:>6}  {:>9.2}",
            cfg.name,
            cfg.policy.id,
            cfg.manifest.offset_blocks,
            cfg.seeds.len(),
            m.average_quality_kbps(),
            m.switch_count,
            m.interruption_count,
            m.startup_delay_s,
        );
    }
    println!("\n(run `bsc-sim run <preset>` for the full multi-seed report)");
    Ok(())
}
