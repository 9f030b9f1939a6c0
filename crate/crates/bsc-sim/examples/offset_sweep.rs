//! Sweeps the coding offset on the bundled volatile scenario and prints how
//! a longer shift trades switching for commitment: the base layer is chosen
//! further ahead of playback, so the buffer rule re-decides less often and
//! the rendered rate gets steadier.
//!
//! Run with: cargo run --example offset_sweep

use bsc_sim::{preset, run_sweep, Result};

fn main() -> Result<()> {
    let mut cfg = preset("hsdpa")?;
    cfg.seeds = (1..=20).collect();
    println!(
        "scenario '{}' with {} seeds, policy {}\n",
        cfg.name, cfg.seeds.len(), cfg.policy.id
    );

    let values: Vec<String> = ["2", "4", "10"].iter().map(|s| s.to_string()).collect();
    let outcome = run_sweep(&cfg, "phi", &values)?;

    println!("offset  avg_kbps  switches  stalls  startup_s");
    for (value, agg) in &outcome.aggregates {
        println!(
            "{:>6}  {:>8.0}  {:>8.2}  {:>6.2}  {:>9.2}",
            value,
            agg.mean_quality_kbps(),
            agg.mean_switches,
            agg.mean_interruptions,
            agg.mean_startup_delay_s,
        );
    }

    println!(
        "\nper-seed spread at the largest offset (value {}):",
        values.last().unwrap()
    );
    let mut cells: Vec<_> = outcome
        .cells
        .iter()
        .filter(|c| c.value == *values.last().unwrap())
        .collect();
    cells.sort_by(|a, b| a.metrics.switch_count.cmp(&b.metrics.switch_count));
    let low = cells.first().unwrap();
    let high = cells.last().unwrap();
    println!(
        "  quietest seed {:>3}: {} switches, {:.0} kbps",
        low.seed,
        low.metrics.switch_count,
        low.metrics.average_quality_kbps()
    );
    println!(
        "  busiest  seed {:>3}: {} switches, {:.0} kbps",
        high.seed,
        high.metrics.switch_count,
        high.metrics.average_quality_kbps()
    );
    Ok(())
}
