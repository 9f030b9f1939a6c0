//! Shows the moving parts of the buffer-occupancy policies in isolation:
//! the piecewise-linear adjustment map, the dead band that keeps the rate
//! pinned between rungs, the window-averaged top-layer rule, and the
//! three-band stepwise rule.
//!
//! Run with: cargo run --example buffer_policies

use bsc_sim::adapt::adjustment::AdjustmentFunction;
use bsc_sim::adapt::buffer::{base_rate, stepwise_rate, top_rate, StepwiseThresholds};
use bsc_sim::{BitrateLadder, Result};

fn main() -> Result<()> {
    let ladder = BitrateLadder::default();
    let f1 = AdjustmentFunction::new(ladder.clone(), 20.0, 70.0)?;

    println!("adjustment map (reservoir 20s, cushion 70s):");
    println!("buffer_s  target_kbps");
    for b in [0.0, 20.0, 30.0, 42.0, 55.0, 70.0, 90.0, 120.0] {
        println!("{:>8.0}  {:>11.0}", b, f1.eval(b) / 1000.0);
    }
    println!(
        "reservoir {:.0}s maps to the bottom rung, the upper knee {:.0}s to the top\n",
        f1.reservoir_s(),
        f1.upper_knee_s()
    );

    println!("dead band around a previous choice of 1000 kbps:");
    println!("buffer_s  chosen_kbps");
    for b in [15.0, 25.0, 38.0, 42.0, 46.0, 55.0, 95.0] {
        let r = base_rate(&f1, b, 1_000_000)?;
        println!("{:>8.0}  {:>11}", b, r / 1000);
    }
    println!("(the rate only moves once the target clears a neighbouring rung)\n");

    // The top-layer rule compares the map target with what the buffered
    // window of base layers would cost on average at the candidate rung, so
    // one cheap segment cannot trigger a climb on its own.
    let f2 = AdjustmentFunction::new(ladder.clone(), 20.0, 50.0)?;
    let uniform = [420_000, 420_000, 420_000];
    let mixed = [420_000, 2_100_000, 2_100_000];
    println!("top-layer rule at buffer 46s, previous target 420 kbps:");
    for (name, window) in [("uniform 420", &uniform), ("mixed 420/2100", &mixed)] {
        let r = top_rate(&f2, 46.0, 420_000, window, 420_000)?;
        println!("  window {:<15} -> {} kbps", name, r / 1000);
    }
    println!("(the expensive window raises the climb cost past the target: hold)\n");

    let th = StepwiseThresholds::new(20.0, 45.0, 70.0)?;
    println!("stepwise bands (low 20s / hold 45s / high 70s), previous 1000 kbps:");
    println!("buffer_s  chosen_kbps");
    for b in [10.0, 30.0, 50.0, 80.0] {
        let r = stepwise_rate(&ladder, &th, b, 1_000_000)?;
        println!("{:>8.0}  {:>11}", b, r / 1000);
    }
    println!("(panic to the bottom, one rung down, hold, one rung up)");
    Ok(())
}
