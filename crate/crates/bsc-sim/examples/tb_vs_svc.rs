//! Compares the layered throughput policy against its whole-segment
//! counterpart on a mildly oscillating link. The layered scheme commits the
//! base layer early and buys the enhancement close to playback, so its
//! requested quality tracks the link more closely at the same stall count.
//!
//! Run with: cargo run --example tb_vs_svc

use bsc_sim::{
    generate, run_session, session_metrics, Basis, BitrateLadder, Manifest, PolicyConfig,
    PolicyId, Result, SyntheticTraceConfig,
};

fn main() -> Result<()> {
    let manifest = Manifest::new(175, 2.0, 4, 25.0, BitrateLadder::default())?;
    let net = SyntheticTraceConfig {
        link_capacity_bps: 5_000_000,
        state_levels: vec![0.52],
        mean_state_holding_s: 60.0,
        oscillation_amplitude: 0.04,
        oscillation_period_s: 4.0,
        duration_s: 900.0,
        sample_interval_s: 0.25,
        rng_seed: 7,
    };
    let trace = generate(&net)?;
    println!(
        "link: mean {:.2} Mbps over {:.0}s\n",
        trace.mean_bandwidth_bps() / 1e6,
        trace.end_time_s()
    );

    println!("policy  basis      avg_kbps  variance  switches  stalls  startup_s");
    let mut requested = Vec::new();
    for id in [PolicyId::TbBsc, PolicyId::TbSvc] {
        let result = run_session(&manifest, &trace, &PolicyConfig::new(id))?;
        for basis in [Basis::Requested, Basis::Rendered] {
            let m = session_metrics(&result, basis);
            println!(
                "{:<6}  {:<9}  {:>8.0}  {:>8.0}  {:>8}  {:>6}  {:>9.2}",
                id,
                basis,
                m.average_quality_kbps(),
                m.quality_variance_kbps2(),
                m.switch_count,
                m.interruption_count,
                m.startup_delay_s,
            );
            if basis == Basis::Requested {
                requested.push(m.average_quality_bps);
            }
        }
    }

    let gap = (requested[0] - requested[1]) / 1000.0;
    println!(
        "\nlayered scheme requested {:+.0} kbps versus whole-segment streaming",
        gap
    );
    println!(
        "(the early base commitment costs nothing here; the enhancement top-up\n\
         lets the layered client ride the link's crest instead of a safe rung)"
    );
    Ok(())
}
