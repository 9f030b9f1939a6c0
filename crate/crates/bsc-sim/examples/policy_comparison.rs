//! Runs every policy over the same volatile trace and prints one metrics row
//! per policy and basis, plus the requested-versus-rendered gap that late
//! enhancements open up for the layered schemes.
//!
//! Run with: cargo run --example policy_comparison

use bsc_sim::{
    generate, run_session, session_metrics, Basis, BitrateLadder, Manifest, PolicyConfig,
    PolicyId, Result, SyntheticTraceConfig,
};

fn main() -> Result<()> {
    let manifest = Manifest::new(175, 2.0, 10, 25.0, BitrateLadder::default())?;
    let net = SyntheticTraceConfig {
        link_capacity_bps: 3_000_000,
        state_levels: vec![0.15, 0.3, 0.55],
        mean_state_holding_s: 12.0,
        oscillation_amplitude: 0.25,
        oscillation_period_s: 2.0,
        duration_s: 900.0,
        sample_interval_s: 0.25,
        rng_seed: 3,
    };
    let trace = generate(&net)?;
    println!(
        "volatile link: mean {:.2} Mbps, {} segments, offset {} blocks\n",
        trace.mean_bandwidth_bps() / 1e6,
        manifest.segment_count(),
        manifest.offset_blocks()
    );

    println!("policy  avg_req  avg_rend  gap_kbps  switches  stalls  stall_s  startup_s");
    for id in PolicyId::ALL {
        let result = run_session(&manifest, &trace, &PolicyConfig::new(id))?;
        let req = session_metrics(&result, Basis::Requested);
        let rend = session_metrics(&result, Basis::Rendered);
        println!(
            "{:<6}  {:>7.0}  {:>8.0}  {:>8.0}  {:>8}  {:>6}  {:>7.2}  {:>9.2}",
            id,
            req.average_quality_kbps(),
            rend.average_quality_kbps(),
            req.average_quality_kbps() - rend.average_quality_kbps(),
            rend.switch_count,
            rend.interruption_count,
            rend.total_stall_time_s,
            rend.startup_delay_s,
        );
    }

    println!(
        "\nnotes: the layered policies (tb-bsc, bb-bsc) can request an enhancement\n\
         that misses its playback deadline; the rendered basis then falls back to\n\
         the shipped base layer, which is what the gap column measures. The\n\
         whole-segment policies always render what they requested."
    );
    println!(
        "switch counts on this texture usually order bb-bsc lowest and tb-bsc\n\
         highest: the buffer-driven dead band moves rarely while the throughput\n\
         ladder chases every estimate wiggle."
    );
    Ok(())
}
