//! Walks through the first blocks of a layered session on a constant link,
//! printing how the bootstrap front-loads content and how the playable
//! prefix jumps once every shifted base layer is on board.
//!
//! Run with: cargo run --example startup_ramp

use bsc_sim::{run_session, BitrateLadder, CapacityTrace, Manifest, PolicyConfig, PolicyId, Result};

fn main() -> Result<()> {
    let manifest = Manifest::new(8, 2.0, 4, 25.0, BitrateLadder::default())?;
    let trace = CapacityTrace::constant(2_000_000);
    let cfg = PolicyConfig::new(PolicyId::TbBsc);

    println!(
        "constant 2 Mbps link, {} segments of {}s, offset {} blocks\n",
        manifest.segment_count(),
        manifest.segment_duration_s(),
        manifest.offset_blocks()
    );

    let result = run_session(&manifest, &trace, &cfg)?;

    println!("block  base_kbps  enh_kbps   bits     end_s  content_s  playable_s");
    for b in &result.blocks {
        println!(
            "{:>5}  {:>9}  {:>8}  {:>7}  {:>6.2}  {:>9.2}  {:>10.2}",
            b.index,
            b.rate_base_bps / 1000,
            b.rate_enh_bps / 1000,
            b.total_bits(),
            b.end_s,
            b.content_added_s,
            b.playable_added_s,
        );
    }

    // The first offset-1 blocks each carry a whole segment plus a bottom-rate
    // base layer ahead, so every one of them adds two segments of content.
    let phi = manifest.offset_blocks();
    let front: f64 = result.blocks[..phi - 1]
        .iter()
        .map(|b| b.content_added_s)
        .sum();
    println!(
        "\nbootstrap blocks 1..{} added {:.1}s of content ({}x segment duration)",
        phi - 1,
        front,
        (front / manifest.segment_duration_s()).round()
    );

    // Playback cannot start until the first segment is complete at its final
    // quality; by then the backlog of shifted base layers unlocks a run of
    // segments at once.
    let jump = result.blocks[phi - 2].playable_added_s;
    println!(
        "block {} made {:.1}s playable in one step (offset window is {:.1}s)",
        phi - 1,
        jump,
        manifest.offset_window_s()
    );
    println!("startup delay: {:.2}s", result.startup_delay_s);
    println!(
        "session: {} stalls, finished playback at {:.2}s",
        result.stalls.len(),
        result.playback_finish_s
    );

    println!("\nsegment  shipped_kbps  requested_kbps  rendered_kbps  enh_on_time");
    for s in &result.segments {
        println!(
            "{:>7}  {:>12}  {:>14}  {:>13}  {}",
            s.index,
            s.shipped_base_bps / 1000,
            s.requested_bps / 1000,
            s.rendered_bps / 1000,
            s.enhancement_on_time,
        );
    }
    Ok(())
}
