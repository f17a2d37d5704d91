//! Runs every figure preset and prints the readout values.
//!
//! cargo run --release --example preset_overview [name ...]

use std::time::Instant;

use photon_transfer::scenarios::{all_presets, preset, run_scenario};

fn main() -> photon_transfer::Result<()> {
    let names: Vec<String> = std::env::args().skip(1).collect();
    let scenarios = if names.is_empty() {
        all_presets()
    } else {
        names.iter().map(|n| preset(n)).collect::<Result<_, _>>()?
    };

    println!(
        "{:<6} {:>8} {:>8} {:>8} {:>8} {:>8} {:>9} {:>10} {:>7}  targets",
        "preset", "T", "|A_s|^2", "|A_r|^2", "F_min", "C", "max chan", "norm drift", "secs"
    );
    for s in scenarios {
        let start = Instant::now();
        let r = run_scenario(&s)?;
        let m = &r.summary;
        println!(
            "{:<6} {:>8.2} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>9.4} {:>10.2e} {:>7.2}  {}",
            m.name,
            m.readout_time,
            m.pop_sender,
            m.pop_receiver,
            m.fidelity_min,
            m.concurrence,
            m.max_channel_pop,
            m.norm_drift,
            start.elapsed().as_secs_f64(),
            if m.targets_pass { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
