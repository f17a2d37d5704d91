//! Pi/4 pulse leaving sender and receiver in an entangled state.
//!
//! cargo run --release --example entanglement

use photon_transfer::scenarios::{preset, run_scenario};

fn main() -> photon_transfer::Result<()> {
    let r = run_scenario(&preset("fig5b")?)?;
    let s = &r.summary;
    println!("|A_s|^2 = {:.4}  |A_r|^2 = {:.4}  C = {:.4}", s.pop_sender, s.pop_receiver, s.concurrence);
    if let Some(p) = s.post_pulse {
        println!(
            "concurrence after the pulse: mean {:.4}, range [{:.4}, {:.4}]",
            p.concurrence.mean, p.concurrence.min, p.concurrence.max
        );
    }
    Ok(())
}
