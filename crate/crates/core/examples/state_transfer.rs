//! Pi/2 pulse transferring the sender excitation to the detuned receiver.
//!
//! cargo run --release --example state_transfer

use photon_transfer::scenarios::{preset, run_scenario};

fn main() -> photon_transfer::Result<()> {
    let r = run_scenario(&preset("fig5c")?)?;
    let m = &r.metrics;
    println!("{:>8} {:>9} {:>9} {:>9} {:>9}", "t", "|A_s|^2", "|A_r|^2", "channel", "F_min");
    let stride = (m.len() / 40).max(1);
    for i in (0..m.len()).step_by(stride) {
        println!(
            "{:>8.1} {:>9.4} {:>9.4} {:>9.2e} {:>9.4}",
            m.times[i], m.pop_sender[i], m.pop_receiver[i], m.channel_pop[i], m.f_min[i]
        );
    }
    let s = &r.summary;
    println!("readout at T = {:.2}: |A_r|^2 = {:.4}, F_avg = {:.4}", s.readout_time, s.pop_receiver, s.fidelity_avg);
    if let Some(p) = s.post_pulse {
        println!("after the pulse F_min = {:.4} +- {:.4}", p.f_min.mean, p.f_min.amplitude);
    }
    Ok(())
}
