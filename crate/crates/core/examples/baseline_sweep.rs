//! Undriven perfect-transfer chain losing fidelity as the receiver is detuned.
//!
//! cargo run --release --example baseline_sweep

use photon_transfer::scenarios::{run_baseline_sweep, scheme_a_sweep};

fn main() -> photon_transfer::Result<()> {
    let values: Vec<f64> = (0..=16).map(|i| 0.25 * i as f64).collect();
    let table = run_baseline_sweep(&scheme_a_sweep(values)?)?;
    println!("transfer period {:.4}, window {:?}", table.transfer_period, table.window);
    println!("{:>9} {:>9} {:>8}", "detuning", "max F_min", "at t");
    for p in &table.points {
        let mark = if p.fidelity_min < 2.0 / 3.0 { "  below 2/3" } else { "" };
        println!("{:>9.2} {:>9.5} {:>8.3}{mark}", p.value, p.fidelity_min, p.time);
    }
    Ok(())
}
