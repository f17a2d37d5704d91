//! Two-photon resonance against the one-photon case at equal pulse area.
//!
//! cargo run --release --example two_photon

use photon_transfer::scenarios::{preset, run_scenario};

fn main() -> photon_transfer::Result<()> {
    for (one, two) in [("fig5c", "fig7c"), ("fig6c", "fig7d")] {
        let a = run_scenario(&preset(one)?)?;
        let b = run_scenario(&preset(two)?)?;
        println!(
            "{one} (nu = 1, tau = {:.2}): F_min = {:.4}   {two} (nu = 2, tau = {:.2}): F_min = {:.4}   slower by {:.2}",
            a.scenario.drive.pulse.tau,
            a.summary.fidelity_min,
            b.scenario.drive.pulse.tau,
            b.summary.fidelity_min,
            b.scenario.drive.pulse.tau / a.scenario.drive.pulse.tau
        );
    }
    Ok(())
}
