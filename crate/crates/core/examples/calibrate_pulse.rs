//! Gaussian widths giving pi/4 and pi/2 pulse areas, checked against the accumulated area.
//!
//! cargo run --example calibrate_pulse

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use photon_transfer::scenarios::preset;
use photon_transfer::spectrum::build_spectrum;
use photon_transfer::tls::{calibrate_tau, pulse_area, TlsModel};
use photon_transfer::types::{DriveParams, PulseShape};

fn main() -> photon_transfer::Result<()> {
    for name in ["fig5c", "fig6c", "fig7c", "fig7d"] {
        let s = preset(name)?;
        let sp = build_spectrum(&s.params)?;
        let model = TlsModel::new(&s.params, &sp, &s.drive)?;
        println!(
            "{name}: nu = {}, Theta0 = {:.6}, S0 - S1 = {:.3e}",
            model.nu, model.theta0, model.delta
        );
        for (label, area) in [("pi/4", FRAC_PI_4), ("pi/2", FRAC_PI_2)] {
            let tau = calibrate_tau(&s.params, &sp, &s.drive, area)?;
            let t0 = 10.0 * tau;
            let drive = DriveParams {
                pulse: PulseShape::gaussian(t0, tau),
                ..s.drive
            };
            let got = pulse_area(&s.params, &sp, &drive, t0 + 8.0 * tau)?.angle;
            println!("  {label}: tau = {tau:.3}, area after the pulse {:.6} ({:+.1e})", got, got / area - 1.0);
        }
    }
    Ok(())
}
