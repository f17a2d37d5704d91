//! Building a scenario in code, running it and writing the result files.
//!
//! cargo run --release --example custom_scenario [out_dir]

use photon_transfer::dynamics::IntegratorConfig;
use photon_transfer::scenarios::{run_scenario, write_results, Quantity, Scenario, Target};
use photon_transfer::spectrum::build_spectrum;
use photon_transfer::tls::calibrate_tau;
use photon_transfer::types::{DriveParams, PulseShape, SystemParams};

fn main() -> photon_transfer::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "results".into());
    // receiver 1.5 g_s above the sender, bridged by one photon of a w = 1.5 drive
    let params = SystemParams::uniform(2, 0.0, 1.5, 22.0, 6.0, 1.0, 1.0);
    let mut drive = DriveParams {
        z0: 2.0,
        omega: 1.5,
        pulse: PulseShape::gaussian(0.0, 1.0),
        nu: 1,
    };
    let tau = calibrate_tau(&params, &build_spectrum(&params)?, &drive, std::f64::consts::FRAC_PI_2)?;
    drive.pulse = PulseShape::gaussian(6.0 * tau, tau);
    let scenario = Scenario {
        name: "custom".into(),
        integrator: IntegratorConfig::for_system(&params, &drive),
        t_span: (0.0, 14.0 * tau),
        readout_time: 11.0 * tau,
        targets: vec![Target::at_least(Quantity::PopReceiver, 0.8)],
        params,
        drive,
    };
    let r = run_scenario(&scenario)?;
    let files = write_results(&r, &out)?;
    println!(
        "tau = {tau:.2}: |A_r(T)|^2 = {:.4}, targets {}",
        r.summary.pop_receiver,
        if r.summary.targets_pass { "met" } else { "missed" }
    );
    println!("wrote {} and {}", files.csv.display(), files.summary.display());
    Ok(())
}
