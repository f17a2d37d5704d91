//! Constant drive: full chain against the rotating-wave and beyond-RWA two-level models.
//!
//! cargo run --release --example rwa_comparison

use std::f64::consts::PI;

use photon_transfer::dynamics::{integrate, IntegratorConfig};
use photon_transfer::scenarios::preset;
use photon_transfer::spectrum::build_spectrum;
use photon_transfer::tls::{integrate_tls, rabi_frequency, TlsMode};

fn main() -> photon_transfer::Result<()> {
    let s = preset("fig5a")?;
    let sp = build_spectrum(&s.params)?;
    let period = PI / rabi_frequency(&s.params, &sp, s.drive.nu, s.drive.z0)?.abs();
    let cfg = IntegratorConfig {
        sample_dt: period / 40.0,
        ..s.integrator.clone()
    };
    let span = (0.0, 1.5 * period);
    let chain = integrate(&s.params, &s.drive, &cfg, span)?;
    let rwa = integrate_tls(&s.params, &sp, &s.drive, &cfg, span, TlsMode::Rwa)?;
    let full = integrate_tls(&s.params, &sp, &s.drive, &cfg, span, TlsMode::Full)?;
    println!("Rabi period {period:.2}");
    println!("{:>8} {:>9} {:>9} {:>9}", "t", "chain", "RWA", "full TLS");
    for ((a, b), c) in chain.states.iter().zip(&rwa.states).zip(&full.states).step_by(2) {
        println!(
            "{:>8.1} {:>9.4} {:>9.4} {:>9.4}",
            a.time,
            a.receiver().norm_sqr(),
            b.receiver().norm_sqr(),
            c.receiver().norm_sqr()
        );
    }
    Ok(())
}
