//! Same run integrated in the site and in the mode picture.
//!
//! cargo run --release --example picture_equivalence

use photon_transfer::dynamics::{integrate, IntegratorConfig, PhaseMode};
use photon_transfer::scenarios::preset;
use photon_transfer::spectrum::{build_spectrum, site_to_mode};
use photon_transfer::types::Picture;

fn main() -> photon_transfer::Result<()> {
    let s = preset("fig6b")?;
    let sp = build_spectrum(&s.params)?;
    for h_mode in [PhaseMode::AdiabaticSine, PhaseMode::ExactQuadrature] {
        let site_cfg = IntegratorConfig {
            h_mode,
            ..s.integrator.clone()
        };
        let mode_cfg = IntegratorConfig {
            picture: Picture::Mode,
            ..site_cfg.clone()
        };
        let site = integrate(&s.params, &s.drive, &site_cfg, s.t_span)?;
        let mode = integrate(&s.params, &s.drive, &mode_cfg, s.t_span)?;
        let mut worst = 0.0f64;
        for (a, b) in site.states.iter().zip(&mode.states) {
            for (x, y) in site_to_mode(a, &sp)?.amplitudes.iter().zip(&b.amplitudes) {
                worst = worst.max((x - y).norm());
            }
        }
        println!(
            "{h_mode:?}: {} samples, max difference {worst:.2e}, final |A_r|^2 {:.6}",
            site.len(),
            site.last().map_or(0.0, |a| a.receiver().norm_sqr())
        );
    }
    Ok(())
}
