//! Two-level validity conditions for every driven preset.
//!
//! cargo run --release --example validity_report

use photon_transfer::scenarios::{preset, PRESET_NAMES};
use photon_transfer::spectrum::build_spectrum;
use photon_transfer::tls::check_validity;

fn main() -> photon_transfer::Result<()> {
    println!(
        "{:<6} {:>9} {:>9} {:>9} {:>3} {:>9}  all",
        "preset", "(a)", "(b)", "(c)", "n*", "(d)"
    );
    for name in PRESET_NAMES {
        let s = preset(name)?;
        if s.drive.z0 == 0.0 {
            continue;
        }
        let sp = build_spectrum(&s.params)?;
        let r = check_validity(&s.params, &s.drive, &sp, s.readout_time)?;
        println!(
            "{:<6} {:>9.4} {:>9.4} {:>9.4} {:>3} {:>9.4}  {}",
            name,
            r.cond_a.ratio,
            r.cond_b.ratio,
            r.cond_c.ratio,
            r.n_star,
            r.cond_d.ratio,
            if r.all_pass() { "pass" } else { "violated" }
        );
        if !r.resonant_terms.is_empty() {
            println!("       resonant sender sidebands (mode, n): {:?}", r.resonant_terms);
        }
    }
    Ok(())
}
