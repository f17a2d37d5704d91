//! Normal modes of a uniform channel and the couplings of the terminal sites to them.
//!
//! cargo run --example channel_spectrum [N]

use photon_transfer::spectrum::build_spectrum;
use photon_transfer::types::SystemParams;

fn main() -> photon_transfer::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let params = SystemParams::uniform(n, 0.0, 2.0, 32.0, 14.0, 1.0, 1.0);
    let sp = build_spectrum(&params)?;
    println!("N = {n}, w_c = {}, kappa = {}", params.omega_c, params.kappa);
    println!("{:>3} {:>12} {:>12} {:>12} {:>12}", "k", "w_k", "w_k - w_s", "g_s,k", "g_r,k");
    for k in 0..n {
        println!(
            "{:>3} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            k + 1,
            sp.eigenfrequencies[k],
            sp.eigenfrequencies[k] - params.omega_s,
            sp.gs_k[k],
            sp.gr_k_signed[k]
        );
    }
    Ok(())
}
