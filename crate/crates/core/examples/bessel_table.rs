//! Bessel functions J_n(z) as used in the sideband expansion.
//!
//! cargo run --example bessel_table [z]

use photon_transfer::bessel::{bessel_jn, bessel_jn_row};

fn main() -> photon_transfer::Result<()> {
    let z: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2.0);
    let row = bessel_jn_row(12, z)?;
    println!("J_n({z})");
    for (n, v) in row.iter().enumerate() {
        println!("{n:>3} {v:>24.16e}");
    }
    // J_0 + 2 sum J_2k = 1
    let long = bessel_jn_row(60, z)?;
    let norm = long[0] + 2.0 * long.iter().skip(2).step_by(2).sum::<f64>();
    println!("normalisation sum {norm:.16}");
    println!("J_-3({z}) = {:.16e}", bessel_jn(-3, z)?);
    Ok(())
}
