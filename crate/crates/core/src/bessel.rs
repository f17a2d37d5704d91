//! Bessel functions of the first kind for integer order and real argument.
//!
//! Small arguments use the ascending series directly; everything else goes
//! through Miller's backward recurrence normalised with
//! `J_0 + 2 (J_2 + J_4 + ...) = 1`.

use crate::error::{Error, Result};

/// Largest supported `|n|`.
pub const MAX_ORDER: u32 = 128;

const SERIES_LIMIT: f64 = 0.5;
const RESCALE_AT: f64 = 1e250;

/// `J_n(z)` for `|n| <= MAX_ORDER` and `z >= 0`.
pub fn bessel_jn(n: i32, z: f64) -> Result<f64> {
    let order = n.unsigned_abs();
    if order > MAX_ORDER {
        return Err(Error::BesselOrder(n as i64));
    }
    check_argument(z)?;
    let row = row_unchecked(order as usize, z);
    let v = row[order as usize];
    // J_{-n} = (-1)^n J_n
    Ok(if n < 0 && order % 2 == 1 { -v } else { v })
}

/// `[J_0(z), ..., J_{n_max}(z)]`.
pub fn bessel_jn_row(n_max: u32, z: f64) -> Result<Vec<f64>> {
    if n_max > MAX_ORDER {
        return Err(Error::BesselOrder(n_max as i64));
    }
    check_argument(z)?;
    Ok(row_unchecked(n_max as usize, z))
}

fn check_argument(z: f64) -> Result<()> {
    if z.is_finite() && z >= 0.0 {
        Ok(())
    } else {
        Err(Error::BesselArgument(z))
    }
}

pub(crate) fn row_unchecked(n_max: usize, z: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    fill_row(n_max, z, &mut out);
    out
}

/// Fills `out[0..=n_max]` with `J_k(z)`; `out` must hold at least `n_max + 1` entries.
pub(crate) fn fill_row(n_max: usize, z: f64, out: &mut [f64]) {
    let out = &mut out[..=n_max];
    if z == 0.0 {
        out.fill(0.0);
        out[0] = 1.0;
    } else if z < SERIES_LIMIT {
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = ascending_series(k, z);
        }
    } else {
        miller(n_max, z, out);
    }
}

fn ascending_series(n: usize, z: f64) -> f64 {
    let half = 0.5 * z;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
        if term == 0.0 {
            return 0.0;
        }
    }
    let q = -half * half;
    let mut sum = term;
    let mut m = 1usize;
    loop {
        term *= q / (m as f64 * (m + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        m += 1;
    }
    sum
}

fn miller(n_max: usize, z: f64, out: &mut [f64]) {
    let top = n_max.max(z.ceil() as usize);
    let mut start = top + 20 + (40.0 * top as f64).sqrt() as usize;
    if start % 2 == 1 {
        start += 1;
    }

    out.fill(0.0);
    let mut j_next = 0.0;
    let mut j = 1e-30;
    let mut norm = 0.0;
    let two_over_z = 2.0 / z;

    for k in (1..=start).rev() {
        let j_prev = k as f64 * two_over_z * j - j_next;
        j_next = j;
        j = j_prev;
        let idx = k - 1;
        if idx <= n_max {
            out[idx] = j;
        }
        if idx == 0 {
            norm += j;
        } else if idx % 2 == 0 {
            norm += 2.0 * j;
        }
        if j.abs() > RESCALE_AT {
            j /= RESCALE_AT;
            j_next /= RESCALE_AT;
            norm /= RESCALE_AT;
            for v in out.iter_mut() {
                *v /= RESCALE_AT;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
}
