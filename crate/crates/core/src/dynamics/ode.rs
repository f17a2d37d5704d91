//! Explicit adaptive Runge-Kutta of order 8 with embedded 5th/3rd order
//! error estimate (DOP853) for complex state vectors.
//!
//! Output is produced by landing steps exactly on the requested sample
//! times; the step-size controller keeps its own proposal so that clipped
//! steps do not throttle the integration.

use num_complex::Complex64 as C64;

use super::tableau::{A, B, C, E3, E5, STAGES};
use crate::error::{Error, Result};

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Integrates `dy/dt = rhs(t, y)` from `t_start`, calling `observe(t, y)` at
/// `t_start` and at every entry of `sample_times` (strictly increasing, all
/// greater than `t_start`).
pub fn solve<F, O>(
    mut rhs: F,
    t_start: f64,
    y0: &[C64],
    sample_times: &[f64],
    opts: OdeOptions,
    mut observe: O,
) -> Result<OdeStats>
where
    F: FnMut(f64, &[C64], &mut [C64]),
    O: FnMut(f64, &[C64]),
{
    let dim = y0.len();
    let mut stats = OdeStats::default();
    let mut t = t_start;
    let mut y = y0.to_vec();
    observe(t, &y);
    let Some(&t_end) = sample_times.last() else {
        return Ok(stats);
    };

    let mut k: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); dim]; STAGES + 1];
    let mut y_stage = vec![C64::new(0.0, 0.0); dim];
    let mut y_new = vec![C64::new(0.0, 0.0); dim];

    rhs(t, &y, &mut k[0]);
    stats.evaluations += 1;

    let mut h = initial_step(&mut rhs, t, &y, &k[0], opts, t_end - t).min(opts.max_step);
    let mut next_sample = 0;

    while next_sample < sample_times.len() {
        let target = sample_times[next_sample];
        let min_step = 10.0 * f64::EPSILON * t.abs().max(1.0);
        if h < min_step {
            return Err(Error::StepUnderflow { t });
        }
        let remaining = target - t;
        let lands = h >= remaining;
        let step = if lands { remaining } else { h };

        for s in 1..STAGES {
            for i in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        acc += kj[i] * a;
                    }
                }
                y_stage[i] = y[i] + acc * step;
            }
            rhs(t + C[s] * step, &y_stage, &mut k[s]);
        }
        for i in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            for (j, kj) in k.iter().enumerate().take(STAGES) {
                if B[j] != 0.0 {
                    acc += kj[i] * B[j];
                }
            }
            y_new[i] = y[i] + acc * step;
        }
        let t_new = if lands { target } else { t + step };
        rhs(t_new, &y_new, &mut k[STAGES]);
        stats.evaluations += STAGES;

        let err = error_norm(&k, &y, &y_new, step, opts);
        if err < 1.0 {
            stats.accepted += 1;
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(ERROR_EXPONENT)).min(MAX_FACTOR)
            };
            // a clipped step says nothing about the natural step size
            if !lands || step >= h {
                h = (step * factor).min(opts.max_step);
            }
            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, STAGES);
            if lands {
                observe(t, &y);
                next_sample += 1;
            }
        } else {
            stats.rejected += 1;
            h = step * (SAFETY * err.powf(ERROR_EXPONENT)).max(MIN_FACTOR);
        }
    }
    Ok(stats)
}

fn error_norm(k: &[Vec<C64>], y: &[C64], y_new: &[C64], h: f64, opts: OdeOptions) -> f64 {
    let dim = y.len();
    let mut e5 = 0.0;
    let mut e3 = 0.0;
    for i in 0..dim {
        let scale = opts.abs_tol + y[i].norm().max(y_new[i].norm()) * opts.rel_tol;
        let mut s5 = C64::new(0.0, 0.0);
        let mut s3 = C64::new(0.0, 0.0);
        for j in 0..=STAGES {
            s5 += k[j][i] * E5[j];
            s3 += k[j][i] * E3[j];
        }
        e5 += (s5 / scale).norm_sqr();
        e3 += (s3 / scale).norm_sqr();
    }
    if e5 == 0.0 && e3 == 0.0 {
        return 0.0;
    }
    let denom = e5 + 0.01 * e3;
    h.abs() * e5 / (denom * dim as f64).sqrt()
}

fn initial_step<F>(rhs: &mut F, t: f64, y: &[C64], f0: &[C64], opts: OdeOptions, span: f64) -> f64
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    let dim = y.len() as f64;
    let scale: Vec<f64> = y.iter().map(|v| opts.abs_tol + v.norm() * opts.rel_tol).collect();
    let rms = |v: &[C64]| -> f64 {
        (v.iter().zip(&scale).map(|(x, s)| (x / s).norm_sqr()).sum::<f64>() / dim).sqrt()
    };
    let d0 = rms(y);
    let d1 = rms(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let y1: Vec<C64> = y.iter().zip(f0).map(|(a, b)| a + b * h0).collect();
    let mut f1 = vec![C64::new(0.0, 0.0); y.len()];
    rhs(t + h0, &y1, &mut f1);
    let diff: Vec<C64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms(&diff) / h0;
    let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
        (1e-6f64).max(h0 * 1e-3)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 8.0)
    };
    (100.0 * h0).min(h1).min(span)
}
