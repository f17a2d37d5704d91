//! Effective two-level description of sender and receiver after the
//! far-detuned channel modes are eliminated.
//!
//! Near a `nu`-photon resonance `omega_r ~ omega_s + nu * omega` the reduced
//! dynamics is a Rabi problem whose rotation angle is the pulse area
//! `Theta(t) = |Theta0| * integral_0^t J_nu(z0 f(s)) ds`, with
//! `Theta0 = sum_k (-1)^(k-1) g_{s,k}^2 / (omega_k - omega_r)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::bessel::{self, bessel_jn};
use crate::dynamics::{sample_grid, solve, IntegratorConfig};
use crate::error::{invalid, Error, Result};
use crate::quad;
use crate::spectrum::ChannelSpectrum;
use crate::types::{AmplitudeState, DriveParams, Picture, PulseKind, SystemParams, Trajectory};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Denominators below this (in units of `g_s`) are treated as divergent.
pub const DIVERGENCE_CUTOFF: f64 = 1e-9;

/// Largest photon number checked for the sender-mode condition.
pub const DOMINANT_PHOTONS: i32 = 5;

/// Half-width of the integration range for the Gaussian area integral, in units of tau.
const AREA_HALF_WIDTH: f64 = 8.0;

/// Time-independent quantities of the rotating-wave two-level model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TlsModel {
    pub s0: f64,
    pub s1: f64,
    /// Rabi frequency at the peak amplitude `z0`.
    pub omega_rabi: f64,
    pub theta0: f64,
    pub nu: u32,
    /// Residual detuning `S0 - S1`.
    pub delta: f64,
}

impl TlsModel {
    pub fn new(params: &SystemParams, spectrum: &ChannelSpectrum, drive: &DriveParams) -> Result<Self> {
        let (s0, s1) = rwa_shifts(params, spectrum)?;
        let theta0 = theta0(params, spectrum)?;
        let omega_rabi = rabi_frequency(params, spectrum, drive.nu, drive.z0)?;
        Ok(Self {
            s0,
            s1,
            omega_rabi,
            theta0,
            nu: drive.nu,
            delta: s0 - s1,
        })
    }
}

fn receiver_denominators(params: &SystemParams, spectrum: &ChannelSpectrum) -> Result<Vec<f64>> {
    let d = spectrum.mode_detunings(params.omega_r);
    let cutoff = DIVERGENCE_CUTOFF * params.g_s.max(params.g_r).max(f64::MIN_POSITIVE);
    if let Some(k) = d.iter().position(|&x| x.abs() < cutoff) {
        return Err(Error::ResonantChannel { mode: k + 1 });
    }
    Ok(d)
}

/// RWA level shifts `(S0, S1) = (sum g_{s,k}^2 / w_{k,r}, sum g_{r,k}^2 / w_{k,r})`.
pub fn rwa_shifts(params: &SystemParams, spectrum: &ChannelSpectrum) -> Result<(f64, f64)> {
    let d = receiver_denominators(params, spectrum)?;
    let s0 = spectrum.gs_k.iter().zip(&d).map(|(g, w)| g * g / w).sum();
    let s1 = spectrum.gr_k.iter().zip(&d).map(|(g, w)| g * g / w).sum();
    Ok((s0, s1))
}

/// `Theta0 = sum_k (-1)^(k-1) g_{s,k}^2 / w_{k,r}`.
pub fn theta0(params: &SystemParams, spectrum: &ChannelSpectrum) -> Result<f64> {
    Ok(theta0_terms(params, spectrum)?.iter().sum())
}

/// Individual terms of [`theta0`], mode by mode.
pub fn theta0_terms(params: &SystemParams, spectrum: &ChannelSpectrum) -> Result<Vec<f64>> {
    let d = receiver_denominators(params, spectrum)?;
    Ok(spectrum
        .gs_k
        .iter()
        .zip(&d)
        .enumerate()
        .map(|(k, (g, w))| if k % 2 == 0 { g * g / w } else { -g * g / w })
        .collect())
}

/// Signed RWA Rabi frequency `J_nu(z) * sum_k g_{s,k} g~_{r,k} / w_{k,r}`.
pub fn rabi_frequency(params: &SystemParams, spectrum: &ChannelSpectrum, nu: u32, z: f64) -> Result<f64> {
    let d = receiver_denominators(params, spectrum)?;
    let coupling: f64 = spectrum
        .gs_k
        .iter()
        .zip(&spectrum.gr_k_signed)
        .zip(&d)
        .map(|((gs, gr), w)| gs * gr / w)
        .sum();
    Ok(bessel_jn(nu as i32, z)? * coupling)
}

/// Rotation angle accumulated up to `t`, reported as `|Theta0| * integral`
/// with the sign of `Theta0` kept separately.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseArea {
    pub angle: f64,
    pub theta0_sign: f64,
}

/// `|Theta0| * integral_0^t J_nu(z0 f(s)) ds`.
pub fn pulse_area(params: &SystemParams, spectrum: &ChannelSpectrum, drive: &DriveParams, t: f64) -> Result<PulseArea> {
    let th = theta0(params, spectrum)?;
    Ok(PulseArea {
        angle: th.abs() * bessel_area(drive, 0.0, t)?,
        theta0_sign: th.signum(),
    })
}

/// `integral_a^b J_nu(z0 f(s)) ds`.
pub fn bessel_area(drive: &DriveParams, a: f64, b: f64) -> Result<f64> {
    if drive.nu > bessel::MAX_ORDER {
        return Err(Error::BesselOrder(drive.nu as i64));
    }
    let nu = drive.nu as usize;
    let mut row = vec![0.0; nu + 1];
    let mut integrand = |s: f64| {
        bessel::fill_row(nu, drive.z(s), &mut row);
        row[nu]
    };
    Ok(match drive.pulse.kind {
        PulseKind::Constant => (b - a) * integrand(0.0),
        PulseKind::Gaussian => quad::integrate_pieces(integrand, a, b, 0.5 * drive.pulse.tau, 1e-11),
    })
}

/// Closed-form RWA amplitudes `(cos Theta, i sin Theta)`.
pub fn rwa_amplitudes(theta: f64) -> (C64, C64) {
    (C64::new(theta.cos(), 0.0), I * theta.sin())
}

/// `integral_{-8}^{8} J_nu(z0 exp(-u^2 / 2)) du`.
pub fn gaussian_area_integral(nu: u32, z0: f64) -> Result<f64> {
    if nu > bessel::MAX_ORDER {
        return Err(Error::BesselOrder(nu as i64));
    }
    let n = nu as usize;
    let mut row = vec![0.0; n + 1];
    Ok(quad::integrate_pieces(
        |u| {
            bessel::fill_row(n, z0 * (-0.5 * u * u).exp(), &mut row);
            row[n]
        },
        -AREA_HALF_WIDTH,
        AREA_HALF_WIDTH,
        0.5,
        1e-13,
    ))
}

/// Gaussian width `tau` giving the total area `target_area`:
/// `tau = target / (|Theta0| * integral J_nu(z0 exp(-u^2/2)) du)`.
pub fn calibrate_tau(
    params: &SystemParams,
    spectrum: &ChannelSpectrum,
    drive: &DriveParams,
    target_area: f64,
) -> Result<f64> {
    if !(target_area > 0.0) {
        return Err(invalid("target_area", format!("must be positive, got {target_area}")));
    }
    if drive.pulse.kind != PulseKind::Gaussian {
        return Err(Error::Calibration("calibration needs a Gaussian pulse".into()));
    }
    if drive.nu == 0 {
        return Err(Error::Calibration(
            "zero-photon coupling never switches off; the Gaussian area diverges".into(),
        ));
    }
    if !(drive.z0 > 0.0) {
        return Err(Error::Calibration("z0 must be positive for nu >= 1".into()));
    }
    let th = theta0(params, spectrum)?.abs();
    let integral = gaussian_area_integral(drive.nu, drive.z0)?;
    if !(integral > 1e-12) || !(th > 0.0) {
        return Err(Error::Calibration(format!(
            "area integral {integral:.3e} with |Theta0| = {th:.3e} cannot reach {target_area}"
        )));
    }
    Ok(target_area / (th * integral))
}

/// One checked inequality of the two-level reduction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub ratio: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Condition {
    fn new(ratio: f64, threshold: f64) -> Self {
        Self {
            ratio,
            threshold,
            pass: ratio < threshold,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityThresholds {
    pub receiver_coupling: f64,
    pub sender_coupling: f64,
    pub band_gap: f64,
    pub bridging: f64,
}

impl Default for ValidityThresholds {
    fn default() -> Self {
        Self {
            receiver_coupling: 0.2,
            sender_coupling: 0.2,
            band_gap: 0.2,
            bridging: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// `max_k |g~_{r,k}| / |w_r - w_k|`.
    pub cond_a: Condition,
    /// `max_{k, |n| <= 5} |g_{s,k} J_n(z)| / |w_k - w_s - n w|`.
    pub cond_b: Condition,
    /// `w / |min_k w_k - w_s|`.
    pub cond_c: Condition,
    /// `g_s |J_{n*}(z0)| T`.
    pub cond_d: Condition,
    /// Photons needed to bridge the sender-band gap.
    pub n_star: u32,
    /// `(k, n)` pairs with a vanishing sender denominator, excluded from `cond_b`.
    pub resonant_terms: Vec<(usize, i32)>,
}

impl ValidityReport {
    pub fn all_pass(&self) -> bool {
        self.cond_a.pass && self.cond_b.pass && self.cond_c.pass && self.cond_d.pass
    }
}

/// Evaluates the conditions for adiabatic elimination over the horizon `t_end`
/// using the default thresholds.
pub fn check_validity(
    params: &SystemParams,
    drive: &DriveParams,
    spectrum: &ChannelSpectrum,
    t_end: f64,
) -> Result<ValidityReport> {
    check_validity_with(params, drive, spectrum, t_end, ValidityThresholds::default())
}

pub fn check_validity_with(
    params: &SystemParams,
    drive: &DriveParams,
    spectrum: &ChannelSpectrum,
    t_end: f64,
    thresholds: ValidityThresholds,
) -> Result<ValidityReport> {
    let a = spectrum
        .gr_k_signed
        .iter()
        .zip(spectrum.mode_detunings(params.omega_r))
        .map(|(g, w)| g.abs() / w.abs())
        .fold(0.0, f64::max);

    // worst |J_n(z)| over the amplitudes the pulse sweeps through
    let grid = 256;
    let mut peak = vec![0.0f64; DOMINANT_PHOTONS as usize + 1];
    for i in 0..=grid {
        let z = drive.z0 * i as f64 / grid as f64;
        let row = bessel::bessel_jn_row(DOMINANT_PHOTONS as u32, z)?;
        for (p, v) in peak.iter_mut().zip(row) {
            *p = p.max(v.abs());
        }
    }
    let detune_s = spectrum.mode_detunings(params.omega_s);
    let mut b = 0.0f64;
    let mut resonant_terms = Vec::new();
    for (k, (g, w)) in spectrum.gs_k.iter().zip(&detune_s).enumerate() {
        for n in -DOMINANT_PHOTONS..=DOMINANT_PHOTONS {
            let denom = (w - n as f64 * drive.omega).abs();
            let num = g.abs() * peak[n.unsigned_abs() as usize];
            if denom < DIVERGENCE_CUTOFF * params.g_s.max(f64::MIN_POSITIVE) {
                resonant_terms.push((k + 1, n));
                continue;
            }
            b = b.max(num / denom);
        }
    }

    let gap = (spectrum.lowest_frequency() - params.omega_s).abs();
    let c = drive.omega / gap;
    // guard against round-off in an exactly resonant gap
    let n_star = (gap / drive.omega - 1e-9).ceil().min(bessel::MAX_ORDER as f64) as u32;
    let d = params.g_s * bessel_jn(n_star as i32, drive.z0)?.abs() * t_end;

    Ok(ValidityReport {
        cond_a: Condition::new(a, thresholds.receiver_coupling),
        cond_b: Condition::new(b, thresholds.sender_coupling),
        cond_c: Condition::new(c, thresholds.band_gap),
        cond_d: Condition::new(d, thresholds.bridging),
        n_star,
        resonant_terms,
    })
}

/// Beyond-RWA coefficients of the reduced equations
/// `i dA_s/dt = -S0(t) A_s - Omega0(t) A_r`, `i dA_r/dt = -S1 A_r - Omega1(t) A_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct TlsCoefficients {
    pub s0: C64,
    pub s1: C64,
    pub omega0: C64,
    pub omega1: C64,
    /// `(k, n')` terms dropped because `|w_{k,s} - n' w|` vanished.
    pub skipped: Vec<(usize, i32)>,
}

/// Precomputed pieces of [`tls_coefficients_full`] for repeated evaluation.
#[derive(Clone, Debug)]
pub struct TlsCoefficientModel {
    n_max: usize,
    omega: f64,
    omega_rs: f64,
    drive: DriveParams,
    gs_k: Vec<f64>,
    gr_signed: Vec<f64>,
    detune_s: Vec<f64>,
    detune_r: Vec<f64>,
    s1: f64,
    skipped: Vec<(usize, i32)>,
}

impl TlsCoefficientModel {
    pub fn new(params: &SystemParams, spectrum: &ChannelSpectrum, drive: &DriveParams, n_max: u32) -> Result<Self> {
        if n_max < drive.nu + 5 {
            return Err(invalid("n_max", format!("must be at least nu + 5 = {}", drive.nu + 5)));
        }
        if n_max > bessel::MAX_ORDER {
            return Err(Error::BesselOrder(n_max as i64));
        }
        let (_, s1) = rwa_shifts(params, spectrum)?;
        let detune_s = spectrum.mode_detunings(params.omega_s);
        let cutoff = DIVERGENCE_CUTOFF * params.g_s.max(f64::MIN_POSITIVE);
        let mut skipped = Vec::new();
        for (k, w) in detune_s.iter().enumerate() {
            for n in -(n_max as i32)..=(n_max as i32) {
                if (w - n as f64 * drive.omega).abs() < cutoff {
                    skipped.push((k + 1, n));
                }
            }
        }
        Ok(Self {
            n_max: n_max as usize,
            omega: drive.omega,
            omega_rs: params.omega_rs(),
            drive: *drive,
            gs_k: spectrum.gs_k.clone(),
            gr_signed: spectrum.gr_k_signed.clone(),
            detune_s,
            detune_r: spectrum.mode_detunings(params.omega_r),
            s1,
            skipped,
        })
    }

    pub fn skipped(&self) -> &[(usize, i32)] {
        &self.skipped
    }

    /// Coefficients at time `t`. The double sum in `S0` factorises into a
    /// product of two single sidebands sums per mode.
    pub fn eval(&self, t: f64, row: &mut Vec<f64>) -> TlsCoefficients {
        row.resize(self.n_max + 1, 0.0);
        bessel::fill_row(self.n_max, self.drive.z(t), row);
        let nm = self.n_max as i32;
        let j = |n: i32| -> f64 {
            let v = row[n.unsigned_abs() as usize];
            if n < 0 && n % 2 != 0 {
                -v
            } else {
                v
            }
        };
        let cutoff_hit = |k: usize, n: i32| self.skipped.iter().any(|&(kk, nn)| kk == k + 1 && nn == n);

        // sum_n J_n e^{i n w t}
        let forward: C64 = (-nm..=nm).map(|n| C64::cis(n as f64 * self.omega * t) * j(n)).sum();
        let mut s0 = C64::new(0.0, 0.0);
        let mut omega0 = C64::new(0.0, 0.0);
        let mut omega1 = C64::new(0.0, 0.0);
        for k in 0..self.gs_k.len() {
            let mut backward = C64::new(0.0, 0.0);
            let mut omega1_k = C64::new(0.0, 0.0);
            for n in -nm..=nm {
                if cutoff_hit(k, n) {
                    continue;
                }
                let denom = self.detune_s[k] - n as f64 * self.omega;
                backward += C64::cis(-(n as f64) * self.omega * t) * (j(n) / denom);
                omega1_k += C64::cis((self.omega_rs - n as f64 * self.omega) * t) * (j(n) / denom);
            }
            let g = self.gs_k[k];
            s0 += forward * backward * (g * g);
            omega1 += omega1_k * (g * self.gr_signed[k]);
            let o0: C64 = (-nm..=nm)
                .map(|n| C64::cis(-(self.omega_rs - n as f64 * self.omega) * t) * j(n))
                .sum();
            omega0 += o0 * (g * self.gr_signed[k] / self.detune_r[k]);
        }
        TlsCoefficients {
            s0,
            s1: C64::new(self.s1, 0.0),
            omega0,
            omega1,
            skipped: self.skipped.clone(),
        }
    }
}

/// Beyond-RWA coefficients `(S0(t), S1, Omega0(t), Omega1(t))` with sidebands `|n| <= n_max`.
pub fn tls_coefficients_full(
    params: &SystemParams,
    spectrum: &ChannelSpectrum,
    drive: &DriveParams,
    t: f64,
    n_max: u32,
) -> Result<TlsCoefficients> {
    let model = TlsCoefficientModel::new(params, spectrum, drive, n_max)?;
    let mut row = Vec::new();
    Ok(model.eval(t, &mut row))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TlsMode {
    /// Closed-form rotation by the pulse area.
    Rwa,
    /// Numerical integration with the time-dependent coefficients.
    Full,
}

/// Two-amplitude trajectory `[A_s, A_r]` of the effective model.
pub fn integrate_tls(
    params: &SystemParams,
    spectrum: &ChannelSpectrum,
    drive: &DriveParams,
    config: &IntegratorConfig,
    t_span: (f64, f64),
    mode: TlsMode,
) -> Result<Trajectory> {
    let (start, end) = t_span;
    if !(start < end) {
        return Err(Error::InvalidTimeSpan { start, end });
    }
    drive.validate()?;
    let samples = sample_grid(start, end, config.sample_dt, &[]);
    let mut traj = Trajectory::new(params.clone(), *drive);
    let two_level = |t: f64, a: Vec<C64>| AmplitudeState {
        picture: Picture::TwoLevel,
        amplitudes: a,
        time: t,
    };

    match mode {
        TlsMode::Rwa => {
            let th = theta0(params, spectrum)?.abs();
            let mut area = th * bessel_area(drive, 0.0, start)?;
            let (a_s, a_r) = rwa_amplitudes(area);
            traj.push(two_level(start, vec![a_s, a_r]))?;
            let mut prev = start;
            for &t in &samples {
                area += th * bessel_area(drive, prev, t)?;
                prev = t;
                let (a_s, a_r) = rwa_amplitudes(area);
                traj.push(two_level(t, vec![a_s, a_r]))?;
            }
        }
        TlsMode::Full => {
            let model = TlsCoefficientModel::new(params, spectrum, drive, config.n_max)?;
            let mut row = Vec::new();
            let rhs = |t: f64, y: &[C64], dy: &mut [C64]| {
                let c = model.eval(t, &mut row);
                dy[0] = I * (c.s0 * y[0] + c.omega0 * y[1]);
                dy[1] = I * (c.s1 * y[1] + c.omega1 * y[0]);
            };
            let y0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
            let mut err = None;
            solve(rhs, start, &y0, &samples, config.ode_options(), |t, y| {
                if let Err(e) = traj.push(two_level(t, y.to_vec())) {
                    err.get_or_insert(e);
                }
            })?;
            if let Some(e) = err {
                return Err(e);
            }
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::build_spectrum;
    use crate::types::PulseShape;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn fig5() -> SystemParams {
        SystemParams::uniform(2, 0.0, 2.0, 22.0, 6.0, 1.0, 1.0)
    }

    fn drive(tau: f64) -> DriveParams {
        DriveParams {
            z0: 2.0,
            omega: 2.0,
            pulse: PulseShape::gaussian(300.0, tau),
            nu: 1,
        }
    }

    #[test]
    fn fig5_shifts_and_theta0() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let (s0, s1) = rwa_shifts(&p, &s).unwrap();
        let expected = 0.5 * (1.0 / 26.0 + 1.0 / 14.0);
        assert_relative_eq!(s0, expected, max_relative = 1e-13);
        assert_relative_eq!(s0, 0.054945054945054944, max_relative = 1e-12);
        assert_eq!(s0, s1);
        let th = theta0(&p, &s).unwrap();
        assert_relative_eq!(th, 0.5 * (1.0 / 26.0 - 1.0 / 14.0), max_relative = 1e-13);
        let terms = theta0_terms(&p, &s).unwrap();
        assert!(terms[0] > 0.0 && terms[1] < 0.0);
    }

    #[test]
    fn rabi_frequency_examples() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        assert_eq!(rabi_frequency(&p, &s, 1, 0.0).unwrap(), 0.0);
        let om = rabi_frequency(&p, &s, 1, 2.0).unwrap();
        assert_abs_diff_eq!(om, -0.016483516483516 * 0.5767248077568734, epsilon = 1e-12);
        assert_abs_diff_eq!(om, -0.009507, epsilon = 1e-6);
        assert_eq!(rabi_frequency(&p, &s, 0, 0.0).unwrap(), theta0(&p, &s).unwrap());
    }

    #[test]
    fn resonant_channel_is_rejected() {
        let p = SystemParams::uniform(2, 0.0, 16.0, 22.0, 6.0, 1.0, 1.0);
        let s = build_spectrum(&p).unwrap();
        assert!(matches!(rwa_shifts(&p, &s), Err(Error::ResonantChannel { mode: 2 })));
    }

    #[test]
    fn rwa_amplitude_examples() {
        let (a, b) = rwa_amplitudes(0.0);
        assert_eq!((a, b), (C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
        let (a, b) = rwa_amplitudes(FRAC_PI_2);
        assert_abs_diff_eq!(a.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((b - I).norm(), 0.0, epsilon = 1e-15);
        let (a, b) = rwa_amplitudes(FRAC_PI_4);
        assert_abs_diff_eq!(a.re, FRAC_PI_4.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(b.im, 0.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn pulse_area_basics() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        assert_eq!(pulse_area(&p, &s, &drive(50.9), 0.0).unwrap().angle, 0.0);
        let constant = DriveParams {
            pulse: PulseShape::constant(),
            ..drive(50.9)
        };
        let a1 = pulse_area(&p, &s, &constant, 10.0).unwrap();
        let a2 = pulse_area(&p, &s, &constant, 20.0).unwrap();
        assert_relative_eq!(a2.angle, 2.0 * a1.angle, max_relative = 1e-14);
        assert_relative_eq!(a1.angle, 0.016483516483516 * 0.5767248077568734 * 10.0, max_relative = 1e-12);
        assert_eq!(a1.theta0_sign, -1.0);
    }

    #[test]
    fn fig5c_area_is_quarter_turn() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let d = drive(50.90);
        let area = pulse_area(&p, &s, &d, 300.0 + 5.0 * 50.90).unwrap().angle;
        assert!((area / FRAC_PI_2 - 1.0).abs() < 0.05, "area {area}");
    }

    #[test]
    fn calibration_is_linear_in_target() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let t1 = calibrate_tau(&p, &s, &drive(1.0), FRAC_PI_4).unwrap();
        let t2 = calibrate_tau(&p, &s, &drive(1.0), FRAC_PI_2).unwrap();
        assert_relative_eq!(t2, 2.0 * t1, max_relative = 1e-14);
    }

    #[test]
    fn calibration_errors() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let mut d = drive(1.0);
        d.nu = 0;
        assert!(matches!(calibrate_tau(&p, &s, &d, 1.0), Err(Error::Calibration(_))));
        let mut d = drive(1.0);
        d.pulse = PulseShape::constant();
        assert!(calibrate_tau(&p, &s, &d, 1.0).is_err());
        assert!(calibrate_tau(&p, &s, &drive(1.0), -1.0).is_err());
        // beyond the first zero of J_1 the integral shrinks; far beyond it can turn negative
        let mut d = drive(1.0);
        d.z0 = 0.0;
        assert!(calibrate_tau(&p, &s, &d, 1.0).is_err());
    }

    #[test]
    fn validity_fig5() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let r = check_validity(&p, &drive(50.9), &s, 554.5).unwrap();
        assert_eq!(r.n_star, 8);
        assert_abs_diff_eq!(r.cond_a.ratio, 0.5f64.sqrt() / 14.0, epsilon = 1e-12);
        assert!(r.cond_a.pass);
        assert_abs_diff_eq!(r.cond_c.ratio, 2.0 / 16.0, epsilon = 1e-12);
        assert!(r.all_pass(), "{r:?}");

        let mut strong = p.clone();
        strong.g_r = 10.0;
        let s = build_spectrum(&strong).unwrap();
        let r = check_validity(&strong, &drive(50.9), &s, 554.5).unwrap();
        assert_abs_diff_eq!(r.cond_a.ratio, 10.0 * 0.5f64.sqrt() / 14.0, epsilon = 1e-12);
        assert!(!r.cond_a.pass);
    }

    #[test]
    fn undriven_coefficients_are_static() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let d = DriveParams {
            z0: 0.0,
            ..drive(50.9)
        };
        let expected: f64 = s
            .gs_k
            .iter()
            .zip(s.mode_detunings(p.omega_s))
            .map(|(g, w)| g * g / w)
            .sum();
        for t in [0.0, 1.3, 77.0] {
            let c = tls_coefficients_full(&p, &s, &d, t, 10).unwrap();
            assert_abs_diff_eq!(c.s0.re, expected, epsilon = 1e-14);
            assert_abs_diff_eq!(c.s0.im, 0.0, epsilon = 1e-14);
            assert_eq!(c.s1.re, rwa_shifts(&p, &s).unwrap().1);
        }
    }

    #[test]
    fn factorised_s0_matches_double_sum() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let d = DriveParams {
            pulse: PulseShape::constant(),
            ..drive(50.9)
        };
        let nm = 12i32;
        let t = 3.21;
        let c = tls_coefficients_full(&p, &s, &d, t, nm as u32).unwrap();
        let jn = |n: i32| bessel_jn(n, 2.0).unwrap();
        let mut direct = C64::new(0.0, 0.0);
        for (k, w) in s.mode_detunings(0.0).iter().enumerate() {
            for n in -nm..=nm {
                for m in -nm..=nm {
                    if (w - m as f64 * 2.0).abs() < 1e-9 {
                        continue;
                    }
                    direct += C64::cis((n - m) as f64 * 2.0 * t) * (s.gs_k[k] * s.gs_k[k] * jn(n) * jn(m) / (w - m as f64 * 2.0));
                }
            }
        }
        assert_abs_diff_eq!((c.s0 - direct).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn divergent_terms_are_logged() {
        // omega_k - omega_s = 16 = 8 w for mode 2
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let c = tls_coefficients_full(&p, &s, &drive(50.9), 300.0, 10).unwrap();
        assert!(c.skipped.contains(&(2, 8)));
        assert!(c.s0.re.is_finite() && c.omega1.re.is_finite());
        assert!(tls_coefficients_full(&p, &s, &drive(50.9), 300.0, 3).is_err());
    }

    #[test]
    fn averaged_omega0_matches_rwa() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let d = DriveParams {
            pulse: PulseShape::constant(),
            ..drive(50.9)
        };
        let model = TlsCoefficientModel::new(&p, &s, &d, 20).unwrap();
        let mut row = Vec::new();
        // 40 drive periods, midpoint rule on a fine grid
        let periods = 40.0;
        let span = periods * PI;
        let steps = 40_000;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..steps {
            let t = (i as f64 + 0.5) * span / steps as f64;
            let c = model.eval(t, &mut row);
            acc += c.omega0 * C64::cis((p.omega_rs() - d.omega) * t);
        }
        let avg = acc / steps as f64;
        let rwa = rabi_frequency(&p, &s, 1, 2.0).unwrap();
        assert!((avg.re - rwa).abs() < 0.02 * rwa.abs(), "{avg} vs {rwa}");
        assert!(avg.im.abs() < 0.02 * rwa.abs());
    }

    #[test]
    fn pulse_area_is_monotone_below_first_zero() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let d = drive(50.9);
        let mut prev = 0.0;
        for i in 1..=60 {
            let a = pulse_area(&p, &s, &d, i as f64 * 10.0).unwrap().angle;
            assert!(a >= prev);
            prev = a;
        }
    }

    #[test]
    fn calibration_round_trip() {
        for (p, t0) in [(fig5(), 300.0f64), (SystemParams::uniform(3, 0.0, 2.0, 32.0, 14.0, 1.0, 1.0), 350.0)] {
            let s = build_spectrum(&p).unwrap();
            for target in [FRAC_PI_4, FRAC_PI_2] {
                let tau = calibrate_tau(&p, &s, &drive(1.0), target).unwrap();
                let d = DriveParams {
                    pulse: PulseShape::gaussian(t0.max(5.5 * tau), tau),
                    ..drive(1.0)
                };
                let area = pulse_area(&p, &s, &d, d.pulse.t0 + 8.0 * tau).unwrap().angle;
                assert!((area / target - 1.0).abs() < 1e-3, "{area} vs {target}");
            }
        }
    }

    #[test]
    fn theta0_terms_alternate() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let d = s.mode_detunings(p.omega_r);
        for (k, term) in theta0_terms(&p, &s).unwrap().iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(term.signum(), sign * d[k].signum());
        }
    }

    #[test]
    fn rabi_frequency_drops_with_chain_length() {
        let p5 = fig5();
        let p6 = SystemParams::uniform(3, 0.0, 2.0, 32.0, 14.0, 1.0, 1.0);
        let o5 = rabi_frequency(&p5, &build_spectrum(&p5).unwrap(), 1, 2.0).unwrap();
        let o6 = rabi_frequency(&p6, &build_spectrum(&p6).unwrap(), 1, 2.0).unwrap();
        assert!(o6.abs() < o5.abs());
    }

    #[test]
    fn undriven_full_mode_is_constant_rabi_flopping() {
        // resonant terminals, no drive: coefficients are constant
        let p = SystemParams::uniform(2, 0.0, 0.0, 22.0, 6.0, 1.0, 1.0);
        let s = build_spectrum(&p).unwrap();
        let d = DriveParams::undriven();
        let c0 = tls_coefficients_full(&p, &s, &d, 0.0, 5).unwrap();
        let c1 = tls_coefficients_full(&p, &s, &d, 37.0, 5).unwrap();
        assert_abs_diff_eq!((c0.omega0 - c1.omega0).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((c0.omega1 - c1.omega1).norm(), 0.0, epsilon = 1e-15);
        let omega = c0.omega0.re;
        let cfg = IntegratorConfig {
            sample_dt: 1.0,
            ..IntegratorConfig::default()
        };
        let period = PI / omega.abs();
        let tr = integrate_tls(&p, &s, &d, &cfg, (0.0, period), TlsMode::Full).unwrap();
        // S0 = S1 here, so the flop is complete after half a population period
        let half = tr.state_near(0.5 * period).unwrap();
        assert_abs_diff_eq!(half.receiver().norm_sqr(), 1.0, epsilon = 1e-3);
    }

    #[test]
    fn rwa_trajectory_reaches_full_transfer() {
        let p = fig5();
        let s = build_spectrum(&p).unwrap();
        let d = drive(50.9);
        let tau = calibrate_tau(&p, &s, &d, FRAC_PI_2).unwrap();
        let d = drive(tau);
        let cfg = IntegratorConfig {
            sample_dt: 5.0,
            ..IntegratorConfig::default()
        };
        let tr = integrate_tls(&p, &s, &d, &cfg, (0.0, 300.0 + 5.0 * tau), TlsMode::Rwa).unwrap();
        let last = tr.last().unwrap();
        assert_abs_diff_eq!(last.receiver().norm_sqr(), 1.0, epsilon = 1e-6);
        assert!(tr.states.iter().all(|s| (s.norm_sqr() - 1.0).abs() < 1e-14));
    }
}
