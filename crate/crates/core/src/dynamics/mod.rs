//! Full (no rotating-wave approximation) single-excitation dynamics.
//!
//! Two equivalent formulations are integrated:
//!
//! * site picture: nearest-neighbour amplitudes with the drive entering as
//!   the phase `exp(i h(t))` on the sender bond;
//! * mode picture: sender and receiver coupled to the channel eigenmodes,
//!   the drive phase expanded into photon sidebands
//!   `exp(i z sin(w t)) = sum_n J_n(z) exp(i n w t)`.
//!
//! Both are interaction pictures with respect to the bare energies.

mod ode;
mod tableau;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub use ode::{solve, OdeOptions, OdeStats};

use crate::bessel;
use crate::error::{invalid, Error, Result};
use crate::quad;
use crate::spectrum::{build_spectrum, ChannelSpectrum};
use crate::types::{AmplitudeState, DriveParams, Picture, SystemParams, Trajectory};

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// How the drive phase `h(t)` is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMode {
    /// `h(t) = z0 f(t) sin(w t)`, valid for slowly varying envelopes.
    AdiabaticSine,
    /// `h(t) = z0 w * integral_0^t f(s) cos(w s) ds`.
    ExactQuadrature,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Spacing of the output grid.
    pub sample_dt: f64,
    pub h_mode: PhaseMode,
    /// Photon-sideband truncation `|n| <= n_max` for the mode picture.
    pub n_max: u32,
    pub picture: Picture,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 1.0,
            sample_dt: 0.01,
            h_mode: PhaseMode::AdiabaticSine,
            n_max: 20,
            picture: Picture::Site,
        }
    }
}

impl IntegratorConfig {
    /// Defaults with the output grid resolving the drive and channel hopping:
    /// `sample_dt = min(0.05 / w, 0.1 / kappa)`.
    pub fn for_system(params: &SystemParams, drive: &DriveParams) -> Self {
        let mut dt = 0.1 / params.kappa;
        if drive.omega > 0.0 {
            dt = dt.min(0.05 / drive.omega);
        }
        Self {
            sample_dt: dt,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(invalid("integrator", "tolerances must be positive"));
        }
        if !(self.max_step > 0.0) {
            return Err(invalid("integrator.max_step", "must be positive"));
        }
        if !(self.sample_dt > 0.0) {
            return Err(invalid("integrator.sample_dt", "must be positive"));
        }
        if self.picture == Picture::TwoLevel {
            return Err(invalid("integrator.picture", "chain dynamics need the site or mode picture"));
        }
        if self.n_max > bessel::MAX_ORDER {
            return Err(invalid("integrator.n_max", format!("must be <= {}", bessel::MAX_ORDER)));
        }
        Ok(())
    }

    pub(crate) fn ode_options(&self) -> OdeOptions {
        OdeOptions {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step,
        }
    }
}

/// Drive phase `h(t)` entering the sender coupling `g_s exp(i h(t))`.
pub fn drive_phase(drive: &DriveParams, t: f64, mode: PhaseMode) -> f64 {
    match mode {
        PhaseMode::AdiabaticSine => drive.z(t) * (drive.omega * t).sin(),
        PhaseMode::ExactQuadrature => {
            if drive.z0 == 0.0 || t == 0.0 {
                return 0.0;
            }
            let w = drive.omega;
            let period = 2.0 * std::f64::consts::PI / w;
            let integral = quad::integrate_pieces(
                |s| drive.pulse.envelope(s) * (w * s).cos(),
                0.0,
                t,
                0.5 * period,
                1e-11 / (drive.z0 * w),
            );
            drive.z0 * w * integral
        }
    }
}

/// Site-picture equations; `a[0]` sender, `a[1..=N]` channel, `a[N+1]` receiver.
#[derive(Clone, Debug)]
pub struct SiteEquations {
    freqs: Vec<f64>,
    // bond l couples a[l] and a[l+1]; bond 0 is the sender bond
    bonds: Vec<f64>,
}

impl SiteEquations {
    pub fn new(params: &SystemParams) -> Self {
        let n = params.n_sites;
        let mut freqs = vec![params.omega_c; n + 2];
        freqs[0] = params.omega_s;
        freqs[n + 1] = params.omega_r;
        let mut bonds = Vec::with_capacity(n + 1);
        bonds.push(params.g_s);
        for l in 1..n {
            bonds.push(params.channel_bond(l));
        }
        bonds.push(params.g_r);
        Self { freqs, bonds }
    }

    pub fn dim(&self) -> usize {
        self.freqs.len()
    }

    /// `da/dt` given the drive phase `h` at time `t`.
    pub fn eval(&self, t: f64, h: f64, a: &[C64], da: &mut [C64]) {
        da.fill(ZERO);
        let drive = C64::cis(h);
        for l in 0..self.bonds.len() {
            // coupling G_l exp(i(w_l - w_{l+1}) t) between a[l] and a[l+1]
            let g = if l == 0 { drive * self.bonds[0] } else { C64::new(self.bonds[l], 0.0) };
            let c = g * C64::cis((self.freqs[l] - self.freqs[l + 1]) * t);
            da[l] += -I * c * a[l + 1];
            da[l + 1] += -I * c.conj() * a[l];
        }
    }
}

/// Mode-picture equations with the drive expanded in photon sidebands.
#[derive(Clone, Debug)]
pub struct ModeEquations {
    omega: f64,
    z0: f64,
    pulse: crate::types::PulseShape,
    n_max: usize,
    gs_k: Vec<f64>,
    gr_k: Vec<f64>,
    // omega_k - omega_s, omega_k - omega_r
    detune_s: Vec<f64>,
    detune_r: Vec<f64>,
}

impl ModeEquations {
    pub fn new(params: &SystemParams, drive: &DriveParams, spectrum: &ChannelSpectrum, n_max: u32) -> Self {
        Self {
            omega: drive.omega,
            z0: drive.z0,
            pulse: drive.pulse,
            n_max: n_max as usize,
            gs_k: spectrum.gs_k.clone(),
            gr_k: spectrum.gr_k_signed.clone(),
            detune_s: spectrum.mode_detunings(params.omega_s),
            detune_r: spectrum.mode_detunings(params.omega_r),
        }
    }

    pub fn dim(&self) -> usize {
        self.gs_k.len() + 2
    }

    /// Truncated sideband sum `sum_{|n| <= n_max} J_n(z) exp(i n w t)`.
    pub fn sideband_sum(&self, t: f64, bessel_row: &mut [f64]) -> C64 {
        let z = self.z0 * self.pulse.envelope(t);
        bessel::fill_row(self.n_max, z, bessel_row);
        let step = C64::cis(self.omega * t);
        let mut phase = C64::new(1.0, 0.0);
        let mut sum = C64::new(bessel_row[0], 0.0);
        for (n, &j) in bessel_row.iter().enumerate().take(self.n_max + 1).skip(1) {
            phase *= step;
            // J_{-n} = (-1)^n J_n
            let neg = if n % 2 == 0 { j } else { -j };
            sum += phase * j + phase.conj() * neg;
        }
        sum
    }

    /// `da/dt` for a given sender phase factor `drive = exp(i h(t))`.
    pub fn eval_with_phase(&self, t: f64, drive: C64, a: &[C64], da: &mut [C64]) {
        let n = self.gs_k.len();
        let (a_s, a_r) = (a[0], a[n + 1]);
        let mut ds = ZERO;
        let mut dr = ZERO;
        for k in 0..n {
            let es = C64::cis(self.detune_s[k] * t);
            let er = C64::cis(self.detune_r[k] * t);
            let cs = drive * self.gs_k[k] * es.conj();
            let cr = er.conj() * self.gr_k[k];
            ds += cs * a[k + 1];
            dr += cr * a[k + 1];
            da[k + 1] = -I * (cs.conj() * a_s + cr.conj() * a_r);
        }
        da[0] = -I * ds;
        da[n + 1] = -I * dr;
    }

    pub fn eval(&self, t: f64, a: &[C64], da: &mut [C64], bessel_row: &mut [f64]) {
        let drive = self.sideband_sum(t, bessel_row);
        self.eval_with_phase(t, drive, a, da);
    }
}

/// Site-picture derivative `dA/dt` at time `t`.
pub fn rhs_site(
    state: &AmplitudeState,
    params: &SystemParams,
    drive: &DriveParams,
    mode: PhaseMode,
) -> Result<Vec<C64>> {
    if state.picture != Picture::Site {
        return Err(Error::PictureMismatch {
            expected: Picture::Site,
            found: state.picture,
        });
    }
    let eq = SiteEquations::new(params);
    check_dim(eq.dim(), state)?;
    let mut da = vec![ZERO; eq.dim()];
    eq.eval(state.time, drive_phase(drive, state.time, mode), &state.amplitudes, &mut da);
    Ok(da)
}

/// Mode-picture derivative `dA/dt` at time `t` with sidebands `|n| <= n_max`.
pub fn rhs_mode(
    state: &AmplitudeState,
    params: &SystemParams,
    drive: &DriveParams,
    spectrum: &ChannelSpectrum,
    n_max: u32,
) -> Result<Vec<C64>> {
    if state.picture != Picture::Mode {
        return Err(Error::PictureMismatch {
            expected: Picture::Mode,
            found: state.picture,
        });
    }
    if n_max > bessel::MAX_ORDER {
        return Err(Error::BesselOrder(n_max as i64));
    }
    let eq = ModeEquations::new(params, drive, spectrum, n_max);
    check_dim(eq.dim(), state)?;
    let mut da = vec![ZERO; eq.dim()];
    let mut row = vec![0.0; n_max as usize + 1];
    eq.eval(state.time, &state.amplitudes, &mut da, &mut row);
    Ok(da)
}

fn check_dim(expected: usize, state: &AmplitudeState) -> Result<()> {
    if state.amplitudes.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: state.amplitudes.len(),
        });
    }
    Ok(())
}

/// Output grid: `start + i * dt` up to `end`, the final time, and any extra
/// points inside the span, sorted and de-duplicated. `start` itself is excluded.
pub fn sample_grid(start: f64, end: f64, dt: f64, extra: &[f64]) -> Vec<f64> {
    let count = ((end - start) / dt).floor() as usize;
    let mut grid: Vec<f64> = (1..=count).map(|i| start + i as f64 * dt).filter(|&t| t < end).collect();
    grid.push(end);
    grid.extend(extra.iter().copied().filter(|&t| t > start && t < end));
    grid.sort_by(f64::total_cmp);
    // drop points closer than a few ulps to their predecessor
    grid.dedup_by(|b, a| (*b - *a).abs() <= 1e-12 * a.abs().max(1.0));
    grid
}

/// Integrates the full equations from `t_span.0` with the excitation on the sender.
pub fn integrate(
    params: &SystemParams,
    drive: &DriveParams,
    config: &IntegratorConfig,
    t_span: (f64, f64),
) -> Result<Trajectory> {
    integrate_with_samples(params, drive, config, t_span, &[])
}

/// As [`integrate`], additionally sampling at the `extra` times.
pub fn integrate_with_samples(
    params: &SystemParams,
    drive: &DriveParams,
    config: &IntegratorConfig,
    t_span: (f64, f64),
    extra: &[f64],
) -> Result<Trajectory> {
    params.validate()?;
    drive.validate()?;
    config.validate()?;
    let (start, end) = t_span;
    if !(start < end) || !start.is_finite() || !end.is_finite() {
        return Err(Error::InvalidTimeSpan { start, end });
    }
    let samples = sample_grid(start, end, config.sample_dt, extra);
    let initial = AmplitudeState::sender_excited(params.n_sites, config.picture);
    let dim = initial.amplitudes.len();
    let exact = config.h_mode == PhaseMode::ExactQuadrature && drive.z0 > 0.0;

    // exact phase: h(t) is carried as an extra state component, dh/dt = z0 w f(t) cos(w t)
    let mut y0 = initial.amplitudes.clone();
    if exact {
        y0.push(C64::new(drive_phase(drive, start, PhaseMode::ExactQuadrature), 0.0));
    }
    let phase_rate = |t: f64| drive.z0 * drive.omega * drive.pulse.envelope(t) * (drive.omega * t).cos();

    let mut traj = Trajectory::new(params.clone(), *drive);
    let mut push_err = None;
    let picture = config.picture;
    let mut observe = |t: f64, y: &[C64]| {
        let state = AmplitudeState {
            picture,
            amplitudes: y[..dim].to_vec(),
            time: t,
        };
        if let Err(e) = traj.push(state) {
            push_err.get_or_insert(e);
        }
    };

    match config.picture {
        Picture::Site => {
            let eq = SiteEquations::new(params);
            let rhs = |t: f64, y: &[C64], dy: &mut [C64]| {
                if exact {
                    eq.eval(t, y[dim].re, &y[..dim], &mut dy[..dim]);
                    dy[dim] = C64::new(phase_rate(t), 0.0);
                } else {
                    eq.eval(t, drive_phase(drive, t, PhaseMode::AdiabaticSine), y, dy);
                }
            };
            solve(rhs, start, &y0, &samples, config.ode_options(), &mut observe)?;
        }
        Picture::Mode => {
            if !exact && drive.z0 > 0.0 && config.n_max < drive.nu + 5 {
                return Err(invalid("integrator.n_max", format!("must be at least nu + 5 = {}", drive.nu + 5)));
            }
            let spectrum = build_spectrum(params)?;
            let eq = ModeEquations::new(params, drive, &spectrum, config.n_max);
            let mut row = vec![0.0; config.n_max as usize + 1];
            let rhs = |t: f64, y: &[C64], dy: &mut [C64]| {
                if exact {
                    eq.eval_with_phase(t, C64::cis(y[dim].re), &y[..dim], &mut dy[..dim]);
                    dy[dim] = C64::new(phase_rate(t), 0.0);
                } else {
                    eq.eval(t, y, dy, &mut row);
                }
            };
            solve(rhs, start, &y0, &samples, config.ode_options(), &mut observe)?;
        }
        Picture::TwoLevel => unreachable!("rejected by IntegratorConfig::validate"),
    }
    if let Some(e) = push_err {
        return Err(e);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::PulseShape;
    use approx::assert_abs_diff_eq;

    fn fig5() -> SystemParams {
        SystemParams::uniform(2, 0.0, 2.0, 22.0, 6.0, 1.0, 1.0)
    }

    fn gaussian_drive(tau: f64) -> DriveParams {
        DriveParams {
            z0: 2.0,
            omega: 2.0,
            pulse: PulseShape::gaussian(300.0, tau),
            nu: 1,
        }
    }

    #[test]
    fn phase_at_origin_is_zero() {
        let d = gaussian_drive(50.9);
        assert_eq!(drive_phase(&d, 0.0, PhaseMode::AdiabaticSine), 0.0);
        assert_eq!(drive_phase(&d, 0.0, PhaseMode::ExactQuadrature), 0.0);
    }

    #[test]
    fn constant_adiabatic_phase() {
        let d = DriveParams {
            z0: 2.0,
            omega: 2.0,
            pulse: PulseShape::constant(),
            nu: 1,
        };
        let t = std::f64::consts::FRAC_PI_2 / 2.0;
        assert_abs_diff_eq!(drive_phase(&d, t, PhaseMode::AdiabaticSine), 2.0, epsilon = 1e-15);
        // for f = 1 the exact phase is z0 sin(w t) as well
        for t in [0.3, 1.7, 25.0] {
            assert_abs_diff_eq!(
                drive_phase(&d, t, PhaseMode::ExactQuadrature),
                2.0 * (2.0 * t).sin(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn exact_phase_close_to_adiabatic_at_peak() {
        let d = gaussian_drive(25.45);
        let exact = drive_phase(&d, 300.0, PhaseMode::ExactQuadrature);
        let adiabatic = drive_phase(&d, 300.0, PhaseMode::AdiabaticSine);
        assert!((exact - adiabatic).abs() <= 0.02 * d.z0, "{exact} vs {adiabatic}");
    }

    #[test]
    fn undriven_site_derivative() {
        let p = fig5();
        let d = DriveParams::undriven();
        let mut st = AmplitudeState::sender_excited(2, Picture::Site);
        st.time = 0.37;
        let da = rhs_site(&st, &p, &d, PhaseMode::AdiabaticSine).unwrap();
        let expected = -I * C64::cis(22.0 * 0.37);
        assert_abs_diff_eq!((da[1] - expected).norm(), 0.0, epsilon = 1e-14);
        assert_eq!(da[0], ZERO);
        assert_eq!(da[2], ZERO);
        assert_eq!(da[3], ZERO);
    }

    #[test]
    fn site_flow_preserves_norm() {
        let p = SystemParams::uniform(3, 0.1, 2.3, 17.0, 4.0, 1.0, 0.8);
        let d = gaussian_drive(30.0);
        let st = AmplitudeState {
            picture: Picture::Site,
            amplitudes: vec![
                C64::new(0.3, 0.1),
                C64::new(-0.2, 0.5),
                C64::new(0.1, -0.4),
                C64::new(0.6, 0.0),
                C64::new(0.05, 0.2),
            ],
            time: 251.3,
        };
        let da = rhs_site(&st, &p, &d, PhaseMode::AdiabaticSine).unwrap();
        let rate: f64 = st.amplitudes.iter().zip(&da).map(|(a, d)| (a.conj() * d).re).sum();
        assert_abs_diff_eq!(rate, 0.0, epsilon = 1e-14);

        let spectrum = build_spectrum(&p).unwrap();
        let st_mode = AmplitudeState {
            picture: Picture::Mode,
            ..st.clone()
        };
        let dm = rhs_mode(&st_mode, &p, &d, &spectrum, 20).unwrap();
        let rate: f64 = st_mode.amplitudes.iter().zip(&dm).map(|(a, d)| (a.conj() * d).re).sum();
        assert_abs_diff_eq!(rate, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn single_site_channel() {
        let p = SystemParams::uniform(1, 0.0, 1.0, 10.0, 1.0, 1.0, 0.5);
        let eq = SiteEquations::new(&p);
        assert_eq!(eq.dim(), 3);
        let a = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let mut da = [ZERO; 3];
        eq.eval(0.0, 0.4, &a, &mut da);
        assert_abs_diff_eq!((da[0] - (-I * C64::cis(0.4))).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((da[2] - (-I * 0.5)).norm(), 0.0, epsilon = 1e-15);
        assert_eq!(da[1], ZERO);
    }

    #[test]
    fn undriven_mode_equations_match_site_equations() {
        let p = fig5();
        let d = DriveParams::undriven();
        let spectrum = build_spectrum(&p).unwrap();
        let site = AmplitudeState {
            picture: Picture::Site,
            amplitudes: vec![C64::new(0.5, 0.1), C64::new(0.2, -0.3), C64::new(-0.1, 0.4), C64::new(0.3, 0.3)],
            time: 1.234,
        };
        let mode = crate::spectrum::site_to_mode(&site, &spectrum).unwrap();
        let ds = rhs_site(&site, &p, &d, PhaseMode::AdiabaticSine).unwrap();
        let dm = rhs_mode(&mode, &p, &d, &spectrum, 0).unwrap();
        // terminal derivatives are picture independent
        assert_abs_diff_eq!((ds[0] - dm[0]).norm(), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!((ds[3] - dm[3]).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn sideband_sum_reproduces_phase_factor() {
        let p = fig5();
        let d = gaussian_drive(50.9);
        let spectrum = build_spectrum(&p).unwrap();
        let eq = ModeEquations::new(&p, &d, &spectrum, 20);
        let mut row = vec![0.0; 21];
        for t in [0.0, 120.5, 299.0, 300.0, 333.3] {
            let s = eq.sideband_sum(t, &mut row);
            let exact = C64::cis(drive_phase(&d, t, PhaseMode::AdiabaticSine));
            assert_abs_diff_eq!((s - exact).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn sample_grid_includes_end_and_extras() {
        let g = sample_grid(0.0, 1.0, 0.3, &[0.45, 2.0, 0.6]);
        assert_eq!(g.len(), 5);
        assert_abs_diff_eq!(g[0], 0.3, epsilon = 1e-15);
        assert_eq!(g[1], 0.45);
        assert_eq!(*g.last().unwrap(), 1.0);
    }

    #[test]
    fn decoupled_sender_stays_put() {
        let mut p = fig5();
        p.g_s = 0.0;
        p.g_r = 0.0;
        let cfg = IntegratorConfig::for_system(&p, &gaussian_drive(50.9));
        let tr = integrate(&p, &gaussian_drive(50.9), &cfg, (0.0, 50.0)).unwrap();
        for s in &tr.states {
            assert_abs_diff_eq!((s.sender() - C64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn mode_picture_needs_enough_sidebands() {
        let p = fig5();
        let d = gaussian_drive(50.9);
        let cfg = IntegratorConfig {
            picture: Picture::Mode,
            n_max: 5,
            ..IntegratorConfig::default()
        };
        assert!(integrate(&p, &d, &cfg, (0.0, 1.0)).is_err());
        let cfg = IntegratorConfig { n_max: 6, ..cfg };
        assert!(integrate(&p, &d, &cfg, (0.0, 1.0)).is_ok());
    }

    #[test]
    fn invalid_span_rejected() {
        let p = fig5();
        let d = DriveParams::undriven();
        let cfg = IntegratorConfig::default();
        assert!(matches!(integrate(&p, &d, &cfg, (5.0, 5.0)), Err(Error::InvalidTimeSpan { .. })));
    }

    #[test]
    fn sample_times_are_strictly_increasing_and_state_length_fixed() {
        let p = fig5();
        let d = gaussian_drive(50.9);
        let cfg = IntegratorConfig {
            sample_dt: 0.7,
            ..IntegratorConfig::for_system(&p, &d)
        };
        let tr = integrate(&p, &d, &cfg, (0.0, 40.0)).unwrap();
        assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
        assert!(tr.states.iter().all(|s| s.amplitudes.len() == 4));
        assert!(tr.states.iter().zip(&tr.times).all(|(s, t)| s.time == *t));
        assert_eq!(*tr.times.last().unwrap(), 40.0);
    }
}
