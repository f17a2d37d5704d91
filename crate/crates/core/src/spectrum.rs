//! Closed-form eigenmodes of the uniform channel.
//!
//! The channel Hamiltonian (on-site `omega_c`, hopping `kappa`) is
//! diagonalised by the discrete sine transform
//! `L[k][i] = sqrt(2/(N+1)) sin(i k pi / (N+1))` with magnon frequencies
//! `omega_k = omega_c + 2 kappa cos(k pi / (N+1))`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::types::{AmplitudeState, Picture, SystemParams};

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSpectrum {
    n_sites: usize,
    omega_c: f64,
    /// Row-major `N x N`; row `k - 1` is mode `k` expressed on sites.
    mode_matrix: Vec<f64>,
    pub eigenfrequencies: Vec<f64>,
    /// Sender-mode couplings `g_s L[k][1]`.
    pub gs_k: Vec<f64>,
    /// Receiver-mode couplings `g_r L[k][1]` (unsigned).
    pub gr_k: Vec<f64>,
    /// Receiver-mode couplings with the site-`N` sign, `(-1)^(k-1) g_r L[k][1]`.
    pub gr_k_signed: Vec<f64>,
}

impl ChannelSpectrum {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// `L[k][i]` with 1-based mode `k` and site `i`.
    pub fn l(&self, k: usize, i: usize) -> f64 {
        self.mode_matrix[(k - 1) * self.n_sites + (i - 1)]
    }

    /// Mode `k` (1-based) as a site vector.
    pub fn mode_vector(&self, k: usize) -> &[f64] {
        &self.mode_matrix[(k - 1) * self.n_sites..k * self.n_sites]
    }

    /// `omega_k - reference` for every mode.
    pub fn mode_detunings(&self, reference: f64) -> Vec<f64> {
        self.eigenfrequencies.iter().map(|w| w - reference).collect()
    }

    pub fn lowest_frequency(&self) -> f64 {
        self.eigenfrequencies.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Analytic spectrum of the channel; fails for non-uniform bond couplings.
pub fn build_spectrum(params: &SystemParams) -> Result<ChannelSpectrum> {
    params.validate()?;
    if !params.is_uniform() {
        return Err(Error::NonUniformChannel);
    }
    let n = params.n_sites;
    let np1 = (n + 1) as f64;
    let scale = (2.0 / np1).sqrt();

    let mut mode_matrix = Vec::with_capacity(n * n);
    for k in 1..=n {
        for i in 1..=n {
            mode_matrix.push(scale * ((i * k) as f64 * PI / np1).sin());
        }
    }
    let eigenfrequencies = (1..=n)
        .map(|k| 2.0 * params.kappa * (k as f64 * PI / np1).cos() + params.omega_c)
        .collect();
    let first_site: Vec<f64> = (0..n).map(|k| mode_matrix[k * n]).collect();
    let gs_k = first_site.iter().map(|l| params.g_s * l).collect();
    let gr_k: Vec<f64> = first_site.iter().map(|l| params.g_r * l).collect();
    let gr_k_signed = gr_k
        .iter()
        .enumerate()
        .map(|(k, g)| if k % 2 == 0 { *g } else { -*g })
        .collect();

    Ok(ChannelSpectrum {
        n_sites: n,
        omega_c: params.omega_c,
        mode_matrix,
        eigenfrequencies,
        gs_k,
        gr_k,
        gr_k_signed,
    })
}

/// `omega_k - reference` for every mode.
pub fn mode_detunings(spectrum: &ChannelSpectrum, reference: f64) -> Vec<f64> {
    spectrum.mode_detunings(reference)
}

/// Re-expresses channel site amplitudes in the eigenmode basis.
///
/// Both pictures are interaction pictures, site amplitudes rotating at
/// `omega_c` and mode amplitudes at `omega_k`, so the transform carries the
/// phase `exp(i (omega_k - omega_c) t)` at the state's time stamp. Sender
/// and receiver are untouched.
pub fn site_to_mode(state: &AmplitudeState, spectrum: &ChannelSpectrum) -> Result<AmplitudeState> {
    check(state, spectrum, Picture::Site)?;
    let n = spectrum.n_sites;
    let channel = state.channel();
    let mut out = state.amplitudes.clone();
    for k in 1..=n {
        let amp: C64 = spectrum
            .mode_vector(k)
            .iter()
            .zip(channel)
            .map(|(l, a)| a * l)
            .sum();
        let phase = C64::cis((spectrum.eigenfrequencies[k - 1] - spectrum.omega_c) * state.time);
        out[k] = amp * phase;
    }
    Ok(AmplitudeState {
        picture: Picture::Mode,
        amplitudes: out,
        time: state.time,
    })
}

/// Inverse of [`site_to_mode`].
pub fn mode_to_site(state: &AmplitudeState, spectrum: &ChannelSpectrum) -> Result<AmplitudeState> {
    check(state, spectrum, Picture::Mode)?;
    let n = spectrum.n_sites;
    let modes: Vec<C64> = state
        .channel()
        .iter()
        .enumerate()
        .map(|(k, a)| a * C64::cis(-(spectrum.eigenfrequencies[k] - spectrum.omega_c) * state.time))
        .collect();
    let mut out = state.amplitudes.clone();
    for i in 1..=n {
        out[i] = (1..=n).map(|k| modes[k - 1] * spectrum.l(k, i)).sum();
    }
    Ok(AmplitudeState {
        picture: Picture::Site,
        amplitudes: out,
        time: state.time,
    })
}

fn check(state: &AmplitudeState, spectrum: &ChannelSpectrum, expected: Picture) -> Result<()> {
    if state.picture != expected {
        return Err(Error::PictureMismatch {
            expected,
            found: state.picture,
        });
    }
    if state.amplitudes.len() != spectrum.n_sites + 2 {
        return Err(Error::DimensionMismatch {
            expected: spectrum.n_sites + 2,
            found: state.amplitudes.len(),
        });
    }
    Ok(())
}
