//! Physical parameters, drive description and amplitude containers.
//!
//! Rates are measured in units of the sender coupling `g_s` and times in
//! units of `1/g_s`, so the figure parameters can be entered directly.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Energies and couplings of sender, channel and receiver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// Number of channel sites `N`.
    pub n_sites: usize,
    pub omega_s: f64,
    pub omega_r: f64,
    pub omega_c: f64,
    /// Uniform nearest-neighbour hopping inside the channel.
    pub kappa: f64,
    pub g_s: f64,
    pub g_r: f64,
    /// Optional per-bond channel couplings (`N - 1` entries) replacing `kappa`.
    /// Only the site picture can integrate a non-uniform channel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel_couplings: Option<Vec<f64>>,
}

impl SystemParams {
    pub fn uniform(
        n_sites: usize,
        omega_s: f64,
        omega_r: f64,
        omega_c: f64,
        kappa: f64,
        g_s: f64,
        g_r: f64,
    ) -> Self {
        Self {
            n_sites,
            omega_s,
            omega_r,
            omega_c,
            kappa,
            g_s,
            g_r,
            channel_couplings: None,
        }
    }

    /// Chain with mirror-symmetric couplings `J_i = lambda * sqrt(i (M - i))`
    /// over all `M = N + 2` sites, scaled so that the terminal bonds equal
    /// `g_terminal`. Every site sits at `omega_c`; the receiver is detuned by
    /// `omega_rs`.
    pub fn perfect_transfer_chain(n_sites: usize, g_terminal: f64, omega_c: f64, omega_rs: f64) -> Self {
        let m = n_sites + 2;
        let lambda = g_terminal / ((m - 1) as f64).sqrt();
        let bond = |i: usize| lambda * ((i * (m - i)) as f64).sqrt();
        // bonds 2..=N connect channel sites
        let inner: Vec<f64> = (2..=n_sites).map(bond).collect();
        let kappa = inner.first().copied().unwrap_or(g_terminal);
        Self {
            n_sites,
            omega_s: omega_c,
            omega_r: omega_c + omega_rs,
            omega_c,
            kappa,
            g_s: bond(1),
            g_r: bond(m - 1),
            channel_couplings: Some(inner),
        }
    }

    /// Sender-receiver detuning `omega_r - omega_s`.
    pub fn omega_rs(&self) -> f64 {
        self.omega_r - self.omega_s
    }

    /// Coupling of channel bond `l` (between channel sites `l` and `l + 1`, 1-based).
    pub fn channel_bond(&self, l: usize) -> f64 {
        match &self.channel_couplings {
            Some(c) => c[l - 1],
            None => self.kappa,
        }
    }

    /// True when the channel has a single hopping rate (mode picture available).
    pub fn is_uniform(&self) -> bool {
        match &self.channel_couplings {
            None => true,
            Some(c) => c.iter().all(|&j| j == self.kappa),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 {
            return Err(invalid("n_sites", "must be at least 1"));
        }
        if !(self.kappa > 0.0) {
            return Err(invalid("kappa", format!("must be positive, got {}", self.kappa)));
        }
        if !(self.g_s >= 0.0) {
            return Err(invalid("g_s", format!("must be non-negative, got {}", self.g_s)));
        }
        if !(self.g_r >= 0.0) {
            return Err(invalid("g_r", format!("must be non-negative, got {}", self.g_r)));
        }
        for (name, v) in [
            ("omega_s", self.omega_s),
            ("omega_r", self.omega_r),
            ("omega_c", self.omega_c),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        if let Some(c) = &self.channel_couplings {
            if c.len() != self.n_sites - 1 {
                return Err(invalid(
                    "channel_couplings",
                    format!("expected {} bonds, got {}", self.n_sites - 1, c.len()),
                ));
            }
            if c.iter().any(|j| !j.is_finite()) {
                return Err(invalid("channel_couplings", "must be finite"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseKind {
    Gaussian,
    Constant,
}

/// Envelope `f(t)` of the drive, peaking at 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseShape {
    pub kind: PulseKind,
    pub t0: f64,
    pub tau: f64,
}

impl PulseShape {
    pub fn gaussian(t0: f64, tau: f64) -> Self {
        Self {
            kind: PulseKind::Gaussian,
            t0,
            tau,
        }
    }

    pub fn constant() -> Self {
        Self {
            kind: PulseKind::Constant,
            t0: 0.0,
            tau: 0.0,
        }
    }

    /// `f(t)`; the Gaussian is evaluated exactly everywhere, including far tails.
    pub fn envelope(&self, t: f64) -> f64 {
        match self.kind {
            PulseKind::Constant => 1.0,
            PulseKind::Gaussian => {
                let x = (t - self.t0) / self.tau;
                (-0.5 * x * x).exp()
            }
        }
    }

    /// `df/dt`.
    pub fn envelope_derivative(&self, t: f64) -> f64 {
        match self.kind {
            PulseKind::Constant => 0.0,
            PulseKind::Gaussian => -(t - self.t0) / (self.tau * self.tau) * self.envelope(t),
        }
    }

    /// End of the main pulse body, `t0 + 5 tau` (None for a constant drive).
    pub fn pulse_end(&self) -> Option<f64> {
        match self.kind {
            PulseKind::Constant => None,
            PulseKind::Gaussian => Some(self.t0 + 5.0 * self.tau),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == PulseKind::Gaussian {
            if !(self.tau > 0.0) {
                return Err(invalid("pulse.tau", format!("must be positive, got {}", self.tau)));
            }
            if !(self.t0 > 5.0 * self.tau) {
                return Err(invalid(
                    "pulse.t0",
                    format!("Gaussian pulse needs t0 > 5 tau (t0 = {}, tau = {})", self.t0, self.tau),
                ));
            }
        }
        Ok(())
    }
}

/// Envelope value at `t`.
pub fn pulse_envelope(pulse: &PulseShape, t: f64) -> f64 {
    pulse.envelope(t)
}

/// External field acting on the sender qubit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveParams {
    /// Peak dimensionless amplitude `V_d / (2 hbar omega)`.
    pub z0: f64,
    pub omega: f64,
    pub pulse: PulseShape,
    /// Targeted photon number of the resonance (0 = undriven).
    pub nu: u32,
}

impl DriveParams {
    pub fn undriven() -> Self {
        Self {
            z0: 0.0,
            omega: 1.0,
            pulse: PulseShape::constant(),
            nu: 0,
        }
    }

    /// Instantaneous amplitude `z(t) = z0 f(t)`.
    pub fn z(&self, t: f64) -> f64 {
        self.z0 * self.pulse.envelope(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z0 >= 0.0) {
            return Err(invalid("z0", format!("must be non-negative, got {}", self.z0)));
        }
        if self.z0 > 0.0 && !(self.omega > 0.0) {
            return Err(invalid("omega", format!("must be positive when driven, got {}", self.omega)));
        }
        self.pulse.validate()
    }
}

/// Ratio `|df/dt| / (omega |f|)`; the adiabatic phase is trustworthy while it
/// is much smaller than one. Returns infinity where `f` vanishes or the drive
/// frequency is not positive.
pub fn adiabaticity_margin(drive: &DriveParams, t: f64) -> f64 {
    let f = drive.pulse.envelope(t);
    if f == 0.0 || !(drive.omega > 0.0) {
        return f64::INFINITY;
    }
    drive.pulse.envelope_derivative(t).abs() / (drive.omega * f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Picture {
    /// Channel amplitudes are site amplitudes.
    Site,
    /// Channel amplitudes are eigenmode (magnon) amplitudes.
    Mode,
    /// Effective two-level system: sender and receiver only.
    TwoLevel,
}

/// Single-excitation amplitudes: sender, `N` channel entries, receiver.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeState {
    pub picture: Picture,
    pub amplitudes: Vec<C64>,
    pub time: f64,
}

impl AmplitudeState {
    /// Excitation on the sender at `t = 0`.
    pub fn sender_excited(n_sites: usize, picture: Picture) -> Self {
        let len = match picture {
            Picture::TwoLevel => 2,
            _ => n_sites + 2,
        };
        let mut amplitudes = vec![C64::new(0.0, 0.0); len];
        amplitudes[0] = C64::new(1.0, 0.0);
        Self {
            picture,
            amplitudes,
            time: 0.0,
        }
    }

    pub fn sender(&self) -> C64 {
        self.amplitudes[0]
    }

    pub fn receiver(&self) -> C64 {
        self.amplitudes[self.amplitudes.len() - 1]
    }

    pub fn channel(&self) -> &[C64] {
        &self.amplitudes[1..self.amplitudes.len() - 1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Population left outside the terminal qubits.
    pub fn channel_population(&self) -> f64 {
        1.0 - self.sender().norm_sqr() - self.receiver().norm_sqr()
    }
}

/// Sender input `alpha |0> + beta |1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputState {
    pub alpha: C64,
    pub beta: C64,
}

impl InputState {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(invalid("input_state", format!("|alpha|^2 + |beta|^2 = {norm}, expected 1")));
        }
        Ok(Self { alpha, beta })
    }

    /// Bloch-sphere parametrisation `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        Self {
            alpha: C64::new((0.5 * theta).cos(), 0.0),
            beta: C64::from_polar((0.5 * theta).sin(), phi),
        }
    }

    /// Reduced density matrix of the receiver after the excitation amplitude
    /// `a_r` has arrived, with the known phase of `a_r` undone locally.
    pub fn receiver_density(&self, a_r: C64) -> [[C64; 2]; 2] {
        let r = a_r.norm();
        let pb = self.beta.norm_sqr();
        let coh = self.alpha * self.beta.conj() * r;
        [
            [C64::new(1.0 - pb * r * r, 0.0), coh],
            [coh.conj(), C64::new(pb * r * r, 0.0)],
        ]
    }

    /// Overlap of the reconstructed receiver state with this input.
    pub fn transfer_fidelity(&self, a_r: C64) -> f64 {
        let rho = self.receiver_density(a_r);
        let v = [self.alpha, self.beta];
        let mut f = C64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                f += v[i].conj() * rho[i][j] * v[j];
            }
        }
        f.re
    }
}

/// Time-ordered samples of an evolution together with the inputs that produced it.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<AmplitudeState>,
    pub system: SystemParams,
    pub drive: DriveParams,
}

impl Trajectory {
    pub fn new(system: SystemParams, drive: DriveParams) -> Self {
        Self {
            times: Vec::new(),
            states: Vec::new(),
            system,
            drive,
        }
    }

    /// Appends a sample; times must increase strictly.
    pub fn push(&mut self, state: AmplitudeState) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if !(state.time > last) {
                return Err(invalid(
                    "trajectory",
                    format!("sample time {} does not follow {}", state.time, last),
                ));
            }
        }
        self.times.push(state.time);
        self.states.push(state);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<&AmplitudeState> {
        self.states.last()
    }

    /// Sample closest to `t`.
    pub fn state_near(&self, t: f64) -> Option<&AmplitudeState> {
        if self.times.is_empty() {
            return None;
        }
        let idx = self.times.partition_point(|&s| s < t);
        let best = if idx == 0 {
            0
        } else if idx == self.times.len() {
            idx - 1
        } else if (self.times[idx] - t).abs() < (t - self.times[idx - 1]).abs() {
            idx
        } else {
            idx - 1
        };
        self.states.get(best)
    }

    /// Largest deviation of the norm from one over all samples.
    pub fn max_norm_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}
