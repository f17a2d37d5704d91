//! Reproducible experiments: figure presets, the undriven detuning sweep,
//! configuration files and result output.

mod config;
mod output;
mod presets;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{load_config, parse_config, Config};
pub use output::{write_results, write_sweep, OutputFiles};
pub use presets::{all_presets, describe, preset, PRESET_NAMES};

use crate::dynamics::{integrate_with_samples, IntegratorConfig};
use crate::error::{invalid, Error, Result};
use crate::metrics::{minimum_fidelity, post_pulse_stats, MetricSeries, PostPulseStats};
use crate::spectrum::build_spectrum;
use crate::tls::{check_validity, pulse_area, TlsModel, ValidityReport};
use crate::types::{DriveParams, SystemParams, Trajectory};

/// A fully specified run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub params: SystemParams,
    pub drive: DriveParams,
    pub integrator: IntegratorConfig,
    pub t_span: (f64, f64),
    /// Time `T` at which the scalar results are read off.
    pub readout_time: f64,
    #[serde(default)]
    pub targets: Vec<Target>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.drive.validate()?;
        self.integrator.validate()?;
        let (a, b) = self.t_span;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidTimeSpan { start: a, end: b });
        }
        if !(self.readout_time > a && self.readout_time <= b) {
            return Err(invalid(
                "readout_time",
                format!("{} lies outside the time span ({a}, {b}]", self.readout_time),
            ));
        }
        for t in &self.targets {
            t.validate()?;
        }
        Ok(())
    }
}

/// Scalar read off a finished run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `|A_s(T)|^2`.
    PopSender,
    /// `|A_r(T)|^2`.
    PopReceiver,
    FidelityAvg,
    FidelityMin,
    Concurrence,
    /// Largest channel population over the run.
    MaxChannelPop,
    /// Largest receiver population over the run.
    MaxPopReceiver,
    /// Post-pulse oscillation amplitude of `F_min` over its mean.
    FMinOscillationRatio,
    /// Post-pulse mean of the concurrence.
    ConcurrenceMean,
    /// Largest `| |psi|^2 - 1 |` over the run.
    NormDrift,
}

/// Expected range for one quantity; either bound may be omitted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    pub quantity: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

impl Target {
    pub fn at_least(quantity: Quantity, min: f64) -> Self {
        Self {
            quantity,
            min: Some(min),
            max: None,
        }
    }

    pub fn at_most(quantity: Quantity, max: f64) -> Self {
        Self {
            quantity,
            min: None,
            max: Some(max),
        }
    }

    pub fn between(quantity: Quantity, min: f64, max: f64) -> Self {
        Self {
            quantity,
            min: Some(min),
            max: Some(max),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.min.is_none() && self.max.is_none() {
            return Err(invalid("targets", "a target needs `min`, `max` or both"));
        }
        Ok(())
    }

    pub fn check(&self, value: Option<f64>) -> TargetOutcome {
        let pass = value.is_some_and(|v| self.min.is_none_or(|m| v >= m) && self.max.is_none_or(|m| v <= m));
        TargetOutcome {
            target: *self,
            value,
            pass,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetOutcome {
    pub target: Target,
    /// `None` when the quantity is undefined for this run.
    pub value: Option<f64>,
    pub pass: bool,
}

/// Scalar results of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub name: String,
    pub readout_time: f64,
    pub pop_sender: f64,
    pub pop_receiver: f64,
    pub pop_channel: f64,
    pub fidelity_avg: f64,
    pub fidelity_min: f64,
    pub concurrence: f64,
    pub max_channel_pop: f64,
    pub max_pop_receiver: f64,
    pub norm_drift: f64,
    /// Effective pulse area at `T`, when the two-level description applies.
    pub pulse_area: Option<f64>,
    pub post_pulse: Option<PostPulseStats>,
    pub tls: Option<TlsModel>,
    pub validity: Option<ValidityReport>,
    pub targets: Vec<TargetOutcome>,
    pub targets_pass: bool,
}

impl Summary {
    pub fn value(&self, q: Quantity) -> Option<f64> {
        Some(match q {
            Quantity::PopSender => self.pop_sender,
            Quantity::PopReceiver => self.pop_receiver,
            Quantity::FidelityAvg => self.fidelity_avg,
            Quantity::FidelityMin => self.fidelity_min,
            Quantity::Concurrence => self.concurrence,
            Quantity::MaxChannelPop => self.max_channel_pop,
            Quantity::MaxPopReceiver => self.max_pop_receiver,
            Quantity::NormDrift => self.norm_drift,
            Quantity::FMinOscillationRatio => {
                let p = self.post_pulse?;
                p.f_min.amplitude / p.f_min.mean
            }
            Quantity::ConcurrenceMean => self.post_pulse?.concurrence.mean,
        })
    }
}

pub struct ScenarioResult {
    pub scenario: Scenario,
    pub trajectory: Trajectory,
    pub metrics: MetricSeries,
    pub summary: Summary,
}

/// Spectrum, validity check, integration, metrics and target evaluation.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioResult> {
    s.validate()?;
    let spectrum = build_spectrum(&s.params).ok();
    let driven = s.drive.z0 > 0.0;
    let (validity, tls, area) = match (&spectrum, driven) {
        (Some(sp), true) => (
            check_validity(&s.params, &s.drive, sp, s.readout_time).ok(),
            TlsModel::new(&s.params, sp, &s.drive).ok(),
            pulse_area(&s.params, sp, &s.drive, s.readout_time).ok().map(|a| a.angle),
        ),
        _ => (None, None, None),
    };

    let trajectory = integrate_with_samples(&s.params, &s.drive, &s.integrator, s.t_span, &[s.readout_time])?;
    let metrics = MetricSeries::from_trajectory(&trajectory);
    let post_pulse = s
        .drive
        .pulse
        .pulse_end()
        .filter(|_| driven)
        .and_then(|start| post_pulse_stats(&metrics, (start, s.t_span.1)).ok());

    let i = metrics.index_near(s.readout_time).expect("trajectory holds the readout sample");
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut summary = Summary {
        name: s.name.clone(),
        readout_time: metrics.times[i],
        pop_sender: metrics.pop_sender[i],
        pop_receiver: metrics.pop_receiver[i],
        pop_channel: metrics.channel_pop[i],
        fidelity_avg: metrics.f_avg[i],
        fidelity_min: metrics.f_min[i],
        concurrence: metrics.concurrence[i],
        max_channel_pop: max(&metrics.channel_pop),
        max_pop_receiver: max(&metrics.pop_receiver),
        norm_drift: trajectory.max_norm_drift(),
        pulse_area: area,
        post_pulse,
        tls,
        validity,
        targets: Vec::new(),
        targets_pass: true,
    };
    summary.targets = s.targets.iter().map(|t| t.check(summary.value(t.quantity))).collect();
    summary.targets_pass = summary.targets.iter().all(|o| o.pass);

    Ok(ScenarioResult {
        scenario: s.clone(),
        trajectory,
        metrics,
        summary,
    })
}

/// How a sweep point is reduced to a single fidelity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reducer {
    /// Best `F_min` reached inside the window.
    #[serde(rename = "max_over_time")]
    MaxOverTime,
    /// `F_min` at the readout time.
    #[serde(rename = "value_at_T", alias = "value_at_readout")]
    ValueAtReadout,
}

/// A family of runs differing in one parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: Scenario,
    /// `detuning` (receiver detuning from the sender) or a dotted path into
    /// the scenario such as `params.g_r` or `drive.z0`.
    pub axis: String,
    pub values: Vec<f64>,
    pub reducer: Reducer,
    /// Maximisation window; defaults to the base time span.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub fidelity_min: f64,
    /// Time at which `fidelity_min` is attained.
    pub time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: String,
    pub reducer: Reducer,
    pub window: (f64, f64),
    pub transfer_period: f64,
    pub points: Vec<SweepPoint>,
}

/// Scenario with `axis` set to `value`.
pub fn apply_axis(base: &Scenario, axis: &str, value: f64) -> Result<Scenario> {
    if axis == "detuning" || axis == "omega_rs" {
        let mut s = base.clone();
        s.params.omega_r = s.params.omega_s + value;
        return Ok(s);
    }
    let mut tree = serde_json::to_value(base)?;
    let mut node = &mut tree;
    for key in axis.split('.') {
        node = node
            .as_object_mut()
            .and_then(|o| o.get_mut(key))
            .ok_or_else(|| Error::UnknownAxis(axis.to_string()))?;
    }
    if !node.is_number() {
        return Err(Error::UnknownAxis(axis.to_string()));
    }
    *node = serde_json::Value::from(value);
    serde_json::from_value(tree).map_err(|e| Error::Config {
        path: axis.to_string(),
        message: e.to_string(),
    })
}

/// `pi / (smallest eigenvalue gap)` of the static single-excitation Hamiltonian.
pub fn transfer_period(params: &SystemParams) -> Result<f64> {
    params.validate()?;
    let n = params.n_sites + 2;
    let mut h = DMatrix::<f64>::zeros(n, n);
    h[(0, 0)] = params.omega_s;
    h[(n - 1, n - 1)] = params.omega_r;
    for i in 1..=params.n_sites {
        h[(i, i)] = params.omega_c;
    }
    let mut set = |i: usize, v: f64| {
        h[(i, i + 1)] = v;
        h[(i + 1, i)] = v;
    };
    set(0, params.g_s);
    set(n - 2, params.g_r);
    for l in 1..params.n_sites {
        set(l, params.channel_bond(l));
    }
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    let gap = ev.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    Ok(if gap > 0.0 { std::f64::consts::PI / gap } else { f64::INFINITY })
}

/// Undriven detuning sweep; points are computed in parallel and returned in input order.
pub fn run_baseline_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    if spec.values.is_empty() {
        return Err(Error::EmptySweep);
    }
    if spec.base.drive.z0 != 0.0 {
        return Err(invalid("base.drive.z0", "the baseline sweep expects an undriven chain"));
    }
    spec.base.validate()?;
    let window = spec.window.unwrap_or(spec.base.t_span);
    let period = transfer_period(&spec.base.params)?;
    if !(window.1 - window.0 >= period) {
        return Err(Error::WindowTooShort {
            window: window.1 - window.0,
            period,
        });
    }
    let points = spec
        .values
        .par_iter()
        .map(|&v| sweep_point(spec, window, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        axis: spec.axis.clone(),
        reducer: spec.reducer,
        window,
        transfer_period: period,
        points,
    })
}

fn sweep_point(spec: &SweepSpec, window: (f64, f64), value: f64) -> Result<SweepPoint> {
    let s = apply_axis(&spec.base, &spec.axis, value)?;
    let span = (s.t_span.0.min(window.0), s.t_span.1.max(window.1));
    let extra = [s.readout_time, window.0, window.1];
    let traj = integrate_with_samples(&s.params, &s.drive, &s.integrator, span, &extra)?;
    let (fidelity_min, time) = match spec.reducer {
        Reducer::MaxOverTime => traj
            .states
            .iter()
            .filter(|st| st.time >= window.0 && st.time <= window.1)
            .map(|st| (minimum_fidelity(st.receiver()), st.time))
            .fold((f64::NEG_INFINITY, window.0), |a, b| if b.0 > a.0 { b } else { a }),
        Reducer::ValueAtReadout => {
            let st = traj.state_near(s.readout_time).expect("readout is sampled");
            (minimum_fidelity(st.receiver()), st.time)
        }
    };
    Ok(SweepPoint {
        value,
        fidelity_min,
        time,
    })
}

/// The scheme-A detuning sweep over `values`, maximising over the preset span.
pub fn scheme_a_sweep(values: Vec<f64>) -> Result<SweepSpec> {
    Ok(SweepSpec {
        base: preset("fig4a")?,
        axis: "detuning".into(),
        values,
        reducer: Reducer::MaxOverTime,
        window: None,
    })
}
