//! Figure presets.
//!
//! Pulses are read out at `T = t0 + 5 tau` and the run continues to
//! `t0 + 8 tau` so that the post-pulse oscillations can be measured.

use std::f64::consts::PI;

use super::{Quantity, Scenario, Target};
use crate::dynamics::IntegratorConfig;
use crate::error::{Error, Result};
use crate::types::{DriveParams, PulseShape, SystemParams};

/// Names of every preset, in display order.
pub const PRESET_NAMES: [&str; 9] = [
    "fig4a", "fig5a", "fig5b", "fig5c", "fig6a", "fig6b", "fig6c", "fig7c", "fig7d",
];

/// One-line description per preset.
pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig4a" => "undriven engineered chain, N = 3, resonant receiver (baseline sweep base)",
        "fig5a" => "N = 2, continuous single-photon drive",
        "fig5b" => "N = 2, Gaussian pulse of area pi/4 (entangling)",
        "fig5c" => "N = 2, Gaussian pulse of area pi/2 (transfer)",
        "fig6a" => "N = 3, continuous single-photon drive",
        "fig6b" => "N = 3, Gaussian pulse of area pi/4 (entangling)",
        "fig6c" => "N = 3, Gaussian pulse of area pi/2 (transfer)",
        "fig7c" => "N = 2, two-photon resonance, area pi/2",
        "fig7d" => "N = 3, two-photon resonance, area pi/2",
        _ => return None,
    })
}

fn chain2() -> SystemParams {
    SystemParams::uniform(2, 0.0, 2.0, 22.0, 6.0, 1.0, 1.0)
}

fn chain3() -> SystemParams {
    SystemParams::uniform(3, 0.0, 2.0, 32.0, 14.0, 1.0, 1.0)
}

fn one_photon(pulse: PulseShape) -> DriveParams {
    DriveParams {
        z0: 2.0,
        omega: 2.0,
        pulse,
        nu: 1,
    }
}

// two photons of energy 1 bridge the same sender-receiver gap of 2
fn two_photon(pulse: PulseShape) -> DriveParams {
    DriveParams {
        z0: 3.0,
        omega: 1.0,
        pulse,
        nu: 2,
    }
}

fn norm_target() -> Target {
    Target::at_most(Quantity::NormDrift, 1e-9)
}

fn build(name: &str, params: SystemParams, drive: DriveParams, t_span: (f64, f64), readout: f64, targets: Vec<Target>) -> Scenario {
    let integrator = IntegratorConfig::for_system(&params, &drive);
    Scenario {
        name: name.to_string(),
        params,
        drive,
        integrator,
        t_span,
        readout_time: readout,
        targets,
    }
}

fn pulsed(name: &str, params: SystemParams, drive: DriveParams, targets: Vec<Target>) -> Scenario {
    let p = drive.pulse;
    build(name, params, drive, (0.0, p.t0 + 8.0 * p.tau), p.t0 + 5.0 * p.tau, targets)
}

fn entangling_targets() -> Vec<Target> {
    vec![
        Target::between(Quantity::PopSender, 0.45, 0.55),
        Target::between(Quantity::PopReceiver, 0.45, 0.55),
        Target::at_least(Quantity::Concurrence, 0.9),
        norm_target(),
    ]
}

/// Preset by name.
pub fn preset(name: &str) -> Result<Scenario> {
    let s = match name {
        "fig4a" => {
            let params = SystemParams::perfect_transfer_chain(3, 1.0, 0.0, 0.0);
            // mirror-symmetric chain over 5 sites: transfer time pi / (2 lambda), lambda = 1/2
            let t_transfer = PI;
            let mut s = build(
                name,
                params,
                DriveParams::undriven(),
                (0.0, 20.0),
                t_transfer,
                vec![Target::at_least(Quantity::FidelityMin, 0.99), norm_target()],
            );
            s.integrator.sample_dt = 0.01;
            s
        }
        "fig5a" => build(
            name,
            chain2(),
            one_photon(PulseShape::constant()),
            (0.0, 700.0),
            700.0,
            vec![Target::at_most(Quantity::MaxPopReceiver, 0.999), norm_target()],
        ),
        "fig5b" => pulsed(name, chain2(), one_photon(PulseShape::gaussian(300.0, 25.45)), entangling_targets()),
        "fig5c" => pulsed(
            name,
            chain2(),
            one_photon(PulseShape::gaussian(300.0, 50.90)),
            vec![
                Target::between(Quantity::PopReceiver, 0.87, 0.93),
                Target::at_most(Quantity::FMinOscillationRatio, 0.1),
                norm_target(),
            ],
        ),
        "fig6a" => build(
            name,
            chain3(),
            one_photon(PulseShape::constant()),
            (0.0, 900.0),
            900.0,
            vec![Target::at_most(Quantity::MaxPopReceiver, 0.999), norm_target()],
        ),
        "fig6b" => pulsed(name, chain3(), one_photon(PulseShape::gaussian(350.0, 32.66)), entangling_targets()),
        "fig6c" => pulsed(
            name,
            chain3(),
            one_photon(PulseShape::gaussian(350.0, 65.11)),
            vec![
                Target::at_least(Quantity::PopReceiver, 0.85),
                Target::at_most(Quantity::MaxChannelPop, 0.1),
                norm_target(),
            ],
        ),
        "fig7c" => pulsed(
            name,
            chain2(),
            two_photon(PulseShape::gaussian(500.0, 82.85)),
            vec![Target::between(Quantity::FidelityMin, 0.75, 0.93), norm_target()],
        ),
        "fig7d" => pulsed(
            name,
            chain3(),
            two_photon(PulseShape::gaussian(600.0, 106.2)),
            vec![Target::between(Quantity::FidelityMin, 0.72, 0.9), norm_target()],
        ),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    Ok(s)
}

/// Every preset, in display order.
pub fn all_presets() -> Vec<Scenario> {
    PRESET_NAMES.iter().map(|n| preset(n).expect("preset table is consistent")).collect()
}
