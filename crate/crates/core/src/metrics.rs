//! Transfer and entanglement figures of merit.
//!
//! All quantities depend on the moduli `|A_s|`, `|A_r|` only, so they are
//! blind to any phase the receiver picks up.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::Trajectory;

/// Fidelity averaged over all pure sender inputs: `1/2 + |A_r|^2/6 + |A_r|/3`.
pub fn average_fidelity(a_r: C64) -> f64 {
    let m = a_r.norm();
    0.5 + m * m / 6.0 + m / 3.0
}

/// Worst-case fidelity over sender inputs: `|A_r|^2`.
pub fn minimum_fidelity(a_r: C64) -> f64 {
    a_r.norm_sqr()
}

/// Concurrence of the sender-receiver pair: `2 |A_s| |A_r|`.
pub fn concurrence(a_s: C64, a_r: C64) -> f64 {
    2.0 * a_s.norm() * a_r.norm()
}

/// Sampled figures of merit along a trajectory.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricSeries {
    pub times: Vec<f64>,
    pub pop_sender: Vec<f64>,
    pub pop_receiver: Vec<f64>,
    pub f_avg: Vec<f64>,
    pub f_min: Vec<f64>,
    pub concurrence: Vec<f64>,
    pub channel_pop: Vec<f64>,
}

impl MetricSeries {
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let mut m = Self::default();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let (a_s, a_r) = (s.sender(), s.receiver());
            m.times.push(*t);
            m.pop_sender.push(a_s.norm_sqr());
            m.pop_receiver.push(a_r.norm_sqr());
            m.f_avg.push(average_fidelity(a_r));
            m.f_min.push(minimum_fidelity(a_r));
            m.concurrence.push(concurrence(a_s, a_r));
            m.channel_pop.push(1.0 - a_s.norm_sqr() - a_r.norm_sqr());
        }
        m
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the sample closest to `t`.
    pub fn index_near(&self, t: f64) -> Option<usize> {
        let i = self.times.partition_point(|&x| x < t);
        match (i.checked_sub(1), self.times.get(i)) {
            (Some(j), Some(&after)) if t - self.times[j] <= after - t => Some(j),
            (_, Some(_)) => Some(i),
            (Some(j), None) => Some(j),
            (None, None) => None,
        }
    }
}

/// Mean and half peak-to-peak of one series over a window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Oscillation {
    pub mean: f64,
    pub amplitude: f64,
    pub min: f64,
    pub max: f64,
}

impl Oscillation {
    fn of(values: &[f64]) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            mean: values.iter().sum::<f64>() / values.len() as f64,
            amplitude: 0.5 * (max - min),
            min,
            max,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PostPulseStats {
    pub window: (f64, f64),
    pub samples: usize,
    pub pop_receiver: Oscillation,
    pub f_avg: Oscillation,
    pub f_min: Oscillation,
    pub concurrence: Oscillation,
    pub channel_pop: Oscillation,
}

/// Statistics of every metric over the samples with `start <= t <= end`.
pub fn post_pulse_stats(series: &MetricSeries, window: (f64, f64)) -> Result<PostPulseStats> {
    let (start, end) = window;
    let lo = series.times.partition_point(|&t| t < start);
    let hi = series.times.partition_point(|&t| t <= end);
    if !(start <= end) || lo >= hi {
        return Err(Error::EmptyWindow { start, end });
    }
    let r = lo..hi;
    Ok(PostPulseStats {
        window,
        samples: hi - lo,
        pop_receiver: Oscillation::of(&series.pop_receiver[r.clone()]),
        f_avg: Oscillation::of(&series.f_avg[r.clone()]),
        f_min: Oscillation::of(&series.f_min[r.clone()]),
        concurrence: Oscillation::of(&series.concurrence[r.clone()]),
        channel_pop: Oscillation::of(&series.channel_pop[r]),
    })
}

/// Convenience wrapper computing the series first.
pub fn trajectory_post_pulse_stats(traj: &Trajectory, window: (f64, f64)) -> Result<PostPulseStats> {
    post_pulse_stats(&MetricSeries::from_trajectory(traj), window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{AmplitudeState, DriveParams, Picture, SystemParams};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn fidelity_examples() {
        assert_eq!(average_fidelity(C64::new(1.0, 0.0)), 1.0);
        assert_eq!(average_fidelity(C64::new(0.0, 0.0)), 0.5);
        let a = C64::new(0.9f64.sqrt(), 0.0);
        assert_abs_diff_eq!(average_fidelity(a), 0.5 + 0.15 + 0.9f64.sqrt() / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(average_fidelity(a), 0.9662, epsilon = 1e-4);
        assert_eq!(minimum_fidelity(C64::new(0.0, 1.0)), 1.0);
        assert_abs_diff_eq!(minimum_fidelity(C64::new((2.0f64 / 3.0).sqrt(), 0.0)), 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn concurrence_examples() {
        let h = C64::new(0.5f64.sqrt(), 0.0);
        assert_abs_diff_eq!(concurrence(h, h * C64::i()), 1.0, epsilon = 1e-15);
        assert_eq!(concurrence(C64::new(1.0, 0.0), C64::new(0.0, 0.0)), 0.0);
        let a = C64::new(0.45f64.sqrt(), 0.0);
        assert_abs_diff_eq!(concurrence(a, a), 0.9, epsilon = 1e-15);
    }

    fn constant_trajectory(n: usize) -> Trajectory {
        let mut tr = Trajectory::new(SystemParams::uniform(2, 0.0, 2.0, 22.0, 6.0, 1.0, 1.0), DriveParams::undriven());
        for i in 0..n {
            let mut s = AmplitudeState::sender_excited(2, Picture::Site);
            s.time = i as f64;
            s.amplitudes[0] = C64::new(0.6, 0.0);
            s.amplitudes[3] = C64::new(0.0, 0.8);
            tr.push(s).unwrap();
        }
        tr
    }

    #[test]
    fn constant_series_has_no_oscillation() {
        let stats = trajectory_post_pulse_stats(&constant_trajectory(10), (2.0, 7.0)).unwrap();
        assert_eq!(stats.samples, 6);
        assert_eq!(stats.f_min.amplitude, 0.0);
        assert_abs_diff_eq!(stats.f_min.mean, 0.64, epsilon = 1e-15);
        assert_abs_diff_eq!(stats.concurrence.mean, 0.96, epsilon = 1e-15);
    }

    #[test]
    fn empty_window_is_an_error() {
        let m = MetricSeries::from_trajectory(&constant_trajectory(5));
        assert!(matches!(post_pulse_stats(&m, (10.0, 12.0)), Err(Error::EmptyWindow { .. })));
        assert!(post_pulse_stats(&m, (3.0, 1.0)).is_err());
        assert!(post_pulse_stats(&m, (1.5, 1.7)).is_err());
    }

    #[test]
    fn nearest_index() {
        let m = MetricSeries::from_trajectory(&constant_trajectory(5));
        assert_eq!(m.index_near(-3.0), Some(0));
        assert_eq!(m.index_near(2.4), Some(2));
        assert_eq!(m.index_near(2.6), Some(3));
        assert_eq!(m.index_near(99.0), Some(4));
        assert_eq!(MetricSeries::default().index_near(1.0), None);
    }

    fn amplitude_pair() -> impl Strategy<Value = (C64, C64)> {
        (0.0..1.0f64, 0.0..1.0f64, -3.2..3.2f64, -3.2..3.2f64).prop_map(|(r, share, ps, pr)| {
            // |A_s|^2 + |A_r|^2 = r <= 1
            let s = (r * share).sqrt();
            let q = (r * (1.0 - share)).sqrt();
            (C64::from_polar(s, ps), C64::from_polar(q, pr))
        })
    }

    proptest! {
        #[test]
        fn global_phase_invariance((a_s, a_r) in amplitude_pair(), phi in -10.0..10.0f64) {
            let g = C64::cis(phi);
            prop_assert!((average_fidelity(a_r * g) - average_fidelity(a_r)).abs() < 1e-14);
            prop_assert!((minimum_fidelity(a_r * g) - minimum_fidelity(a_r)).abs() < 1e-14);
            prop_assert!((concurrence(a_s * g, a_r * g) - concurrence(a_s, a_r)).abs() < 1e-14);
        }

        #[test]
        fn average_fidelity_from_minimum((_a_s, a_r) in amplitude_pair()) {
            let f = minimum_fidelity(a_r);
            let expected = 0.5 + f / 6.0 + f.sqrt() / 3.0;
            prop_assert!((average_fidelity(a_r) - expected).abs() < 1e-14);
            prop_assert!(f <= average_fidelity(a_r) + 1e-15);
            prop_assert!((0.5..=1.0 + 1e-12).contains(&average_fidelity(a_r)));
        }

        #[test]
        fn concurrence_bounded((a_s, a_r) in amplitude_pair()) {
            let c = concurrence(a_s, a_r);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
        }
    }
}
