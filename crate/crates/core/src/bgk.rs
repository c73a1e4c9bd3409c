//! Travelling-wave (BGK) relations.
//!
//! A stationary nonlinear wave moving at phase velocity `v_ph` (in `u`
//! units, so the grating phase advances as `chi - v_ph tau`) can only be
//! sustained by one relative pump asymmetry,
//!
//! ```text
//! A/S = -2 delta X v / ((1 + delta^2) v^2 + X^2 + 4 g),
//! g = u0^2 Theta^2,  X = 1 + delta^2 - g,
//! ```
//!
//! with `Theta = N |theta|`. The order parameter of such a wave rotates as
//! `theta ~ exp(-i v_ph tau)`.

use serde::{Deserialize, Serialize};

use crate::fit::{linear_fit, unwrap_phase};
use crate::nbody::{classify_run, trailing_window, ClassifyThresholds, TimeSeries};
use crate::stability::{Confidence, Regime};
use crate::{Error, Result, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveState {
    /// Phase velocity in `u` units.
    pub v_ph: f64,
    pub theta_mag: f64,
    /// Collective order parameter `N |theta|`.
    pub big_theta: f64,
}

impl WaveState {
    pub fn new(v_ph: f64, theta_mag: f64, n_particles: usize) -> Self {
        WaveState { v_ph, theta_mag, big_theta: n_particles as f64 * theta_mag }
    }

    /// Whether `|u0| Theta <= sqrt(1 + delta^2)`, the range in which the wave
    /// relations are expected to describe stable states.
    pub fn within_bound(&self, params: &SystemParams) -> bool {
        params.u0.abs() * self.big_theta <= (1.0 + params.delta * params.delta).sqrt()
    }
}

fn coefficients(big_theta: f64, params: &SystemParams) -> (f64, f64, f64) {
    let d2 = 1.0 + params.delta * params.delta;
    let g = (params.u0 * big_theta).powi(2);
    (d2, g, d2 - g)
}

/// Relative pump asymmetry `A/S` that sustains `wave`.
pub fn asymmetry_for_wave(wave: &WaveState, params: &SystemParams) -> f64 {
    let (d2, g, x) = coefficients(wave.big_theta, params);
    let v = wave.v_ph;
    -2.0 * params.delta * x * v / (d2 * v * v + x * x + 4.0 * g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseVelocityRoot {
    pub v_ph: f64,
    /// The wave runs opposite to the stronger pump.
    pub against_stronger_pump: bool,
    /// `|u0| Theta` lies within the stable-wave bound.
    pub within_bound: bool,
}

/// Phase velocities compatible with relative asymmetry `aos` at collective
/// order `big_theta`. Returns zero, one or two roots in increasing order of
/// `|v_ph|`; an empty result means no travelling wave exists there.
pub fn phase_velocity_solutions(aos: f64, big_theta: f64, params: &SystemParams) -> Vec<PhaseVelocityRoot> {
    let (d2, g, x) = coefficients(big_theta, params);
    let within_bound = params.u0.abs() * big_theta <= d2.sqrt();
    let root = |v: f64| PhaseVelocityRoot { v_ph: v, against_stronger_pump: v * aos < 0.0, within_bound };
    if !aos.is_finite() || aos.abs() > 1.0 {
        return Vec::new();
    }
    if aos == 0.0 {
        return vec![root(0.0)];
    }
    // a d2 v^2 + 2 delta X v + a (X^2 + 4 g) = 0
    let qa = aos * d2;
    let qb = 2.0 * params.delta * x;
    let qc = aos * (x * x + 4.0 * g);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Vec::new();
    }
    // Stable form: both roots share the sign of -qb / qa.
    let q = -0.5 * (qb + qb.signum() * disc.sqrt());
    if q == 0.0 {
        return Vec::new();
    }
    let (r1, r2) = (qc / q, q / qa);
    let (lo, hi) = if r1.abs() <= r2.abs() { (r1, r2) } else { (r2, r1) };
    if disc == 0.0 {
        vec![root(lo)]
    } else {
        vec![root(lo), root(hi)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveDirection {
    WithStrongerPump,
    Against,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub direction: WaveDirection,
    pub confidence: Confidence,
}

/// Direction of travel of a wave with collective order `big_theta` relative
/// to the stronger pump. Defined for red detuning only.
pub fn wave_direction(params: &SystemParams, big_theta: f64) -> DirectionReport {
    let (_, _, x) = coefficients(big_theta, params);
    let direction = if !(params.delta < 0.0) || x == 0.0 {
        WaveDirection::Indeterminate
    } else if x > 0.0 {
        WaveDirection::WithStrongerPump
    } else {
        WaveDirection::Against
    };
    // Reversed waves need |u0| Theta beyond the stable-wave bound.
    let confidence = if direction == WaveDirection::Against { Confidence::Low } else { Confidence::High };
    DirectionReport { direction, confidence }
}

/// Comparison of a simulated ordered state with the travelling-wave relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveValidation {
    /// Phase velocity from the rotation of `arg theta` over the window.
    pub v_ph: f64,
    pub v_ph_first_half: f64,
    pub v_ph_second_half: f64,
    /// Window mean of the centre-of-mass velocity. Untrapped particles keep
    /// it below `v_ph` in a warm gas.
    pub v_cm_mean: f64,
    pub theta_mag: f64,
    pub big_theta: f64,
    pub predicted_aos: f64,
    pub actual_aos: f64,
    pub residual: f64,
    /// The rotation rates of the two window halves agree within 10%.
    pub settled: bool,
    pub within_bound: bool,
}

fn rotation_rate(samples: &[crate::nbody::Sample]) -> f64 {
    let tau: Vec<f64> = samples.iter().map(|s| s.tau).collect();
    let phase = unwrap_phase(&samples.iter().map(|s| s.theta.arg()).collect::<Vec<_>>());
    -linear_fit(&tau, &phase).0
}

/// Checks a run classified as an ordered wave against [`asymmetry_for_wave`].
pub fn validate_wave(
    series: &TimeSeries,
    params: &SystemParams,
    thresholds: &ClassifyThresholds,
) -> Result<WaveValidation> {
    let class = classify_run(series, params, thresholds)?;
    if class.regime != Regime::BgkOrdered {
        return Err(Error::domain(format!(
            "trailing window is not a stationary ordered wave (classified {}, acceleration {:.3e})",
            class.regime, class.acceleration
        )));
    }
    let tail = trailing_window(series, thresholds.tail_fraction)?;
    let half = tail.len() / 2;
    let v_ph = rotation_rate(tail);
    let v1 = rotation_rate(&tail[..=half]);
    let v2 = rotation_rate(&tail[half..]);
    let theta_mag = class.mean_abs_theta;
    let wave = WaveState::new(v_ph, theta_mag, params.n_particles);
    let predicted_aos = asymmetry_for_wave(&wave, params);
    let actual_aos = params.relative_asymmetry();
    // Rates below 0.1 are compared on an absolute scale.
    let settled = (v1 - v2).abs() <= 0.1 * v_ph.abs().max(0.1);
    Ok(WaveValidation {
        v_ph,
        v_ph_first_half: v1,
        v_ph_second_half: v2,
        v_cm_mean: tail.iter().map(|s| s.v_cm).sum::<f64>() / tail.len() as f64,
        theta_mag,
        big_theta: wave.big_theta,
        predicted_aos,
        actual_aos,
        residual: (actual_aos - predicted_aos).abs(),
        settled,
        within_bound: wave.within_bound(params),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nbody::Sample;
    use crate::stability::carl_bound;
    use num_complex::Complex64;

    fn params() -> SystemParams {
        SystemParams::reference(10_000)
    }

    #[test]
    fn hand_evaluated_example() {
        // kv_ph = 0.5 in cavity units is v_ph = 1 in u units.
        let w = WaveState::new(1.0, 0.0, 10_000);
        assert!((asymmetry_for_wave(&w, &params()) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn standing_wave_needs_balanced_pumps() {
        let w = WaveState::new(0.0, 0.3, 10_000);
        assert_eq!(asymmetry_for_wave(&w, &params()), 0.0);
        let roots = phase_velocity_solutions(0.0, 3000.0, &params());
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].v_ph, 0.0);
    }

    #[test]
    fn red_detuned_wave_follows_stronger_pump() {
        let w = WaveState::new(0.4, 0.01, 10_000);
        assert!(asymmetry_for_wave(&w, &params()) > 0.0);
    }

    #[test]
    fn relation_is_odd_in_velocity() {
        let p = params();
        for &(v, th) in &[(0.3, 0.1), (2.0, 0.9), (7.0, 0.5)] {
            let a = asymmetry_for_wave(&WaveState::new(v, th, 10_000), &p);
            let b = asymmetry_for_wave(&WaveState::new(-v, th, 10_000), &p);
            assert_eq!(a, -b);
        }
    }

    #[test]
    fn supremum_over_allowed_waves_is_the_bound() {
        let mut p = params();
        for delta in [-1.0, -0.3, -2.5, 0.7] {
            p.delta = delta;
            let bound = carl_bound(&p);
            let cap = 0.99 * (1.0 + delta * delta).sqrt();
            let mut sup: f64 = 0.0;
            for i in 0..200 {
                let big_theta = cap * i as f64 / 199.0 / p.u0.abs();
                for k in 0..=4000 {
                    let v = 1e-3 * 10f64.powf(k as f64 / 500.0);
                    let w = WaveState { v_ph: v, theta_mag: big_theta / p.n_particles as f64, big_theta };
                    let a = asymmetry_for_wave(&w, &p).abs();
                    assert!(a <= bound * (1.0 + 1e-12));
                    sup = sup.max(a);
                }
            }
            assert!((sup - bound).abs() < 1e-3, "delta {delta}: sup {sup} vs {bound}");
        }
    }

    #[test]
    fn inversion_round_trips() {
        let p = params();
        let cases: [(f64, &[f64]); 4] = [
            (0.3, &[0.0, 1000.0, 5000.0, 9000.0]),
            (-0.3, &[0.0, 1000.0, 5000.0, 9000.0]),
            (0.05, &[0.0, 5000.0, 13000.0]),
            (0.69, &[0.0, 1000.0]),
        ];
        for (a, thetas) in cases {
            for &big_theta in thetas {
                let roots = phase_velocity_solutions(a, big_theta, &p);
                assert_eq!(roots.len(), 2, "a {a} Theta {big_theta}");
                for r in roots {
                    assert!(!r.against_stronger_pump && r.within_bound);
                    let w = WaveState { v_ph: r.v_ph, theta_mag: 0.0, big_theta };
                    assert!((asymmetry_for_wave(&w, &p) - a).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn no_wave_beyond_the_bound() {
        let p = params();
        let cap = 0.99 * 2f64.sqrt() / p.u0.abs();
        for a in [0.7072, 0.8, -0.95, 1.0] {
            for i in 0..200 {
                assert!(phase_velocity_solutions(a, cap * i as f64 / 199.0, &p).is_empty());
            }
        }
    }

    #[test]
    fn large_order_reverses_direction() {
        let mut p = params();
        p.u0 = -2.0 / p.n_particles as f64;
        let big = 0.9 * p.n_particles as f64;
        let r = phase_velocity_solutions(-0.2, big, &p);
        assert!(!r.is_empty() && r.iter().all(|x| x.against_stronger_pump && !x.within_bound));
        let d = wave_direction(&p, big);
        assert_eq!(d.direction, WaveDirection::Against);
        assert_eq!(d.confidence, Confidence::Low);
    }

    #[test]
    fn direction_rule_scope() {
        let p = params();
        assert_eq!(wave_direction(&p, 5000.0).direction, WaveDirection::WithStrongerPump);
        let mut q = p;
        q.delta = 1.0;
        assert_eq!(wave_direction(&q, 5000.0).direction, WaveDirection::Indeterminate);
    }

    fn exact_wave(aos: f64, theta_mag: f64) -> (TimeSeries, SystemParams) {
        let p = params().with_pump(1e7, aos * 1e7).unwrap();
        let big_theta = theta_mag * p.n_particles as f64;
        let v = phase_velocity_solutions(aos, big_theta, &p)[0].v_ph;
        let samples = (0..=400)
            .map(|k| {
                let tau = 0.1 * k as f64;
                Sample {
                    tau,
                    theta: Complex64::from_polar(theta_mag, 0.4 - v * tau),
                    v_cm: 0.5 * v,
                    intensities: [0.0; 4],
                    kinetic_energy: 0.0,
                    field_momentum: 0.0,
                }
            })
            .collect();
        (TimeSeries { samples }, p)
    }

    #[test]
    fn exact_wave_validates() {
        let (series, p) = exact_wave(0.3, 0.35);
        let r = validate_wave(&series, &p, &ClassifyThresholds::default()).unwrap();
        assert!(r.residual < 1e-10, "{r:?}");
        assert!(r.settled && r.within_bound);
    }

    #[test]
    fn accelerating_run_is_rejected() {
        let (mut series, p) = exact_wave(0.3, 0.35);
        for s in series.samples.iter_mut() {
            s.v_cm += 0.05 * s.tau;
        }
        assert!(validate_wave(&series, &p, &ClassifyThresholds::default()).is_err());
    }
}
