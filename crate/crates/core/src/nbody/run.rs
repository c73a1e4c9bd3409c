use std::f64::consts::TAU;

use errorfunctions::RealErrorFunctions;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::{Rk4, Sample, SimulationState, TimeSeries};
use crate::model::{sample_maxwellian, FieldState, ParticleEnsemble, SimRng};
use crate::{Error, Result, SystemParams};

/// How particles are placed at `tau = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Loading {
    /// Regular positions `2 pi j / N` with uniform jitter of half-width
    /// `jitter * 2 pi / N`, and Maxwellian velocities drawn from the seed.
    Jittered { jitter: f64 },
    /// Deterministic lattice: position quantiles of `(1 + eps cos chi) / 2 pi`
    /// crossed with velocity quantiles of the Maxwellian.
    /// Needs `N` to factor as `n_chi * n_u` with both factors at least 64.
    Quiet { modulation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialCondition {
    /// Mean velocity of the loaded ensemble.
    pub mean_u: f64,
    pub loading: Loading,
}

impl Default for InitialCondition {
    fn default() -> Self {
        InitialCondition { mean_u: 0.0, loading: Loading::Jittered { jitter: 1e-3 } }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub dt: f64,
    pub t_end: f64,
    /// Interval between recorded samples; rounded to a whole number of steps.
    pub sample_every: f64,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings { dt: 1e-2, t_end: 10.0, sample_every: 1e-1 }
    }
}

impl RunSettings {
    fn validate(&self) -> Result<(usize, usize)> {
        let mut bad = Vec::new();
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            bad.push(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            bad.push(format!("t_end must be nonnegative, got {}", self.t_end));
        }
        if !(self.sample_every > 0.0) {
            bad.push(format!("sample_every must be positive, got {}", self.sample_every));
        }
        if !bad.is_empty() {
            return Err(Error::Domain(bad.join("; ")));
        }
        let steps = (self.t_end / self.dt).round() as usize;
        let stride = ((self.sample_every / self.dt).round() as usize).max(1);
        Ok((steps, stride))
    }
}

fn maxwellian_quantile(q: f64) -> f64 {
    // CDF of exp(-x^2)/sqrt(pi) is erfc(-x)/2.
    let (mut lo, mut hi) = (-30.0_f64, 30.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 0.5 * RealErrorFunctions::erfc(-mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn modulated_quantile(q: f64, eps: f64) -> f64 {
    // Solves chi + eps sin chi = 2 pi q.
    let target = TAU * q;
    let mut x = target;
    for _ in 0..50 {
        let f = x + eps * x.sin() - target;
        let step = f / (1.0 + eps * x.cos());
        x -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    x
}

fn quiet_factor(n: usize) -> Option<usize> {
    (64..=n / 64).find(|d| n.is_multiple_of(*d))
}

/// Builds the `tau = 0` state: homogeneous steady-state fields and the
/// requested particle loading.
pub fn initial_state(params: &SystemParams, init: &InitialCondition) -> Result<SimulationState> {
    params.validate()?;
    let n = params.n_particles;
    let (chi, u) = match init.loading {
        Loading::Jittered { jitter } => {
            if !(0.0..=0.5).contains(&jitter) {
                return Err(Error::domain(format!("jitter must lie in [0, 0.5], got {jitter}")));
            }
            let mut rng = SimRng::seed_from_u64(params.seed);
            let spacing = TAU / n as f64;
            let chi: Vec<f64> = (0..n)
                .map(|j| {
                    let r: f64 = rng.random_range(-1.0..=1.0);
                    spacing * j as f64 + jitter * spacing * r
                })
                .collect();
            let u = sample_maxwellian(params, n, init.mean_u, &mut rng)?;
            (chi, u)
        }
        Loading::Quiet { modulation } => {
            if !(modulation.abs() < 1.0) {
                return Err(Error::domain(format!("modulation must satisfy |eps| < 1, got {modulation}")));
            }
            let n_chi = quiet_factor(n).ok_or_else(|| {
                Error::domain(format!("quiet loading needs N = a * b with a, b >= 64; N = {n}"))
            })?;
            let n_u = n / n_chi;
            let xs: Vec<f64> = (0..n_chi)
                .map(|a| modulated_quantile((a as f64 + 0.5) / n_chi as f64, modulation))
                .collect();
            let us: Vec<f64> = (0..n_u)
                .map(|b| init.mean_u + params.u_t * maxwellian_quantile((b as f64 + 0.5) / n_u as f64))
                .collect();
            let mut chi = Vec::with_capacity(n);
            let mut u = Vec::with_capacity(n);
            for &v in &us {
                for &x in &xs {
                    chi.push(x);
                    u.push(v);
                }
            }
            (chi, u)
        }
    };
    Ok(SimulationState::new(0.0, FieldState::homogeneous(params), ParticleEnsemble::new(chi, u)?))
}

/// Integrates from `state` and returns the recorded series together with the
/// final state.
pub fn run_with_final(
    params: &SystemParams,
    mut state: SimulationState,
    settings: &RunSettings,
) -> Result<(TimeSeries, SimulationState)> {
    params.validate()?;
    let (steps, stride) = settings.validate()?;
    let mut stepper = Rk4::default();
    let mut series = TimeSeries::default();
    series.push(Sample::of(&state)?);
    let t0 = state.tau;
    for k in 1..=steps {
        stepper.step(&mut state, params, settings.dt)?;
        // Avoid accumulated round-off in the clock.
        state.tau = t0 + k as f64 * settings.dt;
        if k % stride == 0 || k == steps {
            series.push(Sample::of(&state)?);
        }
    }
    Ok((series, state))
}

/// Loads the initial condition and integrates to `settings.t_end`.
pub fn run(
    params: &SystemParams,
    init: &InitialCondition,
    settings: &RunSettings,
) -> Result<TimeSeries> {
    let state = initial_state(params, init)?;
    run_with_final(params, state, settings).map(|(s, _)| s)
}

/// Symmetric pumping with the ensemble launched at mean velocity `v_initial`;
/// the beam decelerates by cavity cooling.
pub fn slow_beam_preset(
    params: &SystemParams,
    v_initial: f64,
    settings: &RunSettings,
) -> Result<TimeSeries> {
    let a = params.asymmetry();
    if a.abs() > 1e-12 * params.s_total().max(1.0) {
        return Err(Error::domain(format!(
            "slow-beam preset needs symmetric pumping, got asymmetry {a}"
        )));
    }
    let init = InitialCondition { mean_u: v_initial, ..InitialCondition::default() };
    run(params, &init, settings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_invert_the_cdf() {
        for q in [1e-6, 0.01, 0.3, 0.5, 0.77, 0.999] {
            let x = maxwellian_quantile(q);
            assert!((0.5 * RealErrorFunctions::erfc(-x) - q).abs() < 1e-13);
        }
        assert!(maxwellian_quantile(0.5).abs() < 1e-14);
        let x = modulated_quantile(0.3, 0.2);
        assert!((x + 0.2 * x.sin() - TAU * 0.3).abs() < 1e-13);
    }

    #[test]
    fn quiet_loading_has_exact_moments() {
        let mut p = SystemParams::reference(64 * 100);
        p.u_t = 2.0;
        let s = initial_state(&p, &InitialCondition { mean_u: 0.5, loading: Loading::Quiet { modulation: 0.0 } })
            .unwrap();
        assert!(s.ensemble.order_parameter().unwrap().magnitude() < 1e-12);
        assert!((s.ensemble.mean_velocity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quiet_modulation_sets_theta() {
        let p = SystemParams::reference(64 * 64);
        let eps = 0.02;
        let s = initial_state(&p, &InitialCondition { mean_u: 0.0, loading: Loading::Quiet { modulation: eps } })
            .unwrap();
        // <e^{-i chi}> over (1 + eps cos chi)/2pi is eps/2.
        let th = s.ensemble.order_parameter().unwrap().value();
        assert!((th.re - eps / 2.0).abs() < 1e-10 && th.im.abs() < 1e-10);
    }

    #[test]
    fn quiet_loading_rejects_awkward_n() {
        let p = SystemParams::reference(4099);
        let init = InitialCondition { mean_u: 0.0, loading: Loading::Quiet { modulation: 0.0 } };
        assert!(initial_state(&p, &init).is_err());
    }

    #[test]
    fn jittered_loading_is_seeded() {
        let p = SystemParams::reference(500).with_seed(9);
        let a = initial_state(&p, &InitialCondition::default()).unwrap();
        let b = initial_state(&p, &InitialCondition::default()).unwrap();
        assert_eq!(a, b);
        let c = initial_state(&p.with_seed(10), &InitialCondition::default()).unwrap();
        assert_ne!(a.ensemble.u(), c.ensemble.u());
        let spacing = TAU / 500.0;
        for (j, &x) in a.ensemble.chi().iter().enumerate() {
            let d = crate::model::wrap_phase(x - spacing * j as f64 + 1.0) - 1.0;
            assert!(d.abs() <= 1e-3 * spacing * (1.0 + 1e-9));
        }
    }

    #[test]
    fn slow_beam_needs_symmetric_pump() {
        let p = SystemParams::reference(100).with_pump(10.0, 2.0).unwrap();
        assert!(slow_beam_preset(&p, 5.0, &RunSettings::default()).is_err());
    }
}
