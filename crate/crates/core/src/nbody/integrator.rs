use num_complex::Complex64;
use rayon::prelude::*;

use super::SimulationState;
use crate::model::{potential_coefficient, FieldState};
use crate::{Error, Result, SystemParams};

const CHUNK: usize = 1024;

/// Classical fourth-order Runge-Kutta stepper with reusable stage buffers.
///
/// Partial sums of the order parameter are reduced over fixed chunks in a
/// fixed order, so trajectories are identical for any thread count.
#[derive(Debug, Clone)]
pub struct Rk4 {
    /// Field decay rate: 1 for the physical model, 0 for closed-system checks.
    pub decay: f64,
    k: [Vec<f64>; 4],
    chi_next: Vec<f64>,
    u_next: Vec<f64>,
}

impl Default for Rk4 {
    fn default() -> Self {
        Self::new(1.0)
    }
}

/// One pass over the particles: writes the kick of every particle at the
/// stage positions produced by `chi_at`, and returns the order parameter of
/// those positions.
fn stage<F>(chi_at: F, c: Complex64, rho_u0: f64, out: &mut [f64]) -> Complex64
where
    F: Fn(usize) -> f64 + Sync,
{
    let body = |offset: usize, chunk: &mut [f64]| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in chunk.iter_mut().enumerate() {
            let x = chi_at(offset + k);
            let (s, co) = x.sin_cos();
            acc += Complex64::new(co, -s);
            *a = 2.0 * rho_u0 * (c.re * s + c.im * co);
        }
        acc
    };
    let n = out.len();
    let sum = if n <= CHUNK {
        body(0, out)
    } else {
        let parts: Vec<Complex64> = out
            .par_chunks_mut(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| body(ci * CHUNK, chunk))
            .collect();
        parts.into_iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b)
    };
    sum / n as f64
}

fn axpy(y: FieldState, k: [Complex64; 4], h: f64) -> FieldState {
    let mut a = y.to_array();
    for (v, d) in a.iter_mut().zip(k) {
        *v += d * h;
    }
    FieldState::from_array(a)
}

impl Rk4 {
    pub fn new(decay: f64) -> Self {
        Rk4 { decay, k: Default::default(), chi_next: Vec::new(), u_next: Vec::new() }
    }

    /// Advances `state` by `dt` in place.
    pub fn step(&mut self, state: &mut SimulationState, params: &SystemParams, dt: f64) -> Result<()> {
        if !(dt > 0.0) {
            return Err(Error::domain(format!("time step must be positive, got {dt}")));
        }
        let n = state.ensemble.len();
        if n == 0 {
            return Err(Error::domain("empty ensemble"));
        }
        for k in self.k.iter_mut() {
            k.resize(n, 0.0);
        }
        self.chi_next.resize(n, 0.0);
        self.u_next.resize(n, 0.0);

        let chi0 = state.ensemble.chi();
        let u0 = state.ensemble.u();
        let rho_u0 = params.rho_r * params.u0;
        let h = dt;
        let f0 = state.fields;
        let [k1, k2, k3, k4] = &mut self.k;

        let th1 = stage(|j| chi0[j], potential_coefficient(&f0), rho_u0, k1);
        let df1 = f0.derivative(th1, params, self.decay);

        let f2 = axpy(f0, df1, 0.5 * h);
        let th2 = stage(|j| chi0[j] + 0.5 * h * u0[j], potential_coefficient(&f2), rho_u0, k2);
        let df2 = f2.derivative(th2, params, self.decay);

        let f3 = axpy(f0, df2, 0.5 * h);
        let k1r: &[f64] = k1;
        let th3 = stage(
            |j| chi0[j] + 0.5 * h * u0[j] + 0.25 * h * h * k1r[j],
            potential_coefficient(&f3),
            rho_u0,
            k3,
        );
        let df3 = f3.derivative(th3, params, self.decay);

        let f4 = axpy(f0, df3, h);
        let k2r: &[f64] = k2;
        let th4 = stage(
            |j| chi0[j] + h * u0[j] + 0.5 * h * h * k2r[j],
            potential_coefficient(&f4),
            rho_u0,
            k4,
        );
        let df4 = f4.derivative(th4, params, self.decay);

        let mut fields = f0.to_array();
        for m in 0..4 {
            fields[m] += (df1[m] + 2.0 * df2[m] + 2.0 * df3[m] + df4[m]) * (h / 6.0);
        }
        let fields = FieldState::from_array(fields);

        let mut speed_sum = 0.0;
        for j in 0..n {
            self.chi_next[j] = chi0[j] + h * u0[j] + h * h / 6.0 * (k1[j] + k2[j] + k3[j]);
            self.u_next[j] = u0[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            speed_sum += self.u_next[j];
        }
        let tau = state.tau + h;
        if !fields.is_finite() || !speed_sum.is_finite() || !th4.norm().is_finite() {
            return Err(Error::Diverged { tau });
        }
        state.fields = fields;
        state.ensemble.assign(&self.chi_next, &self.u_next);
        state.tau = tau;
        Ok(())
    }
}

/// One RK4 step of the physical model (unit field decay).
pub fn step(state: &SimulationState, params: &SystemParams, dt: f64) -> Result<SimulationState> {
    let mut next = state.clone();
    Rk4::default().step(&mut next, params, dt)?;
    Ok(next)
}
