use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Physical parameters in cavity units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Effective cavity detuning.
    pub delta: f64,
    pub n_particles: usize,
    /// Single-particle coupling; only real (dispersive) coupling is modelled.
    pub u0: f64,
    /// Amplitude pumping the forward mode of the first polarization.
    pub eta_plus: Complex64,
    /// Amplitude pumping the backward mode of the second polarization.
    pub eta_minus: Complex64,
    /// Recoil parameter `2 k v_R / kappa`.
    pub rho_r: f64,
    /// Thermal velocity `2 k v_T / kappa`.
    pub u_t: f64,
    pub seed: u64,
}

impl SystemParams {
    /// Parameters of the reference configuration: `delta = -1`, `N u0 = -1`,
    /// `u_t = 3` (that is `k v_T = 1.5 kappa`), `rho_r = 0.01`, no pump.
    pub fn reference(n_particles: usize) -> Self {
        SystemParams {
            delta: -1.0,
            n_particles,
            u0: -1.0 / n_particles as f64,
            eta_plus: Complex64::new(0.0, 0.0),
            eta_minus: Complex64::new(0.0, 0.0),
            rho_r: 0.01,
            u_t: 3.0,
            seed: 0,
        }
    }

    /// Total pump `S = |eta_+|^2 + |eta_-|^2`.
    pub fn s_total(&self) -> f64 {
        self.eta_plus.norm_sqr() + self.eta_minus.norm_sqr()
    }

    /// Pump asymmetry `A = |eta_+|^2 - |eta_-|^2`.
    pub fn asymmetry(&self) -> f64 {
        self.eta_plus.norm_sqr() - self.eta_minus.norm_sqr()
    }

    /// `A / S`, or zero without pump.
    pub fn relative_asymmetry(&self) -> f64 {
        let s = self.s_total();
        if s > 0.0 {
            self.asymmetry() / s
        } else {
            0.0
        }
    }

    /// Collective coupling `N u0`.
    pub fn n_u0(&self) -> f64 {
        self.n_particles as f64 * self.u0
    }

    /// Sets real pump amplitudes realizing total pump `s` and asymmetry `a`.
    pub fn with_pump(mut self, s: f64, a: f64) -> Result<Self> {
        if !(s >= 0.0) || !a.is_finite() || a.abs() > s * (1.0 + 1e-12) {
            return Err(Error::domain(format!(
                "pump requires |A| <= S, got S = {s}, A = {a}"
            )));
        }
        let plus = (0.5 * (s + a)).max(0.0);
        let minus = (0.5 * (s - a)).max(0.0);
        self.eta_plus = Complex64::new(plus.sqrt(), 0.0);
        self.eta_minus = Complex64::new(minus.sqrt(), 0.0);
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Checks the domain of every field.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.n_particles == 0 {
            problems.push("n_particles must be >= 1".to_string());
        }
        if !(self.rho_r > 0.0) || !self.rho_r.is_finite() {
            problems.push(format!("rho_r must be positive, got {}", self.rho_r));
        }
        if !(self.u_t >= 0.0) || !self.u_t.is_finite() {
            problems.push(format!("u_t must be nonnegative, got {}", self.u_t));
        }
        if !self.delta.is_finite() {
            problems.push("delta must be finite".into());
        }
        if !self.u0.is_finite() {
            problems.push("u0 must be finite".into());
        }
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        if !finite(self.eta_plus) || !finite(self.eta_minus) {
            problems.push("pump amplitudes must be finite".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(problems.join("; ")))
        }
    }
}
