use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::{force_from_coefficient, potential_coefficient, FieldState, ParticleEnsemble};
use crate::{Result, SystemParams};

/// Joint state of the cavity modes and the particles at time `tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationState {
    pub tau: f64,
    pub fields: FieldState,
    pub ensemble: ParticleEnsemble,
}

impl SimulationState {
    pub fn new(tau: f64, fields: FieldState, ensemble: ParticleEnsemble) -> Self {
        SimulationState { tau, fields, ensemble }
    }

    /// Conserved momentum of the closed (lossless, unpumped) system in units
    /// of `hbar k`: `(2 / rho_r) sum_j u_j` plus the field momentum.
    pub fn total_momentum(&self, params: &SystemParams) -> f64 {
        2.0 / params.rho_r * self.ensemble.u().iter().sum::<f64>() + self.fields.momentum()
    }
}

/// Time derivative of a [`SimulationState`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateDerivative {
    pub fields: [Complex64; 4],
    pub chi: Vec<f64>,
    pub u: Vec<f64>,
}

/// Right-hand side of the coupled system in cavity units, with unit decay.
pub fn rhs(state: &SimulationState, params: &SystemParams) -> Result<StateDerivative> {
    let theta = state.ensemble.order_parameter()?.value();
    let c = potential_coefficient(&state.fields);
    let rho_u0 = params.rho_r * params.u0;
    Ok(StateDerivative {
        fields: state.fields.derivative(theta, params, 1.0),
        chi: state.ensemble.u().to_vec(),
        u: state.ensemble.chi().iter().map(|&x| force_from_coefficient(x, c, rho_u0)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn homogeneous_state_has_no_dynamics_but_streaming() {
        let p = SystemParams::reference(64).with_pump(5e3, 1e3).unwrap();
        let chi = (0..64).map(|j| TAU * j as f64 / 64.0).collect();
        let u: Vec<f64> = (0..64).map(|j| 0.1 * j as f64 - 3.0).collect();
        let state = SimulationState::new(
            0.0,
            FieldState::homogeneous(&p),
            ParticleEnsemble::new(chi, u.clone()).unwrap(),
        );
        let d = rhs(&state, &p).unwrap();
        for f in d.fields {
            assert!(f.norm() < 1e-12 * p.s_total().sqrt());
        }
        assert!(d.u.iter().all(|&a| a == 0.0));
        assert_eq!(d.chi, u);
    }

    #[test]
    fn single_particle_at_extremum() {
        let mut p = SystemParams::reference(1);
        p.u0 = -1.0;
        p.rho_r = 1.0;
        let c1 = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let state = SimulationState::new(
            0.0,
            FieldState::new(c1, c1, z, z),
            ParticleEnsemble::new(vec![0.0], vec![0.0]).unwrap(),
        );
        assert_eq!(rhs(&state, &p).unwrap().u, vec![0.0]);
    }
}
