use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Particles below this count are summed on the calling thread.
const CHUNK: usize = 4096;

/// Reduces a phase to `[0, 2 pi)`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Positions `chi_j = 2 k x_j` (kept in `[0, 2 pi)`) and velocities
/// `u_j = 2 k v_j / kappa`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleEnsemble {
    chi: Vec<f64>,
    u: Vec<f64>,
}

impl ParticleEnsemble {
    pub fn new(chi: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if chi.len() != u.len() {
            return Err(Error::domain(format!(
                "{} positions but {} velocities",
                chi.len(),
                u.len()
            )));
        }
        let chi = chi.into_iter().map(wrap_phase).collect();
        Ok(ParticleEnsemble { chi, u })
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }

    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Overwrites positions (wrapped) and velocities in place.
    pub(crate) fn assign(&mut self, chi: &[f64], u: &[f64]) {
        for (dst, &src) in self.chi.iter_mut().zip(chi) {
            *dst = wrap_phase(src);
        }
        self.u.copy_from_slice(u);
    }

    pub fn mean_velocity(&self) -> f64 {
        self.u.iter().sum::<f64>() / self.len() as f64
    }

    /// Mean kinetic energy `<u^2 / 2>` per particle.
    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.u.iter().map(|u| u * u).sum::<f64>() / self.len() as f64
    }

    pub fn order_parameter(&self) -> Result<OrderParameter> {
        if self.is_empty() {
            return Err(Error::domain("order parameter of an empty ensemble"));
        }
        Ok(OrderParameter(order_parameter_of(&self.chi)))
    }
}

/// `(1/N) sum_j exp(-i chi_j)` over a nonempty slice.
///
/// Partial sums are formed over fixed-size chunks and combined in order, so
/// the result does not depend on the number of worker threads.
pub fn order_parameter_of(chi: &[f64]) -> Complex64 {
    let partial = |c: &[f64]| {
        c.iter().fold(Complex64::new(0.0, 0.0), |acc, &x| {
            let (s, co) = x.sin_cos();
            acc + Complex64::new(co, -s)
        })
    };
    let sum = if chi.len() <= CHUNK {
        partial(chi)
    } else {
        let parts: Vec<Complex64> = chi.par_chunks(CHUNK).map(partial).collect();
        parts.into_iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b)
    };
    sum / chi.len() as f64
}

/// Order parameter `theta = (1/N) sum_j exp(-i chi_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParameter(pub Complex64);

impl OrderParameter {
    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn magnitude(self) -> f64 {
        self.0.norm()
    }

    /// `Theta = N |theta|`.
    pub fn collective(self, n_particles: usize) -> f64 {
        n_particles as f64 * self.magnitude()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ensemble(chi: Vec<f64>) -> ParticleEnsemble {
        let n = chi.len();
        ParticleEnsemble::new(chi, vec![0.0; n]).unwrap()
    }

    #[test]
    fn bunched_ensemble_has_unit_order() {
        let th = ensemble(vec![0.0; 17]).order_parameter().unwrap();
        assert!((th.value() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn uniform_grid_has_zero_order() {
        for n in [2, 8, 1000, 10_007] {
            let chi = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
            assert!(ensemble(chi).order_parameter().unwrap().magnitude() < 1e-12);
        }
    }

    #[test]
    fn two_particle_sum() {
        let th = ensemble(vec![0.0, std::f64::consts::FRAC_PI_2]).order_parameter().unwrap();
        assert!((th.value() - Complex64::new(0.5, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn empty_ensemble_is_rejected() {
        assert!(matches!(ensemble(vec![]).order_parameter(), Err(Error::Domain(_))));
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        assert!(ParticleEnsemble::new(vec![0.0], vec![]).is_err());
    }

    #[test]
    fn wrap_handles_tiny_negative() {
        let w = wrap_phase(-1e-18);
        assert!((0.0..TAU).contains(&w));
    }

    proptest! {
        #[test]
        fn order_magnitude_bounded(chi in prop::collection::vec(-50.0f64..50.0, 1..300)) {
            let e = ensemble(chi);
            prop_assert!(e.chi().iter().all(|&x| (0.0..TAU).contains(&x)));
            prop_assert!(e.order_parameter().unwrap().magnitude() <= 1.0 + 1e-12);
        }
    }
}
