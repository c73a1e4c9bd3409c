use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SystemParams;

/// Amplitudes of the four running-wave modes.
///
/// `alpha_plus` and `beta_minus` are the pumped modes; `alpha_minus` and
/// `beta_plus` are fed only by scattering off the density grating.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldState {
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    pub beta_plus: Complex64,
    pub beta_minus: Complex64,
}

impl FieldState {
    pub fn new(
        alpha_plus: Complex64,
        alpha_minus: Complex64,
        beta_plus: Complex64,
        beta_minus: Complex64,
    ) -> Self {
        FieldState { alpha_plus, alpha_minus, beta_plus, beta_minus }
    }

    /// Stationary fields of a spatially homogeneous gas: only the pumped modes
    /// are populated, `alpha_+ = eta_+ / (1 - i delta)` and
    /// `beta_- = eta_- / (1 - i delta)`.
    pub fn homogeneous(params: &SystemParams) -> Self {
        let denom = Complex64::new(1.0, -params.delta);
        FieldState {
            alpha_plus: params.eta_plus / denom,
            alpha_minus: Complex64::new(0.0, 0.0),
            beta_plus: Complex64::new(0.0, 0.0),
            beta_minus: params.eta_minus / denom,
        }
    }

    pub fn to_array(self) -> [Complex64; 4] {
        [self.alpha_plus, self.alpha_minus, self.beta_plus, self.beta_minus]
    }

    pub fn from_array(a: [Complex64; 4]) -> Self {
        FieldState { alpha_plus: a[0], alpha_minus: a[1], beta_plus: a[2], beta_minus: a[3] }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Photon numbers `|alpha_+|^2, |alpha_-|^2, |beta_+|^2, |beta_-|^2`.
    pub fn intensities(&self) -> [f64; 4] {
        self.to_array().map(|z| z.norm_sqr())
    }

    /// Field momentum in units of `hbar k`: forward modes count `+1` per
    /// photon, backward modes `-1`.
    pub fn momentum(&self) -> f64 {
        let [ap, am, bp, bm] = self.intensities();
        ap - am + bp - bm
    }

    /// Right-hand side of the mode equations for a given order parameter.
    ///
    /// `decay` is the field decay rate; the model uses 1, closed-system
    /// checks use 0.
    pub fn derivative(
        &self,
        theta: Complex64,
        params: &SystemParams,
        decay: f64,
    ) -> [Complex64; 4] {
        let i = Complex64::i();
        let lin = Complex64::new(-decay, params.delta);
        let g = -i * params.n_u0();
        [
            lin * self.alpha_plus + g * theta * self.alpha_minus + params.eta_plus,
            lin * self.alpha_minus + g * theta.conj() * self.alpha_plus,
            lin * self.beta_plus + g * theta * self.beta_minus,
            lin * self.beta_minus + g * theta.conj() * self.beta_plus + params.eta_minus,
        ]
    }

    /// Advances the fields over `dt` with the order parameter held fixed,
    /// using one classical RK4 step.
    pub(crate) fn advance_frozen(
        &self,
        theta: Complex64,
        params: &SystemParams,
        decay: f64,
        dt: f64,
    ) -> FieldState {
        let y0 = self.to_array();
        let eval = |y: [Complex64; 4]| FieldState::from_array(y).derivative(theta, params, decay);
        let add = |y: [Complex64; 4], k: [Complex64; 4], h: f64| {
            let mut out = y;
            for (o, d) in out.iter_mut().zip(k) {
                *o += d * h;
            }
            out
        };
        let k1 = eval(y0);
        let k2 = eval(add(y0, k1, 0.5 * dt));
        let k3 = eval(add(y0, k2, 0.5 * dt));
        let k4 = eval(add(y0, k3, dt));
        let mut y = y0;
        for n in 0..4 {
            y[n] += (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]) * (dt / 6.0);
        }
        FieldState::from_array(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_state_is_stationary() {
        for (delta, ep, em) in [
            (-1.0, Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)),
            (0.7, Complex64::new(1.0, -2.0), Complex64::new(-0.5, 0.25)),
            (-2.5, Complex64::new(0.0, 1e3), Complex64::new(40.0, 0.0)),
        ] {
            let mut p = SystemParams::reference(100);
            p.delta = delta;
            p.eta_plus = ep;
            p.eta_minus = em;
            let f = FieldState::homogeneous(&p);
            let rhs = f.derivative(Complex64::new(0.0, 0.0), &p, 1.0);
            let scale = p.eta_plus.norm() + p.eta_minus.norm();
            for d in rhs {
                assert!(d.norm() / scale < 1e-14, "residual {d}");
            }
        }
    }

    #[test]
    fn momentum_counts_directions() {
        let f = FieldState::new(
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 0.0),
        );
        assert_eq!(f.intensities(), [4.0, 1.0, 2.0, 0.0]);
        assert!((f.momentum() - 5.0).abs() < 1e-15);
    }
}
