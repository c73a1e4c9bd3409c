use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::landau::{coupling_prefactor, landau_integral_continued, maxwellian_response_derivative};
use crate::{Error, Result, SystemParams};

/// A point `(S, A)` of the pump plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpPoint {
    pub s_total: f64,
    pub a_asym: f64,
}

impl PumpPoint {
    pub fn new(s_total: f64, a_asym: f64) -> Result<Self> {
        if !(s_total >= 0.0) || !s_total.is_finite() || !a_asym.is_finite() {
            return Err(Error::domain(format!("invalid pump point S = {s_total}, A = {a_asym}")));
        }
        if a_asym.abs() > s_total * (1.0 + 1e-12) {
            return Err(Error::domain(format!("|A| <= S violated: S = {s_total}, A = {a_asym}")));
        }
        Ok(PumpPoint { s_total, a_asym })
    }

    /// Point with total pump `s_total` and `A/S = ratio`.
    pub fn from_ratio(s_total: f64, ratio: f64) -> Result<Self> {
        Self::new(s_total, ratio * s_total)
    }

    pub fn of(params: &SystemParams) -> Self {
        PumpPoint { s_total: params.s_total(), a_asym: params.asymmetry() }
    }

    pub fn ratio(&self) -> f64 {
        if self.s_total > 0.0 {
            self.a_asym / self.s_total
        } else {
            0.0
        }
    }
}

/// `D(s) = delta^2 + (s+1)^2 + [(s+1) A - i delta S] I(s)` for `Re s >= 0`.
///
/// Only `delta`, `N`, `u0`, `rho_r` and `u_t` are read from `params`; the pump
/// comes from `point`.
pub fn dispersion(s: Complex64, point: &PumpPoint, params: &SystemParams) -> Result<Complex64> {
    super::landau_integral(s, params)?;
    Ok(dispersion_continued(s, point, params).value)
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct DispersionEval {
    pub value: Complex64,
    pub derivative: Complex64,
    /// Size of the largest term; used to judge whether `value` is a zero.
    pub scale: f64,
}

pub(crate) fn dispersion_continued(
    s: Complex64,
    point: &PumpPoint,
    params: &SystemParams,
) -> DispersionEval {
    let i = Complex64::i();
    let z = s + 1.0;
    let delta = params.delta;
    let cavity = z * z + delta * delta;
    let drive = z * point.a_asym - i * delta * point.s_total;
    let li = landau_integral_continued(s, params);
    let dli = coupling_prefactor(params) * maxwellian_response_derivative(s, params.u_t);
    let coupled = drive * li;
    DispersionEval {
        value: cavity + coupled,
        derivative: 2.0 * z + point.a_asym * li + drive * dli,
        scale: cavity.norm() + coupled.norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unpumped_cavity_roots() {
        let p = SystemParams::reference(100);
        let point = PumpPoint::new(0.0, 0.0).unwrap();
        for root in [Complex64::new(-1.0, -1.0), Complex64::new(-1.0, 1.0)] {
            assert!(dispersion_continued(root, &point, &p).value.norm() < 1e-15);
        }
        // not a zero on the right half-plane
        let d = dispersion(Complex64::new(0.5, 0.3), &point, &p).unwrap();
        assert!(d.norm() > 1.0);
    }

    #[test]
    fn reflection_symmetry() {
        // D(conj s; -A) = conj D(s; A)
        let p = SystemParams::reference(1000);
        let a = PumpPoint::new(3e6, 1.2e6).unwrap();
        let b = PumpPoint::new(3e6, -1.2e6).unwrap();
        for &(re, im) in &[(0.0, 0.7), (0.3, -2.0), (1.5, 4.0), (0.01, 0.0)] {
            let s = Complex64::new(re, im);
            let lhs = dispersion(s.conj(), &b, &p).unwrap();
            let rhs = dispersion(s, &a, &p).unwrap().conj();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn invalid_points() {
        assert!(PumpPoint::new(1.0, 1.5).is_err());
        assert!(PumpPoint::new(-1.0, 0.0).is_err());
        assert!(PumpPoint::from_ratio(2.0, -1.0).is_ok());
    }
}
