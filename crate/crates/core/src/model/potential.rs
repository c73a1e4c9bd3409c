use num_complex::Complex64;

use super::{FieldState, SystemParams};

/// Grating coefficient `C = alpha_+ alpha_-^* + beta_+ beta_-^*`.
///
/// The dimensionless optical potential is `2 u0 Re[C e^{i chi}]`.
pub fn potential_coefficient(fields: &FieldState) -> Complex64 {
    fields.alpha_plus * fields.alpha_minus.conj() + fields.beta_plus * fields.beta_minus.conj()
}

/// Optical potential `2 u0 Re[C e^{i chi}]` (the spatially constant forward
/// scattering part is dropped).
pub fn potential(chi: f64, fields: &FieldState, params: &SystemParams) -> f64 {
    let c = potential_coefficient(fields);
    let (s, co) = chi.sin_cos();
    2.0 * params.u0 * (c.re * co - c.im * s)
}

/// Acceleration `du/dtau = -rho_r d(potential)/d chi = 2 rho_r u0 Im[C e^{i chi}]`.
pub fn force(chi: f64, fields: &FieldState, params: &SystemParams) -> f64 {
    force_from_coefficient(chi, potential_coefficient(fields), params.rho_r * params.u0)
}

/// [`force`] with the coefficient and the product `rho_r u0` precomputed.
#[inline]
pub fn force_from_coefficient(chi: f64, c: Complex64, rho_u0: f64) -> f64 {
    let (s, co) = chi.sin_cos();
    2.0 * rho_u0 * (c.re * s + c.im * co)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(u0: f64, rho_r: f64) -> SystemParams {
        let mut p = SystemParams::reference(4);
        p.u0 = u0;
        p.rho_r = rho_r;
        p
    }

    #[test]
    fn homogeneous_fields_give_flat_potential() {
        let mut p = params(-0.25, 0.1).with_pump(10.0, 3.0).unwrap();
        p.delta = -1.3;
        let f = FieldState::homogeneous(&p);
        assert_eq!(potential_coefficient(&f), c64(0.0, 0.0));
        for k in 0..16 {
            assert_eq!(force(k as f64 * 0.4, &f, &p), 0.0);
        }
    }

    #[test]
    fn single_grating_is_a_cosine() {
        let f = FieldState::new(c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0));
        let p = params(0.7, 1.0);
        assert_eq!(potential_coefficient(&f), c64(1.0, 0.0));
        for k in 0..20 {
            let chi = k as f64 * 0.37;
            assert!((potential(chi, &f, &p) - 1.4 * chi.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn crossed_gratings_cancel() {
        let f = FieldState::new(c64(0.0, 1.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0));
        assert!(potential_coefficient(&f).norm() < 1e-15);
    }

    #[test]
    fn minimum_is_force_free_and_restoring() {
        // u0 < 0 and real C > 0: the potential 2 u0 C cos(chi) is minimal at chi = 0
        let f = FieldState::new(c64(2.0, 0.0), c64(1.5, 0.0), c64(0.0, 0.0), c64(0.0, 0.0));
        let p = params(-0.3, 0.5);
        assert!(force(0.0, &f, &p).abs() < 1e-15);
        assert!(force(0.1, &f, &p) < 0.0);
        assert!(force(-0.1, &f, &p) > 0.0);
    }

    #[test]
    fn force_descends_the_potential() {
        let f = FieldState::new(c64(0.3, -1.2), c64(0.8, 0.4), c64(-0.5, 0.1), c64(1.0, 2.0));
        let p = params(-0.2, 0.3);
        for k in 0..50 {
            let chi = k as f64 * TAU / 50.0 + 0.01;
            let fo = force(chi, &f, &p);
            if fo.abs() < 1e-6 {
                continue;
            }
            let step = 1e-4 * fo.signum();
            assert!(potential(chi + step, &f, &p) < potential(chi, &f, &p));
        }
    }

    #[test]
    fn force_matches_central_difference() {
        let f = FieldState::new(c64(0.3, -1.2), c64(0.8, 0.4), c64(-0.5, 0.1), c64(1.0, 2.0));
        let p = params(-0.2, 0.3);
        let h = 1e-6;
        for k in 0..40 {
            let chi = -PI + k as f64 * 0.157 + 0.003;
            let fo = force(chi, &f, &p);
            let fd = -(potential(chi + h, &f, &p) - potential(chi - h, &f, &p)) * p.rho_r / (2.0 * h);
            if fo.abs() > 1e-2 {
                assert!(((fo - fd) / fo).abs() < 1e-6, "chi = {chi}: {fo} vs {fd}");
            }
        }
    }

    #[test]
    fn potential_is_two_pi_periodic() {
        let f = FieldState::new(c64(0.3, -1.2), c64(0.8, 0.4), c64(-0.5, 0.1), c64(1.0, 2.0));
        let p = params(-0.2, 0.3);
        for k in 0..20 {
            let chi = k as f64 * 0.31;
            assert!((potential(chi, &f, &p) - potential(chi + TAU, &f, &p)).abs() < 1e-13);
        }
    }
}
