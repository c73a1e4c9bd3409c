use std::f64::consts::PI;

use errorfunctions::ComplexErrorFunctions;
use num_complex::Complex64;

use crate::{Error, Result, SystemParams};

/// Beyond this `|zeta|` the asymptotic series replaces the Faddeeva route for
/// `1 + zeta Z(zeta)`, which otherwise loses digits to cancellation.
const ASYMPTOTIC_RADIUS: f64 = 40.0;

/// `rho_r N u0^2 / (1 + delta^2)`, the factor between `I(s)` and `J(s)`.
pub fn coupling_prefactor(params: &SystemParams) -> f64 {
    params.rho_r * params.n_particles as f64 * params.u0 * params.u0 / (1.0 + params.delta * params.delta)
}

/// `1 + zeta Z(zeta)` with `Z(zeta) = i sqrt(pi) w(zeta)` the plasma
/// dispersion function, analytically continued to the whole plane.
fn one_plus_zeta_z(zeta: Complex64) -> Complex64 {
    if zeta.im >= 0.0 && zeta.norm() > ASYMPTOTIC_RADIUS {
        let inv = 1.0 / (2.0 * zeta * zeta);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 1..=30 {
            term *= inv * (2 * n - 1) as f64;
            sum -= term;
        }
        if zeta.im == 0.0 {
            sum += Complex64::i() * PI.sqrt() * zeta * (-zeta * zeta).exp();
        }
        return sum;
    }
    let z = Complex64::i() * PI.sqrt() * zeta.w();
    1.0 + zeta * z
}

/// Velocity response `J(s) = integral F'(u) / (s + i u) du` of the Maxwellian
/// `F(u) = exp(-u^2 / u_t^2) / (sqrt(pi) u_t)`.
///
/// For `Re s > 0` this is the ordinary integral; elsewhere it is its analytic
/// continuation (the Landau prescription), which on the imaginary axis equals
/// the principal value plus half the residue. In closed form
/// `J(s) = 2 i (1 + zeta Z(zeta)) / u_t^2` with `zeta = i s / u_t`; a cold gas
/// gives `J(s) = i / s^2`.
pub fn maxwellian_response(s: Complex64, u_t: f64) -> Complex64 {
    if u_t == 0.0 {
        return Complex64::i() / (s * s);
    }
    let zeta = Complex64::i() * s / u_t;
    2.0 * Complex64::i() * one_plus_zeta_z(zeta) / (u_t * u_t)
}

/// `dJ/ds`, from `d(1 + zeta Z)/d zeta = Z - 2 zeta (1 + zeta Z)`.
pub(crate) fn maxwellian_response_derivative(s: Complex64, u_t: f64) -> Complex64 {
    if u_t == 0.0 {
        return -2.0 * Complex64::i() / (s * s * s);
    }
    let i = Complex64::i();
    let zeta = i * s / u_t;
    let g = one_plus_zeta_z(zeta);
    let z = if zeta.norm() > 1e-300 { (g - 1.0) / zeta } else { i * PI.sqrt() };
    let dg = z - 2.0 * zeta * g;
    2.0 * i / (u_t * u_t) * dg * (i / u_t)
}

/// `I(s)` for `Re s >= 0`, continued onto the imaginary axis.
pub fn landau_integral(s: Complex64, params: &SystemParams) -> Result<Complex64> {
    if s.re < 0.0 || !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::domain(format!("landau integral needs Re s >= 0, got {s}")));
    }
    if params.u_t == 0.0 && s.norm() == 0.0 {
        return Err(Error::domain("cold-gas response diverges at s = 0"));
    }
    Ok(landau_integral_continued(s, params))
}

pub(crate) fn landau_integral_continued(s: Complex64, params: &SystemParams) -> Complex64 {
    coupling_prefactor(params) * maxwellian_response(s, params.u_t)
}
