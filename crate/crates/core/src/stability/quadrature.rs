//! Adaptive Gauss-Kronrod quadrature for the velocity integral.
//!
//! This is the slow, assumption-free route to `J(s)`: it works for any
//! velocity distribution and is used to check the closed-form Maxwellian
//! response.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 60;

/// Kronrod estimate, Gauss-Kronrod error estimate and the integral of `|f|`.
fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for j in 0..7 {
        let x = h * XGK[j];
        let (lo, hi) = (f(c - x), f(c + x));
        let pair = lo + hi;
        k += pair * WGK[j];
        abs += (lo.norm() + hi.norm()) * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm(), abs * h.abs())
}

fn adapt<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
) -> Result<Complex64> {
    let (val, err, abs) = kronrod15(f, a, b);
    // Below this the error estimate is rounding noise.
    if err <= tol || err <= 50.0 * f64::EPSILON * abs {
        return Ok(val);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::numerical(format!(
            "quadrature did not converge on [{a}, {b}] (error {err:.2e})"
        )));
    }
    let m = 0.5 * (a + b);
    Ok(adapt(f, a, m, 0.5 * tol, depth + 1)? + adapt(f, m, b, 0.5 * tol, depth + 1)?)
}

/// Integrates `f` over the intervals between consecutive `breaks` to absolute
/// tolerance `tol`.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, breaks: &[f64], tol: f64) -> Result<Complex64> {
    let total = breaks.last().unwrap() - breaks[0];
    let mut sum = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            sum += adapt(&f, w[0], w[1], tol * (w[1] - w[0]) / total, 0)?;
        }
    }
    Ok(sum)
}

/// Derivative of the Maxwellian `F(u) = exp(-u^2/u_t^2) / (sqrt(pi) u_t)`.
pub fn maxwellian_derivative(u: f64, u_t: f64) -> f64 {
    -2.0 * u / (u_t * u_t) * (-(u / u_t).powi(2)).exp() / (PI.sqrt() * u_t)
}

/// `J(s) = integral dF(u) / (s + i u) du` for `Re s > 0` by direct
/// quadrature. `dist_derivative` is `F'`, assumed negligible outside
/// `[-half_width, half_width]`.
pub fn velocity_response<F: Fn(f64) -> f64>(
    s: Complex64,
    dist_derivative: F,
    half_width: f64,
    tol: f64,
) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::domain("direct quadrature requires Re s > 0"));
    }
    let pole = (-s.im).clamp(-half_width, half_width);
    let mut breaks = vec![-half_width];
    // resolve the Lorentzian of width Re s around the near-pole
    for off in [-10.0 * s.re, -s.re, 0.0, s.re, 10.0 * s.re] {
        let x = pole + off;
        if x > *breaks.last().unwrap() && x < half_width {
            breaks.push(x);
        }
    }
    breaks.push(half_width);
    integrate(|u| dist_derivative(u) / (s + Complex64::new(0.0, u)), &breaks, tol)
}

/// `J(i omega)` on the imaginary axis through the Plemelj formula,
/// `-i PV integral F'(u)/(u + omega) du + pi F'(-omega)`, with the principal
/// value taken by symmetric subtraction around the pole.
pub fn velocity_response_on_axis<F: Fn(f64) -> f64>(
    omega: f64,
    dist_derivative: F,
    half_width: f64,
    tol: f64,
) -> Result<Complex64> {
    let u0 = -omega;
    let reach = half_width + omega.abs();
    let odd = |t: f64| {
        let v = if t == 0.0 { 0.0 } else { (dist_derivative(u0 + t) - dist_derivative(u0 - t)) / t };
        Complex64::new(v, 0.0)
    };
    // Near t = 0 the difference quotient loses digits to cancellation, and
    // adaptive refinement would chase that noise. The integrand is smooth
    // there, so one Gauss-Kronrod panel covers it.
    let core = 1e-3 * reach;
    let mut breaks = vec![core];
    for x in [0.1, 1.0, 10.0, 100.0] {
        if x > core && x < reach {
            breaks.push(x);
        }
    }
    breaks.push(reach);
    let pv = kronrod15(&odd, 0.0, core).0 + integrate(odd, &breaks, tol * (1.0 - 1e-3))?;
    Ok(-Complex64::i() * pv + PI * dist_derivative(u0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomial_and_gaussian() {
        let v = integrate(|x| Complex64::new(x * x, 0.0), &[0.0, 3.0], 1e-13).unwrap();
        assert!((v.re - 9.0).abs() < 1e-12);
        let g = integrate(|x| Complex64::new((-x * x).exp(), 0.0), &[-10.0, 0.0, 10.0], 1e-14).unwrap();
        assert!((g.re - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn maxwellian_first_moment() {
        // integral u F'(u) du = -1
        let v = integrate(
            |u| Complex64::new(u * maxwellian_derivative(u, 2.0), 0.0),
            &[-30.0, 0.0, 30.0],
            1e-14,
        )
        .unwrap();
        assert!((v.re + 1.0).abs() < 1e-12);
    }
}
