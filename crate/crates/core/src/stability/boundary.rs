use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::landau::landau_integral_continued;
use crate::SystemParams;

/// One marginal-stability point: `D(i omega) = 0` at pump `(S, A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub omega: f64,
    pub s_total: f64,
    pub a_asym: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryCurve {
    /// Physical samples (`S >= 0`, `|A| <= S`) in increasing `omega`.
    pub samples: Vec<BoundarySample>,
    /// Frequencies at which the linear system was singular.
    pub singular: Vec<f64>,
}

/// Solves the real 2x2 system `Re, Im [D(i omega)] = 0` for `(A, S)`.
///
/// Returns `None` when the system is singular.
pub(crate) fn solve_marginal(omega: f64, params: &SystemParams) -> Option<(f64, f64)> {
    let i = Complex64::i();
    let z = Complex64::new(1.0, omega);
    let li = landau_integral_continued(Complex64::new(0.0, omega), params);
    let p = z * li;
    let q = -i * params.delta * li;
    let r = -(z * z + params.delta * params.delta);
    let det = p.re * q.im - q.re * p.im;
    if det.abs() <= 1e-14 * p.norm() * q.norm() || !det.is_finite() {
        return None;
    }
    let a = (r.re * q.im - q.re * r.im) / det;
    let s = (p.re * r.im - r.re * p.im) / det;
    Some((a, s))
}

/// Frequency grid: `omega = 0` plus 1024 log-spaced points on each side,
/// spanning `1e-4 .. 20` times the larger of 1, `u_t` and `|delta|`.
pub fn default_omega_grid(params: &SystemParams) -> Vec<f64> {
    let scale = 1f64.max(params.u_t).max(params.delta.abs());
    let (lo, hi) = ((1e-4 * scale).ln(), (20.0 * scale).ln());
    let n = 1024;
    let pos: Vec<f64> = (0..n).map(|k| (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp()).collect();
    let mut grid: Vec<f64> = pos.iter().rev().map(|w| -w).collect();
    grid.push(0.0);
    grid.extend(pos);
    grid
}

/// Marginal-stability curve parametrized by the frequency of the marginal
/// mode.
pub fn boundary_curve(params: &SystemParams, omega_grid: &[f64]) -> BoundaryCurve {
    let mut curve = BoundaryCurve::default();
    let mut grid = omega_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    for omega in grid {
        match solve_marginal(omega, params) {
            None => curve.singular.push(omega),
            Some((a, s)) => {
                if s >= 0.0 && a.abs() <= s {
                    curve.samples.push(BoundarySample { omega, s_total: s, a_asym: a });
                }
            }
        }
    }
    curve
}

impl BoundaryCurve {
    /// Smallest marginal `S` along the ray `A = ratio * S`.
    ///
    /// Crossings of `A/S = ratio` between neighbouring samples are refined by
    /// bisection in `omega` on the exact marginal solution.
    pub fn critical_pump(&self, ratio: f64, params: &SystemParams) -> Option<f64> {
        let g = |w: f64| solve_marginal(w, params).map(|(a, s)| (a / s - ratio, s));
        let mut best: Option<f64> = None;
        let mut consider = |s: f64| {
            if s >= 0.0 && best.is_none_or(|b| s < b) {
                best = Some(s);
            }
        };
        for w in self.samples.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let r0 = x0.a_asym / x0.s_total - ratio;
            let r1 = x1.a_asym / x1.s_total - ratio;
            if r0 == 0.0 {
                consider(x0.s_total);
            }
            if r0 * r1 >= 0.0 {
                continue;
            }
            let (mut lo, mut hi, mut flo) = (x0.omega, x1.omega, r0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let Some((fm, _)) = g(mid) else { break };
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-15 * (1.0 + mid.abs()) {
                    break;
                }
            }
            if let Some((_, s)) = g(0.5 * (lo + hi)) {
                consider(s);
            }
        }
        if let Some(last) = self.samples.last() {
            if last.a_asym / last.s_total == ratio {
                consider(last.s_total);
            }
        }
        best
    }
}
