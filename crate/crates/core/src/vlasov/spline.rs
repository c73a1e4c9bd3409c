//! Periodic cubic B-spline interpolation used for the 1D shifts.

/// Prefactorised solver for the cyclic system `(c[i-1] + 4 c[i] + c[i+1]) / 6 = f[i]`
/// that turns samples into B-spline coefficients.
#[derive(Debug, Clone)]
pub(crate) struct PeriodicSpline {
    n: usize,
    cp: Vec<f64>,
    inv_denom: Vec<f64>,
    z: Vec<f64>,
    z_norm: f64,
}

const GAMMA: f64 = -4.0;

impl PeriodicSpline {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n >= 3, "periodic spline needs at least three points");
        let mut diag = vec![4.0; n];
        diag[0] = 4.0 - GAMMA;
        diag[n - 1] = 4.0 - 1.0 / GAMMA;
        let mut cp = vec![0.0; n];
        let mut inv_denom = vec![0.0; n];
        let mut prev = 0.0;
        for i in 0..n {
            let d = diag[i] - prev;
            inv_denom[i] = 1.0 / d;
            cp[i] = inv_denom[i];
            prev = cp[i];
        }
        let mut s = PeriodicSpline { n, cp, inv_denom, z: vec![0.0; n], z_norm: 0.0 };
        let mut u = vec![0.0; n];
        u[0] = GAMMA;
        u[n - 1] = 1.0;
        let mut z = vec![0.0; n];
        s.thomas(&u, &mut z);
        s.z_norm = 1.0 + z[0] + z[n - 1] / GAMMA;
        s.z = z;
        s
    }

    fn thomas(&self, r: &[f64], x: &mut [f64]) {
        let n = self.n;
        let mut prev = 0.0;
        for i in 0..n {
            prev = (r[i] - prev) * self.inv_denom[i];
            x[i] = prev;
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.cp[i] * x[i + 1];
        }
    }

    /// B-spline coefficients of periodic samples `f`, written to `c`.
    pub(crate) fn coefficients(&self, f: &[f64], c: &mut [f64], rhs: &mut [f64]) {
        for (r, v) in rhs.iter_mut().zip(f) {
            *r = 6.0 * v;
        }
        self.thomas(rhs, c);
        let n = self.n;
        let fact = (c[0] + c[n - 1] / GAMMA) / self.z_norm;
        for (ci, zi) in c.iter_mut().zip(&self.z) {
            *ci -= fact * zi;
        }
    }

    /// Replaces `f[i]` by the interpolant at `i - s`, periodically.
    /// Integer shifts are exact rotations.
    pub(crate) fn shift(&self, f: &mut [f64], s: f64, work: &mut [f64]) {
        let n = self.n;
        let base = (-s).floor();
        let t = -s - base;
        let offset = (base as i64).rem_euclid(n as i64) as usize;
        if t == 0.0 {
            f.rotate_right((n - offset) % n);
            return;
        }
        let (c, rhs) = work.split_at_mut(n);
        self.coefficients(f, c, &mut rhs[..n]);
        let t2 = t * t;
        let t3 = t2 * t;
        let w0 = (1.0 - t).powi(3) / 6.0;
        let w1 = (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0;
        let w2 = (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0;
        let w3 = t3 / 6.0;
        for (i, out) in f.iter_mut().enumerate() {
            let j = i + offset;
            let at = |k: usize| c[(j + k + n - 1) % n];
            *out = w0 * at(0) + w1 * at(1) + w2 * at(2) + w3 * at(3);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn samples(n: usize, g: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|i| g(TAU * i as f64 / n as f64)).collect()
    }

    #[test]
    fn coefficients_reproduce_samples() {
        let n = 37;
        let sp = PeriodicSpline::new(n);
        let f = samples(n, |x| (3.0 * x).sin() + 0.2 * x.cos().powi(5));
        let mut c = vec![0.0; n];
        let mut r = vec![0.0; n];
        sp.coefficients(&f, &mut c, &mut r);
        for i in 0..n {
            let v = (c[(i + n - 1) % n] + 4.0 * c[i] + c[(i + 1) % n]) / 6.0;
            assert!((v - f[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn integer_shift_is_a_rotation() {
        let n = 16;
        let sp = PeriodicSpline::new(n);
        let f: Vec<f64> = (0..n).map(|i| (i * i) as f64).collect();
        let mut work = vec![0.0; 2 * n];
        for s in [-19.0, -3.0, 0.0, 5.0, 16.0, 33.0] {
            let mut g = f.clone();
            sp.shift(&mut g, s, &mut work);
            for i in 0..n {
                let src = (i as i64 - s as i64).rem_euclid(n as i64) as usize;
                assert_eq!(g[i], f[src]);
            }
        }
    }

    #[test]
    fn smooth_shift_is_fourth_order_accurate() {
        let err = |n: usize| {
            let sp = PeriodicSpline::new(n);
            // same fractional offset at both resolutions
            let s = 2.37;
            let mut f = samples(n, |x| (x.sin()).exp());
            let mut work = vec![0.0; 2 * n];
            sp.shift(&mut f, s, &mut work);
            let exact = samples(n, |x| ((x - TAU * s / n as f64).sin()).exp());
            f.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let ratio = err(64) / err(128);
        assert!(ratio > 14.0 && ratio < 18.0, "ratio {ratio}");
    }

    proptest! {
        #[test]
        fn shift_conserves_sum_and_first_moment(
            s in -40.0f64..40.0,
            vals in proptest::collection::vec(0.0f64..1.0, 24),
        ) {
            // Pad with zeros so the first moment is not affected by wrapping.
            let n = 128;
            let mut f = vec![0.0; n];
            f[52..76].copy_from_slice(&vals);
            let sp = PeriodicSpline::new(n);
            let mass: f64 = f.iter().sum();
            let first: f64 = f.iter().enumerate().map(|(i, v)| i as f64 * v).sum();
            let mut work = vec![0.0; 2 * n];
            sp.shift(&mut f, s, &mut work);
            let mass2: f64 = f.iter().sum();
            let first2: f64 = f.iter().enumerate().map(|(i, v)| i as f64 * v).sum();
            prop_assert!((mass2 - mass).abs() < 1e-12 * mass.max(1.0));
            // Wrapped tails of the interpolant are tiny but nonzero.
            prop_assert!((first2 - first - s * mass).abs() < 1e-6 * first.max(1.0));
        }
    }
}
