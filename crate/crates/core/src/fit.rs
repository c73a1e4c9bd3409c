//! Small least-squares helpers shared by the run diagnostics.

/// Slope and intercept of the least-squares line through `(x, y)`.
pub(crate) fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
    }
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Unwraps a sequence of phases so consecutive values differ by less than pi.
pub(crate) fn unwrap_phase(phases: &[f64]) -> Vec<f64> {
    use std::f64::consts::{PI, TAU};
    let mut out = Vec::with_capacity(phases.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &p in phases {
        if let Some(q) = prev {
            let mut d = p - q;
            while d > PI {
                d -= TAU;
                offset -= TAU;
            }
            while d < -PI {
                d += TAU;
                offset += TAU;
            }
        }
        out.push(p + offset);
        prev = Some(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 2.0).collect();
        let (m, b) = linear_fit(&x, &y);
        assert!((m - 3.0).abs() < 1e-12);
        assert!((b + 2.0).abs() < 1e-12);
    }

    #[test]
    fn unwrap_removes_jumps() {
        let raw: Vec<f64> = (0..50)
            .map(|k| {
                let p = -0.4 * k as f64;
                p.sin().atan2(p.cos())
            })
            .collect();
        let un = unwrap_phase(&raw);
        for (k, p) in un.iter().enumerate() {
            assert!((p - (-0.4 * k as f64)).abs() < 1e-12);
        }
    }
}
