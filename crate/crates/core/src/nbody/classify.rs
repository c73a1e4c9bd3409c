use serde::{Deserialize, Serialize};

use super::{Sample, TimeSeries};
use crate::fit::linear_fit;
use crate::stability::Regime;
use crate::{Error, Result, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyThresholds {
    /// Below this peak `|theta|` over the tail the run is uniform.
    pub theta_min: f64,
    /// Largest `|d v_cm / d tau|` still counted as a uniformly moving wave,
    /// in recoil velocities per `tau` (one recoil velocity is `rho_r` in `u`
    /// units).
    pub slope_tol: f64,
    /// Trailing fraction of the run that is analysed.
    pub tail_fraction: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        ClassifyThresholds { theta_min: 0.05, slope_tol: 0.02, tail_fraction: 0.25 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunClass {
    pub regime: Regime,
    pub max_abs_theta: f64,
    pub mean_abs_theta: f64,
    /// Fitted centre-of-mass acceleration over the tail, `u` units per `tau`.
    pub acceleration: f64,
}

/// The trailing `fraction` of a series, by time.
pub(crate) fn trailing_window(series: &TimeSeries, fraction: f64) -> Result<&[Sample]> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::domain(format!("tail fraction must lie in (0, 1], got {fraction}")));
    }
    let (first, last) = match (series.samples.first(), series.last()) {
        (Some(a), Some(b)) => (a.tau, b.tau),
        _ => return Err(Error::domain("empty time series")),
    };
    let tail = series.since(last - fraction * (last - first));
    if tail.len() < 3 {
        return Err(Error::domain("trailing window holds fewer than three samples"));
    }
    Ok(tail)
}

/// Labels a finished run from the tail of its time series.
pub fn classify_run(
    series: &TimeSeries,
    params: &SystemParams,
    th: &ClassifyThresholds,
) -> Result<RunClass> {
    let tail = trailing_window(series, th.tail_fraction)?;
    let taus: Vec<f64> = tail.iter().map(|s| s.tau).collect();
    let v: Vec<f64> = tail.iter().map(|s| s.v_cm).collect();
    let mean_abs_theta = tail.iter().map(|s| s.theta.norm()).sum::<f64>() / tail.len() as f64;
    let max_abs_theta = tail.iter().map(|s| s.theta.norm()).fold(0.0, f64::max);
    let (acceleration, _) = linear_fit(&taus, &v);
    let regime = if max_abs_theta < th.theta_min {
        Regime::Stable
    } else if acceleration.abs() > th.slope_tol * params.rho_r {
        Regime::Carl
    } else {
        Regime::BgkOrdered
    };
    Ok(RunClass { regime, max_abs_theta, mean_abs_theta, acceleration })
}
