use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SimulationState;
use crate::fit::linear_fit;
use crate::{Error, Result};

/// Observables recorded at one instant of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub tau: f64,
    pub theta: Complex64,
    /// Centre-of-mass velocity in `u` units.
    pub v_cm: f64,
    /// `|alpha_+|^2, |alpha_-|^2, |beta_+|^2, |beta_-|^2`.
    pub intensities: [f64; 4],
    /// Mean of `u^2 / 2` per particle.
    pub kinetic_energy: f64,
    pub field_momentum: f64,
}

impl Sample {
    pub fn of(state: &SimulationState) -> Result<Self> {
        Ok(Sample {
            tau: state.tau,
            theta: state.ensemble.order_parameter()?.value(),
            v_cm: state.ensemble.mean_velocity(),
            intensities: state.fields.intensities(),
            kinetic_energy: state.ensemble.kinetic_energy(),
            field_momentum: state.fields.momentum(),
        })
    }
}

/// Samples of a run in time order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub samples: Vec<Sample>,
}

impl TimeSeries {
    pub const CSV_HEADER: &'static str =
        "tau,re_theta,im_theta,abs_theta,v_cm,i_ap,i_am,i_bp,i_bm,ekin,pfield";

    pub fn push(&mut self, s: Sample) {
        self.samples.push(s);
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn tau(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.tau).collect()
    }

    pub fn abs_theta(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.theta.norm()).collect()
    }

    pub fn v_cm(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.v_cm).collect()
    }

    pub fn max_abs_theta(&self) -> f64 {
        self.samples.iter().map(|s| s.theta.norm()).fold(0.0, f64::max)
    }

    /// Samples with `tau >= from`.
    pub fn since(&self, from: f64) -> &[Sample] {
        let k = self.samples.partition_point(|s| s.tau < from);
        &self.samples[k..]
    }

    /// Exponential growth rate of `|theta|` fitted over `from <= tau <= to`.
    pub fn fitted_growth_rate(&self, from: f64, to: f64) -> Result<f64> {
        let window: Vec<&Sample> = self.samples.iter().filter(|s| s.tau >= from && s.tau <= to).collect();
        if window.len() < 3 {
            return Err(Error::domain(format!("fewer than three samples in [{from}, {to}]")));
        }
        if window.iter().any(|s| !(s.theta.norm() > 0.0)) {
            return Err(Error::domain("order parameter vanishes inside the fit window"));
        }
        let tau: Vec<f64> = window.iter().map(|s| s.tau).collect();
        let log: Vec<f64> = window.iter().map(|s| s.theta.norm().ln()).collect();
        Ok(linear_fit(&tau, &log).0)
    }

    /// Comma-separated table with [`Self::CSV_HEADER`]; floats use the
    /// shortest representation that round-trips.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.len() + 1));
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            let [a, b, c, d] = s.intensities;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                s.tau,
                s.theta.re,
                s.theta.im,
                s.theta.norm(),
                s.v_cm,
                a,
                b,
                c,
                d,
                s.kinetic_energy,
                s.field_momentum
            );
        }
        out
    }
}
