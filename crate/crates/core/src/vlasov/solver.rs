use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::order_parameter;
use super::spline::PeriodicSpline;
use super::{grid_moments, PhaseSpaceGrid};
use crate::model::{potential_coefficient, FieldState};
use crate::nbody::{Sample, TimeSeries};
use crate::{Error, Result, SystemParams};

/// Velocity cells on each edge watched for overflow.
const EDGE_CELLS: usize = 4;

/// Strang-split semi-Lagrangian stepper.
///
/// Each step is a half shift in `chi`, a field update over the full step
/// with the order parameter of the intermediate density held fixed, a full
/// velocity kick driven by the Simpson average of the potential over the
/// step, and a second half shift in `chi`.
#[derive(Debug, Clone)]
pub struct VlasovStepper {
    /// Field decay rate: 1 for the physical model, 0 for closed-system checks.
    pub decay: f64,
    /// Largest mass tolerated in the outer velocity cells.
    pub edge_tolerance: f64,
    nx: usize,
    nv: usize,
    spline_x: PeriodicSpline,
    spline_v: PeriodicSpline,
    phases: Vec<Complex64>,
    transposed: Vec<f64>,
}

impl VlasovStepper {
    pub fn new(grid: &PhaseSpaceGrid, decay: f64) -> Self {
        let (nx, nv) = (grid.nx(), grid.nv());
        let phases = (0..nx)
            .map(|i| {
                let (s, c) = grid.chi(i).sin_cos();
                Complex64::new(c, -s)
            })
            .collect();
        VlasovStepper {
            decay,
            edge_tolerance: 1e-6,
            nx,
            nv,
            spline_x: PeriodicSpline::new(nx),
            spline_v: PeriodicSpline::new(nv),
            phases,
            transposed: vec![0.0; nx * nv],
        }
    }

    fn stream(&mut self, grid: &mut PhaseSpaceGrid, h: f64) {
        let (nx, nv) = (self.nx, self.nv);
        let cells = h / grid.dchi();
        let u: Vec<f64> = (0..nv).map(|j| grid.u(j)).collect();
        let f = grid.values_mut();
        let g = &mut self.transposed;
        for i in 0..nx {
            for j in 0..nv {
                g[j * nx + i] = f[i * nv + j];
            }
        }
        let spline = &self.spline_x;
        g.par_chunks_mut(nx).enumerate().for_each_init(
            || vec![0.0; 2 * nx],
            |work, (j, row)| spline.shift(row, u[j] * cells, work),
        );
        for i in 0..nx {
            for j in 0..nv {
                f[i * nv + j] = g[j * nx + i];
            }
        }
    }

    fn kick(&self, grid: &mut PhaseSpaceGrid, c: Complex64, params: &SystemParams, dt: f64) {
        let nv = self.nv;
        let scale = 2.0 * params.rho_r * params.u0 * dt / grid.du();
        let phases = &self.phases;
        let spline = &self.spline_v;
        grid.values_mut().par_chunks_mut(nv).enumerate().for_each_init(
            || vec![0.0; 2 * nv],
            |work, (i, row)| {
                // Im[C e^{i chi}] with e^{i chi} = conj(phase).
                let s = scale * (c * phases[i].conj()).im;
                spline.shift(row, s, work);
            },
        );
    }

    /// Advances `grid` and `fields` by `dt`; `tau` labels errors.
    pub fn step(
        &mut self,
        grid: &mut PhaseSpaceGrid,
        fields: &mut FieldState,
        params: &SystemParams,
        dt: f64,
        tau: f64,
    ) -> Result<()> {
        if grid.nx() != self.nx || grid.nv() != self.nv {
            return Err(Error::domain("grid shape differs from the stepper's"));
        }
        if !(dt > 0.0) {
            return Err(Error::domain(format!("time step must be positive, got {dt}")));
        }
        self.stream(grid, 0.5 * dt);
        let theta = order_parameter(grid, &self.phases);
        let c0 = potential_coefficient(fields);
        let mid = fields.advance_frozen(theta, params, self.decay, 0.5 * dt);
        let end = mid.advance_frozen(theta, params, self.decay, 0.5 * dt);
        let c_avg = (c0 + potential_coefficient(&mid) * 4.0 + potential_coefficient(&end)) / 6.0;
        self.kick(grid, c_avg, params, dt);
        self.stream(grid, 0.5 * dt);
        *fields = end;
        if !fields.is_finite() || !theta.norm().is_finite() {
            return Err(Error::Diverged { tau: tau + dt });
        }
        let edge = grid.edge_mass(EDGE_CELLS);
        if edge > self.edge_tolerance {
            return Err(Error::DomainOverflow { tau: tau + dt, edge_mass: edge });
        }
        Ok(())
    }
}

/// One step of the physical model (unit field decay).
pub fn vlasov_step(
    grid: &PhaseSpaceGrid,
    fields: &FieldState,
    params: &SystemParams,
    dt: f64,
) -> Result<(PhaseSpaceGrid, FieldState)> {
    let mut g = grid.clone();
    let mut f = *fields;
    VlasovStepper::new(grid, 1.0).step(&mut g, &mut f, params, dt, 0.0)?;
    Ok((g, f))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VlasovSettings {
    pub nx: usize,
    pub nv: usize,
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: f64,
    /// Extra velocity room beyond eight thermal widths on each side.
    pub u_margin: f64,
}

impl Default for VlasovSettings {
    fn default() -> Self {
        VlasovSettings { nx: 256, nv: 512, dt: 0.01, t_end: 10.0, sample_every: 0.1, u_margin: 2.0 }
    }
}

/// Initial density `(1 + modulation cos chi) F(u - mean_u) / 2 pi` with the
/// homogeneous steady-state fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VlasovInit {
    pub mean_u: f64,
    pub modulation: f64,
}

impl Default for VlasovInit {
    fn default() -> Self {
        VlasovInit { mean_u: 0.0, modulation: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub tau: f64,
    pub grid: PhaseSpaceGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VlasovRun {
    pub series: TimeSeries,
    pub snapshots: Vec<Snapshot>,
    pub grid: PhaseSpaceGrid,
    pub fields: FieldState,
    /// Most negative density seen at any sample.
    pub min_value: f64,
}

fn sample(tau: f64, grid: &PhaseSpaceGrid, fields: &FieldState) -> Sample {
    let m = grid_moments(grid);
    Sample {
        tau,
        theta: m.theta,
        v_cm: m.v_cm,
        intensities: fields.intensities(),
        kinetic_energy: m.kinetic_energy,
        field_momentum: fields.momentum(),
    }
}

/// Builds the initial density and integrates it to `settings.t_end`,
/// storing a copy of the grid at the first step at or after each entry of
/// `snapshot_times`.
pub fn run(
    params: &SystemParams,
    init: &VlasovInit,
    settings: &VlasovSettings,
    snapshot_times: &[f64],
) -> Result<VlasovRun> {
    params.validate()?;
    let mut bad = Vec::new();
    if !(settings.dt > 0.0 && settings.dt.is_finite()) {
        bad.push(format!("dt must be positive, got {}", settings.dt));
    }
    if !(settings.t_end >= 0.0 && settings.t_end.is_finite()) {
        bad.push(format!("t_end must be nonnegative, got {}", settings.t_end));
    }
    if !(settings.sample_every > 0.0) {
        bad.push(format!("sample_every must be positive, got {}", settings.sample_every));
    }
    if !bad.is_empty() {
        return Err(Error::Domain(bad.join("; ")));
    }
    let mut grid = PhaseSpaceGrid::maxwellian(
        params,
        settings.nx,
        settings.nv,
        init.mean_u,
        init.modulation,
        settings.u_margin,
    )?;
    let mut fields = FieldState::homogeneous(params);
    let steps = (settings.t_end / settings.dt).round() as usize;
    let stride = ((settings.sample_every / settings.dt).round() as usize).max(1);
    let mut pending: Vec<f64> = snapshot_times.to_vec();
    pending.sort_by(f64::total_cmp);
    pending.reverse();

    let mut stepper = VlasovStepper::new(&grid, 1.0);
    let mut series = TimeSeries::default();
    let mut snapshots = Vec::new();
    let mut min_value = grid.min_value();
    series.push(sample(0.0, &grid, &fields));
    let take = |tau: f64, grid: &PhaseSpaceGrid, pending: &mut Vec<f64>, out: &mut Vec<Snapshot>| {
        let mut hit = false;
        while pending.last().is_some_and(|&t| t <= tau + 1e-9 * settings.dt) {
            pending.pop();
            hit = true;
        }
        if hit {
            out.push(Snapshot { tau, grid: grid.clone() });
        }
    };
    take(0.0, &grid, &mut pending, &mut snapshots);
    for k in 1..=steps {
        let tau_prev = (k - 1) as f64 * settings.dt;
        stepper.step(&mut grid, &mut fields, params, settings.dt, tau_prev)?;
        let tau = k as f64 * settings.dt;
        if k % stride == 0 || k == steps {
            series.push(sample(tau, &grid, &fields));
            min_value = min_value.min(grid.min_value());
        }
        take(tau, &grid, &mut pending, &mut snapshots);
    }
    Ok(VlasovRun { series, snapshots, grid, fields, min_value })
}
