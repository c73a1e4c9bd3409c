use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, SystemParams};

/// One-body distribution `f(chi, u)` sampled on a periodic `chi` grid
/// `chi_i = i * 2 pi / nx` and a truncated velocity grid of cell centres
/// `u_j = u_min + (j + 1/2) du`. Values are stored `chi`-major:
/// `f[i * nv + j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    nx: usize,
    nv: usize,
    u_min: f64,
    du: f64,
    f: Vec<f64>,
}

/// Quadrature moments of a [`PhaseSpaceGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMoments {
    pub mass: f64,
    pub theta: Complex64,
    pub v_cm: f64,
    pub kinetic_energy: f64,
}

impl PhaseSpaceGrid {
    /// Samples `density` on the grid and normalises the result to unit mass.
    pub fn from_fn<F>(nx: usize, nv: usize, u_min: f64, u_max: f64, density: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64,
    {
        if nx < 8 || nv < 8 {
            return Err(Error::domain(format!("grid must be at least 8 x 8, got {nx} x {nv}")));
        }
        if !(u_max > u_min) || !u_min.is_finite() || !u_max.is_finite() {
            return Err(Error::domain(format!("invalid velocity window [{u_min}, {u_max}]")));
        }
        let du = (u_max - u_min) / nv as f64;
        let mut g = PhaseSpaceGrid { nx, nv, u_min, du, f: vec![0.0; nx * nv] };
        for i in 0..nx {
            let chi = g.chi(i);
            for j in 0..nv {
                g.f[i * nv + j] = density(chi, g.u(j));
            }
        }
        let mass = g.mass();
        if !(mass > 0.0 && mass.is_finite()) || g.f.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("density must be finite with positive mass"));
        }
        for v in g.f.iter_mut() {
            *v /= mass;
        }
        Ok(g)
    }

    /// `(1 + modulation cos chi) F(u) / 2 pi` with the Maxwellian of
    /// `params.u_t` centred on `mean_u`. The velocity window spans
    /// `8 u_t / sqrt 2 + u_margin` on either side of the mean.
    pub fn maxwellian(
        params: &SystemParams,
        nx: usize,
        nv: usize,
        mean_u: f64,
        modulation: f64,
        u_margin: f64,
    ) -> Result<Self> {
        if !(params.u_t > 0.0) {
            return Err(Error::domain("the kinetic solver needs a warm gas (u_t > 0)"));
        }
        if !(modulation.abs() < 1.0) {
            return Err(Error::domain(format!("modulation must satisfy |eps| < 1, got {modulation}")));
        }
        if !(u_margin >= 0.0) {
            return Err(Error::domain(format!("u_margin must be nonnegative, got {u_margin}")));
        }
        let half = 8.0 * params.u_t / std::f64::consts::SQRT_2 + u_margin;
        let u_t = params.u_t;
        Self::from_fn(nx, nv, mean_u - half, mean_u + half, |chi, u| {
            (1.0 + modulation * chi.cos()) * (-((u - mean_u) / u_t).powi(2)).exp() / (PI.sqrt() * u_t * TAU)
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn dchi(&self) -> f64 {
        TAU / self.nx as f64
    }

    pub fn du(&self) -> f64 {
        self.du
    }

    pub fn u_min(&self) -> f64 {
        self.u_min
    }

    pub fn u_max(&self) -> f64 {
        self.u_min + self.du * self.nv as f64
    }

    pub fn chi(&self, i: usize) -> f64 {
        self.dchi() * i as f64
    }

    pub fn u(&self, j: usize) -> f64 {
        self.u_min + (j as f64 + 0.5) * self.du
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.f[i * self.nv + j]
    }

    /// Row-major values, `chi` index slowest.
    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.f
    }

    pub fn mass(&self) -> f64 {
        self.f.iter().sum::<f64>() * self.dchi() * self.du
    }

    /// Most negative value, a health metric for interpolation undershoot.
    pub fn min_value(&self) -> f64 {
        self.f.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Mass held in the outer `width` velocity cells on both edges.
    pub fn edge_mass(&self, width: usize) -> f64 {
        let w = width.min(self.nv / 2);
        let mut sum = 0.0;
        for i in 0..self.nx {
            let row = &self.f[i * self.nv..(i + 1) * self.nv];
            sum += row[..w].iter().map(|v| v.abs()).sum::<f64>();
            sum += row[self.nv - w..].iter().map(|v| v.abs()).sum::<f64>();
        }
        sum * self.dchi() * self.du
    }

    /// Velocity distribution averaged over `chi`, normalised per unit `u`.
    pub fn velocity_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.nv];
        for i in 0..self.nx {
            for (o, v) in out.iter_mut().zip(&self.f[i * self.nv..(i + 1) * self.nv]) {
                *o += v;
            }
        }
        out.iter().map(|v| v * self.dchi()).collect()
    }
}

/// Midpoint-rule moments, consistent with the cell-centred scheme. Negative
/// undershoot is clamped to zero.
pub fn grid_moments(grid: &PhaseSpaceGrid) -> GridMoments {
    let (nx, nv) = (grid.nx, grid.nv);
    let w = grid.dchi() * grid.du;
    let mut mass = 0.0;
    let mut theta = Complex64::new(0.0, 0.0);
    let mut first = 0.0;
    let mut second = 0.0;
    for i in 0..nx {
        let row = &grid.f[i * nv..(i + 1) * nv];
        let mut m0 = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (j, &v) in row.iter().enumerate() {
            let v = v.max(0.0);
            let u = grid.u(j);
            m0 += v;
            m1 += v * u;
            m2 += v * u * u;
        }
        mass += m0;
        first += m1;
        second += m2;
        let (s, c) = grid.chi(i).sin_cos();
        theta += Complex64::new(c, -s) * m0;
    }
    GridMoments {
        mass: mass * w,
        theta: theta * w,
        v_cm: first / mass,
        kinetic_energy: 0.5 * second / mass,
    }
}

/// Raw `sum f e^{-i chi} dchi du`, without clamping; used for the coupling.
pub(crate) fn order_parameter(grid: &PhaseSpaceGrid, phases: &[Complex64]) -> Complex64 {
    let nv = grid.nv;
    let mut theta = Complex64::new(0.0, 0.0);
    for (i, ph) in phases.iter().enumerate() {
        let m0: f64 = grid.f[i * nv..(i + 1) * nv].iter().sum();
        theta += ph * m0;
    }
    theta * grid.dchi() * grid.du
}
