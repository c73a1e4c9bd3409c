use std::f64::consts::TAU;

use carlo::stability::{max_growth_rate, threshold_sc_a0, PumpPoint};
use carlo::vlasov::{grid_moments, run, PhaseSpaceGrid, VlasovInit, VlasovSettings, VlasovStepper};
use carlo::{Complex64, FieldState, SystemParams};

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn pumped(factor: f64, ratio: f64) -> SystemParams {
    let p = SystemParams::reference(10_000);
    let s = factor * threshold_sc_a0(&p).unwrap();
    p.with_pump(s, ratio * s).unwrap()
}

#[test]
fn free_streaming_conserves_velocity_moments() {
    let mut p = pumped(2.0, 0.3);
    p.u0 = 0.0;
    let mut grid = PhaseSpaceGrid::maxwellian(&p, 64, 128, 0.4, 0.5, 1.0).unwrap();
    let mut fields = FieldState::homogeneous(&p);
    let marginal0 = grid.velocity_marginal();
    let m0 = grid_moments(&grid);
    let mut stepper = VlasovStepper::new(&grid, 1.0);
    for k in 0..1000 {
        stepper.step(&mut grid, &mut fields, &p, 0.013, k as f64 * 0.013).unwrap();
    }
    assert!((grid.mass() - 1.0).abs() < 1e-10);
    let marginal = grid.velocity_marginal();
    let du = grid.du();
    for power in 0..4 {
        let moment = |m: &[f64]| (0..m.len()).map(|j| m[j] * grid.u(j).powi(power) * du).sum::<f64>();
        let (a, b) = (moment(&marginal0), moment(&marginal));
        assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "moment {power}: {a} vs {b}");
    }
    // The density itself has filamented.
    let m = grid_moments(&grid);
    assert!(m.theta.norm() < 0.5 * m0.theta.norm());
}

#[test]
fn homogeneous_steady_state_is_stationary() {
    let p = pumped(2.0, 0.3);
    let mut grid = PhaseSpaceGrid::maxwellian(&p, 64, 256, 0.0, 0.0, 1.0).unwrap();
    let mut fields = FieldState::homogeneous(&p);
    let f0 = grid.values().to_vec();
    let fields0 = fields;
    let peak = f0.iter().copied().fold(0.0, f64::max);
    let mut stepper = VlasovStepper::new(&grid, 1.0);
    let mut prev = f0.clone();
    for k in 0..50 {
        stepper.step(&mut grid, &mut fields, &p, 0.01, k as f64 * 0.01).unwrap();
        assert!(max_diff(&prev, grid.values()) <= 1e-12 * peak);
        prev = grid.values().to_vec();
    }
    for (a, b) in fields.to_array().iter().zip(fields0.to_array()) {
        assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
    }
}

#[test]
fn integer_cell_streaming_is_exact() {
    let mut p = SystemParams::reference(100);
    p.u0 = 0.0;
    let (nx, nv, du) = (64, 32, 0.5);
    let dchi = TAU / nx as f64;
    let u_min = -(nv as f64) / 2.0 * du;
    let mut grid = PhaseSpaceGrid::from_fn(nx, nv, u_min, u_min + nv as f64 * du, |chi, u| {
        1.0 + 0.3 * (3.0 * chi).sin() * (-(u * u)).exp() + 0.1 * (chi * 7.0).cos().powi(3)
    })
    .unwrap();
    let f0 = grid.values().to_vec();
    // Half-step shifts u_j dt / 2 / dchi = 2 j - nv + 1 cells.
    let dt = 4.0 * dchi / du;
    let mut fields = FieldState::homogeneous(&p);
    let mut stepper = VlasovStepper::new(&grid, 1.0);
    stepper.edge_tolerance = f64::INFINITY;
    stepper.step(&mut grid, &mut fields, &p, dt, 0.0).unwrap();
    for i in 0..nx {
        for j in 0..nv {
            let cells = 2 * (2 * j as i64 - nv as i64 + 1);
            let src = (i as i64 - cells).rem_euclid(nx as i64) as usize;
            assert_eq!(grid.value(i, j), f0[src * nv + j]);
        }
    }
}

#[test]
fn closed_system_conserves_kinetic_momentum() {
    let mut p = pumped(2.0, 0.5);
    let mut fields = FieldState::homogeneous(&p);
    let a = fields.alpha_plus.norm();
    fields = FieldState::new(
        Complex64::new(a, 0.0),
        Complex64::new(0.2 * a, 0.1 * a),
        Complex64::new(-0.1 * a, 0.3 * a),
        Complex64::new(0.4 * a, 0.0),
    );
    p.eta_plus = Complex64::new(0.0, 0.0);
    p.eta_minus = Complex64::new(0.0, 0.0);
    let mut grid = PhaseSpaceGrid::maxwellian(&p, 128, 256, 0.0, 0.1, 4.0).unwrap();
    let n = p.n_particles as f64;
    let total = |g: &PhaseSpaceGrid, f: &FieldState| {
        let first: f64 = (0..g.nx())
            .flat_map(|i| (0..g.nv()).map(move |j| (i, j)))
            .map(|(i, j)| g.value(i, j) * g.u(j))
            .sum::<f64>()
            * g.dchi()
            * g.du();
        2.0 * n / p.rho_r * first + f.momentum()
    };
    let scale = 2.0 * n / p.rho_r * p.u_t + fields.intensities().iter().sum::<f64>();
    let p0 = total(&grid, &fields);
    let pf0 = fields.momentum();
    let mut stepper = VlasovStepper::new(&grid, 0.0);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        stepper.step(&mut grid, &mut fields, &p, 0.01, k as f64 * 0.01).unwrap();
        worst = worst.max((total(&grid, &fields) - p0).abs() / scale);
    }
    assert!(worst < 1e-6, "relative drift {worst}");
    assert!((fields.momentum() - pf0).abs() > 1e-4 * scale);
}

#[test]
fn linear_growth_matches_dispersion_root() {
    let p = pumped(2.0, 0.3);
    let expected = max_growth_rate(&PumpPoint::of(&p), &p).unwrap().dominant().unwrap().re;
    let settings = VlasovSettings { nx: 64, nv: 256, dt: 0.02, t_end: 16.0, sample_every: 0.1, u_margin: 1.0 };
    let out = run(&p, &VlasovInit { mean_u: 0.0, modulation: 1e-6 }, &settings, &[]).unwrap();
    let fitted = out.series.fitted_growth_rate(8.0, 16.0).unwrap();
    assert!((fitted / expected - 1.0).abs() < 0.05, "fitted {fitted} vs {expected}");
    assert!(out.series.max_abs_theta() < 1e-2);
}
