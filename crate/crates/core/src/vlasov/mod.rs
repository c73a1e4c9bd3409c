//! Mean-field kinetic solver: the Vlasov equation for the one-body density
//! `f(chi, u)` coupled to the mode equations.

mod grid;
mod solver;
mod spline;

pub use grid::{grid_moments, GridMoments, PhaseSpaceGrid};
pub use solver::{run, vlasov_step, Snapshot, VlasovInit, VlasovRun, VlasovSettings, VlasovStepper};
