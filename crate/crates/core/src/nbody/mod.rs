//! N-particle dynamics: the four mode equations coupled to Newton's equations
//! for every particle, integrated with a fixed-step RK4 scheme.

mod classify;
mod integrator;
mod run;
mod series;
mod state;

pub(crate) use classify::trailing_window;
pub use classify::{classify_run, ClassifyThresholds, RunClass};
pub use integrator::{step, Rk4};
pub use run::{
    initial_state, run, run_with_final, slow_beam_preset, InitialCondition, Loading, RunSettings,
};
pub use series::{Sample, TimeSeries};
pub use state::{rhs, SimulationState, StateDerivative};
