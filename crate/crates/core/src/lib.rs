//! Collective dynamics of polarizable particles in a ring cavity driven by two
//! counterpropagating, orthogonally polarized pump beams.
//!
//! The crate works in cavity units: the field decay rate is one, time is
//! `tau = kappa t`, positions are the grating phase `chi = 2 k x` and
//! velocities are `u = 2 k v / kappa`. See [`model`] for the full mapping.
//!
//! * [`model`]: parameters, field amplitudes, particle ensembles, the order
//!   parameter and the optical force.
//! * [`nbody`]: the coupled mode/particle equations integrated with RK4.
//! * [`vlasov`]: the mean-field limit on a periodic phase-space grid.
//! * [`stability`]: the dispersion relation of the homogeneous state, its
//!   right half-plane roots, the marginal-stability curve and thresholds.
//! * [`bgk`]: relations obeyed by stationary travelling density waves.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bgk;
pub mod error;
pub mod model;
pub mod nbody;
pub mod stability;
pub mod vlasov;

mod fit;

pub use error::{Error, Result};
pub use model::{FieldState, OrderParameter, ParticleEnsemble, SimRng, SystemParams};
pub use num_complex::Complex64;
