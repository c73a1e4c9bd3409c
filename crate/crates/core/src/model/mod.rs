//! Shared domain types and the dimensionless unit system.
//!
//! Every quantity is measured in units of the cavity field decay rate
//! `kappa`:
//!
//! | symbol    | meaning                                   |
//! |-----------|-------------------------------------------|
//! | `tau`     | `kappa t`                                 |
//! | `chi`     | `2 k x`, the phase of the density grating |
//! | `u`       | `2 k v / kappa`                           |
//! | `delta`   | effective detuning `(Delta_c - N U0) / kappa` |
//! | `u0`      | `U0 / kappa`                              |
//! | `eta_pm`  | pump amplitudes `eta_pm / kappa`          |
//! | `rho_r`   | `2 k v_R / kappa` with `v_R = 2 hbar k / m` |
//! | `u_t`     | `2 k v_T / kappa`                         |
//!
//! In these units the four mode equations read
//! `d alpha_+ / d tau = (i delta - 1) alpha_+ - i N u0 theta alpha_- + eta_+`
//! (and likewise for the other modes), the particles stream with
//! `d chi / d tau = u`, and the kick is `du / d tau = 2 rho_r u0 Im[C e^{i chi}]`
//! with `C = alpha_+ alpha_-^* + beta_+ beta_-^*`.

mod ensemble;
mod field;
mod params;
mod potential;
mod sampling;

pub use ensemble::{order_parameter_of, wrap_phase, OrderParameter, ParticleEnsemble};
pub use field::FieldState;
pub use params::SystemParams;
pub use potential::{force, force_from_coefficient, potential, potential_coefficient};
pub use sampling::{sample_maxwellian, SimRng};
