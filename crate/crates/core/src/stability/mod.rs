//! Linear stability of the spatially homogeneous state.
//!
//! Perturbing the homogeneous gas with a grating `exp(i chi + s tau)` gives
//! the characteristic function
//!
//! ```text
//! D(s) = delta^2 + (s + 1)^2 + [(s + 1) A - i delta S] I(s),
//! I(s) = rho_r N u0^2 / (1 + delta^2) * J(s),
//! J(s) = integral F'(u) / (s + i u) du,
//! ```
//!
//! where `F` is the thermal velocity distribution. The homogeneous state is
//! unstable exactly when `D` has a zero with positive real part.

mod boundary;
mod dispersion;
mod landau;
pub mod quadrature;
mod regime;
mod roots;
mod thresholds;

pub use boundary::{boundary_curve, default_omega_grid, BoundaryCurve, BoundarySample};
pub use dispersion::{dispersion, PumpPoint};
pub use landau::{coupling_prefactor, landau_integral, maxwellian_response};
pub use regime::{classify_regime, Confidence, Regime, RegimeReport};
pub use roots::{max_growth_rate, max_growth_rate_with, GrowthAnalysis, RootSearch};
pub use thresholds::{carl_bound, s_bgk, threshold_sc_a0, BgkThreshold, WARM_GAS_U_T};

