use serde::{Deserialize, Serialize};

use crate::{Error, Result, SystemParams};

/// `u_t` from which the warm-gas BGK threshold is trusted (`k v_T >= 10 kappa`).
pub const WARM_GAS_U_T: f64 = 20.0;

/// Instability threshold for equal pump intensities,
/// `S_c = u_t^2 (1 + delta^2)^2 / (2 rho_r N u0^2 |delta|)`.
///
/// This is `k_B T (kappa^2 + delta^2)^2 / (hbar N U0^2 |delta|)` in cavity
/// units, using `k_B T / hbar = kappa u_t^2 / (2 rho_r)`.
pub fn threshold_sc_a0(params: &SystemParams) -> Result<f64> {
    if params.delta == 0.0 {
        return Err(Error::domain("threshold diverges at delta = 0"));
    }
    let nu2 = params.n_particles as f64 * params.u0 * params.u0;
    if nu2 == 0.0 {
        return Err(Error::domain("threshold diverges without coupling"));
    }
    let d2 = 1.0 + params.delta * params.delta;
    Ok(params.u_t * params.u_t * d2 * d2 / (2.0 * params.rho_r * nu2 * params.delta.abs()))
}

/// Relative asymmetry `|delta| / sqrt(1 + delta^2)` above which no stationary
/// travelling wave exists.
pub fn carl_bound(params: &SystemParams) -> f64 {
    params.delta.abs() / (1.0 + params.delta * params.delta).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BgkThreshold {
    pub value: f64,
    /// Whether `u_t >= WARM_GAS_U_T`, the regime the estimate is made for.
    pub warm_gas: bool,
}

/// Pump above which a warm gas settles into a travelling wave:
/// `S_c [1 + (rho_r N u0^2 A / (u_t^2 sqrt(1 + delta^2)))^2]`.
pub fn s_bgk(params: &SystemParams, a_asym: f64) -> Result<BgkThreshold> {
    if params.u_t == 0.0 {
        return Err(Error::domain("BGK threshold needs a finite temperature"));
    }
    let sc = threshold_sc_a0(params)?;
    let nu2 = params.n_particles as f64 * params.u0 * params.u0;
    let x = params.rho_r * nu2 * a_asym
        / (params.u_t * params.u_t * (1.0 + params.delta * params.delta).sqrt());
    Ok(BgkThreshold { value: sc * (1.0 + x * x), warm_gas: params.u_t >= WARM_GAS_U_T })
}
