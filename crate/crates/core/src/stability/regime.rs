use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{carl_bound, max_growth_rate, s_bgk, PumpPoint};
use crate::{Result, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// The homogeneous gas is linearly stable.
    Stable,
    /// Unstable, evolving into a stationary travelling density wave.
    #[serde(rename = "ordered-wave")]
    BgkOrdered,
    /// Unstable with runaway acceleration.
    Carl,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Stable => "stable",
            Regime::BgkOrdered => "ordered-wave",
            Regime::Carl => "carl",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    High,
    /// Cold gas: the BGK threshold is a warm-gas estimate and is not applied.
    Low,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub confidence: Confidence,
    pub dominant_root: Option<Complex64>,
}

/// Analytic regime of a pump point.
///
/// Stable without right half-plane roots; otherwise CARL beyond the
/// asymmetry bound. Below it a warm gas orders once `S > S_BGK` (and runs
/// away before that), while a cold gas is reported as ordered with low
/// confidence.
pub fn classify_regime(point: &PumpPoint, params: &SystemParams) -> Result<RegimeReport> {
    let growth = max_growth_rate(point, params)?;
    let dominant_root = growth.dominant();
    if !growth.is_unstable() {
        return Ok(RegimeReport { regime: Regime::Stable, confidence: Confidence::High, dominant_root });
    }
    if point.ratio().abs() > carl_bound(params) {
        return Ok(RegimeReport { regime: Regime::Carl, confidence: Confidence::High, dominant_root });
    }
    let bgk = s_bgk(params, point.a_asym);
    let (regime, confidence) = match bgk {
        Ok(t) if t.warm_gas => {
            if point.s_total > t.value {
                (Regime::BgkOrdered, Confidence::High)
            } else {
                (Regime::Carl, Confidence::High)
            }
        }
        _ => (Regime::BgkOrdered, Confidence::Low),
    };
    Ok(RegimeReport { regime, confidence, dominant_root })
}
