use std::fs;
use std::path::Path;

use carlo::stability::{carl_bound, s_bgk, threshold_sc_a0};
use carlo::SystemParams;
use serde::{Deserialize, Serialize};

use crate::config::{parse_config, RunConfig};
use crate::error::{CliError, CliResult, ErrorKind};
use crate::output::{sha256_hex, FileEntry};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Threshold quantities of the configured pump point. Entries that are
/// undefined for the parameters (for instance `S_c` of a cold gas) are
/// omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Derived {
    pub s_total: f64,
    pub a_asym: f64,
    pub relative_asymmetry: f64,
    pub u0: f64,
    pub sc_a0: Option<f64>,
    pub carl_bound: f64,
    pub s_bgk: Option<f64>,
}

impl Derived {
    pub fn of(params: &SystemParams) -> Self {
        Derived {
            s_total: params.s_total(),
            a_asym: params.asymmetry(),
            relative_asymmetry: params.relative_asymmetry(),
            u0: params.u0,
            sc_a0: threshold_sc_a0(params).ok(),
            carl_bound: carl_bound(params),
            s_bgk: s_bgk(params, params.asymmetry()).ok().map(|t| t.value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: ErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub mode: String,
    pub version: String,
    pub started: String,
    pub finished: String,
    /// Canonical configuration text; parsing it reproduces the run inputs.
    pub config: String,
    pub config_sha256: String,
    pub derived: Option<Derived>,
    pub status: Status,
    pub error: Option<ErrorRecord>,
    pub results: serde_json::Value,
    pub files: Vec<FileEntry>,
}

impl RunManifest {
    pub fn config(&self) -> CliResult<RunConfig> {
        parse_config(&self.config).map_err(CliError::from)
    }

    pub fn read(dir: &Path) -> CliResult<Option<RunManifest>> {
        let path = dir.join(MANIFEST_FILE);
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| CliError::io(format!("malformed {}: {e}", path.display())))
    }

    pub fn write(&self, dir: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serialises") + "\n";
        let path = dir.join(MANIFEST_FILE);
        fs::write(&path, text).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
    }

    /// Files whose current contents match the recorded checksum.
    pub fn verified_files(&self, dir: &Path) -> Vec<&FileEntry> {
        self.files
            .iter()
            .filter(|f| fs::read(dir.join(&f.path)).is_ok_and(|b| sha256_hex(&b) == f.sha256))
            .collect()
    }
}
