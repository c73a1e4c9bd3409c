//! Artifact files and their text formats.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use carlo::stability::BoundaryCurve;
use carlo::vlasov::PhaseSpaceGrid;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const BOUNDARY_HEADER: &str = "omega,S,A";
pub const PHASE_DIAGRAM_HEADER: &str = "S,A,regime,growth_re,growth_im";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    /// Path relative to the run directory, with `/` separators.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes files below a run directory and keeps the inventory.
#[derive(Debug)]
pub struct ArtifactWriter {
    root: PathBuf,
    files: Vec<FileEntry>,
}

impl ArtifactWriter {
    pub fn new(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root)
            .map_err(|e| CliError::io(format!("cannot create {}: {e}", root.display())))?;
        Ok(ArtifactWriter { root: root.to_path_buf(), files: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, rel: &str, contents: &[u8]) -> CliResult<FileEntry> {
        let entry = write_artifact(&self.root, rel, contents)?;
        self.record(entry.clone());
        Ok(entry)
    }

    /// Adds an entry for a file written elsewhere, replacing any entry with
    /// the same path.
    pub fn record(&mut self, entry: FileEntry) {
        self.files.retain(|f| f.path != entry.path);
        self.files.push(entry);
    }

    pub fn into_files(mut self) -> Vec<FileEntry> {
        self.files.sort_by(|a, b| a.path.cmp(&b.path));
        self.files
    }
}

pub fn write_artifact(root: &Path, rel: &str, contents: &[u8]) -> CliResult<FileEntry> {
    let path = root.join(rel);
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(&path, contents).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
    Ok(FileEntry { path: rel.to_string(), sha256: sha256_hex(contents), bytes: contents.len() as u64 })
}

/// Shortest round-trip text for a float, with `nan` for missing values.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x}")
    }
}

pub fn boundary_csv(curve: &BoundaryCurve) -> String {
    let mut out = String::from(BOUNDARY_HEADER);
    out.push('\n');
    for s in &curve.samples {
        let _ = writeln!(out, "{},{},{}", fmt_f64(s.omega), fmt_f64(s.s_total), fmt_f64(s.a_asym));
    }
    out
}

/// `nx nv` on the first line, then one line of `nv` values per `chi` row.
pub fn snapshot_text(grid: &PhaseSpaceGrid) -> String {
    let (nx, nv) = (grid.nx(), grid.nv());
    let mut out = format!("{nx} {nv}\n");
    for row in grid.values().chunks(nv) {
        let line: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses [`snapshot_text`] back into `(nx, nv, values)`.
pub fn parse_snapshot(text: &str) -> Option<(usize, usize, Vec<f64>)> {
    let mut lines = text.lines();
    let mut head = lines.next()?.split_whitespace();
    let nx: usize = head.next()?.parse().ok()?;
    let nv: usize = head.next()?.parse().ok()?;
    let values: Option<Vec<f64>> =
        lines.flat_map(|l| l.split_whitespace()).map(|t| t.parse().ok()).collect();
    let values = values?;
    (values.len() == nx * nv).then_some((nx, nv, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use carlo::SystemParams;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn snapshot_round_trip() {
        let p = SystemParams::reference(100);
        let g = PhaseSpaceGrid::maxwellian(&p, 8, 16, 0.0, 0.1, 0.0).unwrap();
        let (nx, nv, v) = parse_snapshot(&snapshot_text(&g)).unwrap();
        assert_eq!((nx, nv), (8, 16));
        assert_eq!(v, g.values());
    }

    #[test]
    fn missing_values_print_as_nan() {
        assert_eq!(fmt_f64(f64::NAN), "nan");
        assert_eq!(fmt_f64(0.1), "0.1");
    }
}
