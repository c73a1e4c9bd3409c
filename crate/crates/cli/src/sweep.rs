//! Phase-diagram sweeps over `(S/S_c, A/S)` cells.
//!
//! Each cell is computed independently and stored as `cells/cell_NNNNN.json`.
//! A rerun into the same directory reuses every cell file that the previous
//! manifest lists with a matching checksum and configuration hash.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;

use carlo::nbody::RunClass;
use carlo::stability::{
    boundary_curve, carl_bound, classify_regime, default_omega_grid, s_bgk, threshold_sc_a0, Confidence,
    PumpPoint, Regime,
};
use carlo::SystemParams;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::experiment::{nbody_series, thresholds, RunOptions};
use crate::manifest::{ErrorRecord, RunManifest};
use crate::output::{fmt_f64, write_artifact, ArtifactWriter, PHASE_DIAGRAM_HEADER};
use crate::svg;

pub const PHASE_DIAGRAM_FILE: &str = "phase_diagram.csv";

/// Relative distance in `S` (and in `A/S` from the CARL bound) beyond which
/// a cell counts as away from every regime boundary.
pub const BOUNDARY_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub index: usize,
    pub s_over_sc: f64,
    pub a_over_s: f64,
    pub s_total: f64,
    pub a_asym: f64,
    pub regime: Option<Regime>,
    pub confidence: Option<Confidence>,
    pub growth_re: Option<f64>,
    pub growth_im: Option<f64>,
    pub dynamic: Option<RunClass>,
    /// Whether the cell lies more than [`BOUNDARY_MARGIN`] from the regime
    /// boundaries.
    pub interior: bool,
    pub error: Option<ErrorRecord>,
}

pub fn cell_path(index: usize) -> String {
    format!("cells/cell_{index:05}.json")
}

struct Grid {
    base: SystemParams,
    sc: f64,
    bound: f64,
    s_crit: BTreeMap<u64, Option<f64>>,
}

impl Grid {
    fn interior(&self, s_over_sc: f64, a_over_s: f64, s: f64, a: f64) -> bool {
        let far = |x: f64, edge: f64| edge <= 0.0 || (x / edge - 1.0).abs() > BOUNDARY_MARGIN;
        let crit = self.s_crit.get(&a_over_s.to_bits()).copied().flatten();
        let mut ok = crit.is_none_or(|c| far(s, c)) && far(a_over_s.abs(), self.bound);
        if a_over_s.abs() < self.bound {
            if let Ok(t) = s_bgk(&self.base, a) {
                if t.warm_gas {
                    ok &= far(s, t.value);
                }
            }
        }
        ok && s_over_sc > 0.0
    }
}

fn compute_cell(cfg: &RunConfig, grid: &Grid, index: usize, s_over_sc: f64, a_over_s: f64, dynamic: bool) -> CellRecord {
    let s = s_over_sc * grid.sc;
    let a = a_over_s * s;
    let mut rec = CellRecord {
        index,
        s_over_sc,
        a_over_s,
        s_total: s,
        a_asym: a,
        regime: None,
        confidence: None,
        growth_re: None,
        growth_im: None,
        dynamic: None,
        interior: grid.interior(s_over_sc, a_over_s, s, a),
        error: None,
    };
    let result = (|| -> CliResult<()> {
        let params = grid.base.with_pump(s, a)?;
        let report = classify_regime(&PumpPoint::new(s, a)?, &params)?;
        rec.regime = Some(report.regime);
        rec.confidence = Some(report.confidence);
        if let Some(r) = report.dominant_root {
            rec.growth_re = Some(r.re);
            rec.growth_im = Some(r.im);
        }
        if dynamic {
            let p = params.with_seed(cfg.seed.wrapping_add(index as u64));
            let series = nbody_series(cfg, &p)?;
            rec.dynamic = Some(carlo::nbody::classify_run(&series, &p, &thresholds(cfg))?);
        }
        Ok(())
    })();
    if let Err(e) = result {
        rec.error = Some(ErrorRecord { kind: e.kind, message: e.message });
    }
    rec
}

/// Cells from a previous run of the same configuration whose files are
/// intact.
fn reusable(cfg_sha: &str, w: &ArtifactWriter, previous: Option<&RunManifest>) -> BTreeMap<usize, CellRecord> {
    let mut out = BTreeMap::new();
    let Some(prev) = previous.filter(|m| m.config_sha256 == cfg_sha) else {
        return out;
    };
    for entry in prev.verified_files(w.root()) {
        if !entry.path.starts_with("cells/") {
            continue;
        }
        let Ok(text) = fs::read_to_string(w.root().join(&entry.path)) else { continue };
        if let Ok(rec) = serde_json::from_str::<CellRecord>(&text) {
            if rec.error.is_none() && cell_path(rec.index) == entry.path {
                out.insert(rec.index, rec);
            }
        }
    }
    out
}

fn csv(cells: &[CellRecord], dynamic: bool) -> String {
    let mut out = String::from(PHASE_DIAGRAM_HEADER);
    if dynamic {
        out.push_str(",dynamic_regime");
    }
    out.push('\n');
    for c in cells {
        let regime = c.regime.map_or("error", |r| r.as_str());
        let _ = write!(
            out,
            "{},{},{},{},{}",
            fmt_f64(c.s_total),
            fmt_f64(c.a_asym),
            regime,
            fmt_f64(c.growth_re.unwrap_or(f64::NAN)),
            fmt_f64(c.growth_im.unwrap_or(f64::NAN)),
        );
        if dynamic {
            out.push(',');
            out.push_str(c.dynamic.map_or("error", |d| d.regime.as_str()));
        }
        out.push('\n');
    }
    out
}

pub(crate) fn run_sweep(
    cfg: &RunConfig,
    w: &mut ArtifactWriter,
    opts: &RunOptions,
    previous: Option<&RunManifest>,
) -> CliResult<Value> {
    let sweep = cfg.sweep.as_ref().ok_or_else(|| CliError::validation("phase-diagram needs a sweep grid"))?;
    let base = cfg.base_params();
    let sc = threshold_sc_a0(&base)?;
    let curve = boundary_curve(&base, &default_omega_grid(&base));
    let s_crit = sweep.a_over_s.iter().map(|&r| (r.to_bits(), curve.critical_pump(r, &base))).collect();
    let grid = Grid { base, sc, bound: carl_bound(&base), s_crit };

    let cfg_sha = crate::output::sha256_hex(cfg.to_toml().as_bytes());
    let old = reusable(&cfg_sha, w, previous);
    let na = sweep.a_over_s.len();
    let jobs: Vec<(usize, f64, f64)> = sweep
        .s_over_sc
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| sweep.a_over_s.iter().enumerate().map(move |(j, &a)| (i * na + j, s, a)))
        .collect();

    let root = w.root().to_path_buf();
    let fresh: Vec<(CellRecord, crate::output::FileEntry)> = jobs
        .par_iter()
        .filter(|(k, _, _)| !old.contains_key(k))
        .map(|&(k, s, a)| {
            let rec = compute_cell(cfg, &grid, k, s, a, sweep.dynamic);
            let text = serde_json::to_string_pretty(&rec).expect("cell serialises") + "\n";
            write_artifact(&root, &cell_path(k), text.as_bytes()).map(|e| (rec, e))
        })
        .collect::<CliResult<_>>()?;
    let computed = fresh.len();
    let reused = old.len();

    let mut cells: Vec<CellRecord> = old.into_values().collect();
    for (rec, entry) in fresh {
        w.record(entry);
        cells.push(rec);
    }
    if let Some(prev) = previous.filter(|m| m.config_sha256 == cfg_sha) {
        for e in prev.verified_files(&root) {
            if cells.iter().any(|c| cell_path(c.index) == e.path) {
                w.record(e.clone());
            }
        }
    }
    cells.sort_by_key(|c| c.index);

    w.write(PHASE_DIAGRAM_FILE, csv(&cells, sweep.dynamic).as_bytes())?;
    if opts.svg {
        let pts: Vec<(f64, f64, &str)> = cells
            .iter()
            .map(|c| (c.a_over_s, c.s_over_sc, c.regime.map_or("error", |r| r.as_str())))
            .collect();
        w.write("phase_diagram.svg", svg::scatter_plot("phase diagram", "A/S", "S / S_c(A=0)", &pts).as_bytes())?;
    }

    let failed = cells.iter().filter(|c| c.error.is_some()).count();
    let mut results = json!({
        "cells": cells.len(),
        "computed": computed,
        "reused": reused,
        "failed": failed,
        "sc_a0": sc,
        "carl_bound": grid.bound,
    });
    if sweep.dynamic {
        let unstable = |r: Regime| r != Regime::Stable;
        let interior: Vec<(&CellRecord, Regime, Regime)> = cells
            .iter()
            .filter(|c| c.interior)
            .filter_map(|c| Some((c, c.regime?, c.dynamic?.regime)))
            .collect();
        // Low-confidence analytic labels are defaults, not predictions.
        let labelled: Vec<_> = interior.iter().filter(|(c, _, _)| c.confidence == Some(Confidence::High)).collect();
        let agree = labelled.iter().filter(|(_, a, d)| a == d).count();
        let stab_agree = interior.iter().filter(|(_, a, d)| unstable(*a) == unstable(*d)).count();
        let frac = |n: usize, of: usize| if of == 0 { Value::Null } else { json!(n as f64 / of as f64) };
        results["agreement"] = json!({
            "interior_cells": labelled.len(),
            "agree": agree,
            "fraction": frac(agree, labelled.len()),
        });
        results["stability_agreement"] = json!({
            "interior_cells": interior.len(),
            "agree": stab_agree,
            "fraction": frac(stab_agree, interior.len()),
        });
    }
    Ok(results)
}
