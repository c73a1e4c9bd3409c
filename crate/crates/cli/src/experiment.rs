use std::path::Path;

use carlo::bgk::validate_wave;
use carlo::nbody::{classify_run, ClassifyThresholds, InitialCondition, Loading, RunSettings, TimeSeries};
use carlo::stability::{boundary_curve, classify_regime, default_omega_grid, threshold_sc_a0, PumpPoint};
use carlo::vlasov::{VlasovInit, VlasovSettings};
use carlo::SystemParams;
use chrono::{SecondsFormat, Utc};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{LoadingKind, Mode, RunConfig};
use crate::error::{CliError, CliResult};
use crate::manifest::{Derived, ErrorRecord, RunManifest, Status};
use crate::output::{boundary_csv, fmt_f64, sha256_hex, snapshot_text, ArtifactWriter};
use crate::svg;
use crate::sweep::run_sweep;

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const CONFIG_FILE: &str = "config.toml";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Also write SVG plots next to the CSV files.
    pub svg: bool,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Runs the configured mode, writing artifacts and `manifest.json` into
/// `out`. A failed run still leaves a manifest describing the failure.
pub fn run_experiment(cfg: &RunConfig, out: &Path, opts: &RunOptions) -> CliResult<RunManifest> {
    let started = now();
    let previous = if cfg.mode == Mode::PhaseDiagram { RunManifest::read(out).ok().flatten() } else { None };
    let mut writer = ArtifactWriter::new(out)?;
    let config = cfg.to_toml();
    writer.write(CONFIG_FILE, config.as_bytes())?;
    let derived = match (&cfg.pump, cfg.params()) {
        (Some(_), Ok(p)) => Some(Derived::of(&p)),
        _ => None,
    };
    let outcome = execute(cfg, &mut writer, opts, previous.as_ref());
    let (status, error, results) = match &outcome {
        Ok(r) => (Status::Ok, None, r.clone()),
        Err(e) => (Status::Failed, Some(ErrorRecord { kind: e.kind, message: e.message.clone() }), Value::Null),
    };
    let manifest = RunManifest {
        mode: cfg.mode.as_str().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        started,
        finished: now(),
        config_sha256: sha256_hex(config.as_bytes()),
        config,
        derived,
        status,
        error,
        results,
        files: writer.into_files(),
    };
    manifest.write(out)?;
    outcome.map(|_| manifest)
}

fn execute(
    cfg: &RunConfig,
    w: &mut ArtifactWriter,
    opts: &RunOptions,
    previous: Option<&RunManifest>,
) -> CliResult<Value> {
    let params = cfg.params()?;
    match cfg.mode {
        Mode::Nbody => {
            let series = nbody_series(cfg, &params)?;
            write_series(w, opts, &series)?;
            Ok(classification(&series, &params, cfg)?)
        }
        Mode::Classify => {
            let report = classify_regime(&PumpPoint::of(&params), &params)?;
            let series = nbody_series(cfg, &params)?;
            write_series(w, opts, &series)?;
            let mut out = classification(&series, &params, cfg)?;
            let agree = out["classification"]["regime"] == json!(report.regime);
            out["analytic"] = json!(report);
            out["agree"] = json!(agree);
            Ok(out)
        }
        Mode::ValidateWave => {
            let series = nbody_series(cfg, &params)?;
            write_series(w, opts, &series)?;
            let mut out = classification(&series, &params, cfg)?;
            match validate_wave(&series, &params, &thresholds(cfg)) {
                Ok(v) => out["wave"] = json!(v),
                Err(carlo::Error::Domain(reason)) => {
                    out["wave"] = Value::Null;
                    out["not_settled"] = json!(reason);
                }
                Err(e) => return Err(e.into()),
            }
            Ok(out)
        }
        Mode::SlowBeam => {
            let series = carlo::nbody::slow_beam_preset(&params, cfg.solver.v_initial, &run_settings(cfg))?;
            write_series(w, opts, &series)?;
            let mut out = classification(&series, &params, cfg)?;
            let initial = series.samples.first().map_or(f64::NAN, |s| s.v_cm);
            let last = series.last().map_or(0.0, |s| s.tau);
            let tail = series.since(last - cfg.solver.tail_fraction * last);
            let final_v = tail.iter().map(|s| s.v_cm).sum::<f64>() / tail.len() as f64;
            out["initial_v_cm"] = json!(initial);
            out["final_v_cm"] = json!(final_v);
            out["reduction"] = json!(1.0 - final_v.abs() / initial.abs());
            Ok(out)
        }
        Mode::Vlasov => run_vlasov(cfg, &params, w, opts),
        Mode::StabilityBoundary => run_boundaries(cfg, &params, w, opts),
        Mode::PhaseDiagram => run_sweep(cfg, w, opts, previous),
    }
}

/// `{"classification": ...}`, or a null entry with the reason when the run
/// is too short to classify.
fn classification(series: &TimeSeries, params: &SystemParams, cfg: &RunConfig) -> CliResult<Value> {
    match classify_run(series, params, &thresholds(cfg)) {
        Ok(c) => Ok(json!({ "classification": c })),
        Err(carlo::Error::Domain(reason)) => Ok(json!({ "classification": null, "unclassified": reason })),
        Err(e) => Err(e.into()),
    }
}

pub fn thresholds(cfg: &RunConfig) -> ClassifyThresholds {
    ClassifyThresholds {
        theta_min: cfg.solver.theta_min,
        slope_tol: cfg.solver.slope_tol,
        tail_fraction: cfg.solver.tail_fraction,
    }
}

fn run_settings(cfg: &RunConfig) -> RunSettings {
    RunSettings { dt: cfg.solver.dt, t_end: cfg.solver.t_end, sample_every: cfg.solver.sample_every }
}

pub fn nbody_series(cfg: &RunConfig, params: &SystemParams) -> CliResult<TimeSeries> {
    let loading = match cfg.solver.loading {
        LoadingKind::Jittered => Loading::Jittered { jitter: cfg.solver.jitter },
        LoadingKind::Quiet => Loading::Quiet { modulation: cfg.solver.modulation },
    };
    let init = InitialCondition { mean_u: cfg.solver.v_initial, loading };
    Ok(carlo::nbody::run(params, &init, &run_settings(cfg))?)
}

fn write_series(w: &mut ArtifactWriter, opts: &RunOptions, series: &TimeSeries) -> CliResult<()> {
    w.write(TIMESERIES_FILE, series.to_csv().as_bytes())?;
    if opts.svg {
        let theta: Vec<(f64, f64)> = series.samples.iter().map(|s| (s.tau, s.theta.norm())).collect();
        let v: Vec<(f64, f64)> = series.samples.iter().map(|s| (s.tau, s.v_cm)).collect();
        w.write("theta.svg", svg::line_plot("order parameter", "tau", "|theta|", &[("|theta|", theta)]).as_bytes())?;
        w.write("v_cm.svg", svg::line_plot("centre of mass", "tau", "v_cm", &[("v_cm", v)]).as_bytes())?;
    }
    Ok(())
}

fn run_vlasov(cfg: &RunConfig, params: &SystemParams, w: &mut ArtifactWriter, opts: &RunOptions) -> CliResult<Value> {
    let s = &cfg.solver;
    let init = VlasovInit { mean_u: s.v_initial, modulation: s.modulation };
    let settings = VlasovSettings {
        nx: s.nx,
        nv: s.nv,
        dt: s.dt,
        t_end: s.t_end,
        sample_every: s.sample_every,
        u_margin: s.u_margin,
    };
    let run = carlo::vlasov::run(params, &init, &settings, &s.snapshots)?;
    write_series(w, opts, &run.series)?;
    let mut snaps = Vec::new();
    for (k, snap) in run.snapshots.iter().enumerate() {
        let name = format!("snapshots/snapshot_{k:03}.txt");
        w.write(&name, snapshot_text(&snap.grid).as_bytes())?;
        if opts.svg {
            let g = &snap.grid;
            let title = format!("f(chi, u) at tau = {}", fmt_f64(snap.tau));
            let doc = svg::heat_map(&title, "chi", "u", g.nx(), g.nv(), g.values());
            w.write(&format!("snapshots/snapshot_{k:03}.svg"), doc.as_bytes())?;
        }
        snaps.push(json!({ "tau": snap.tau, "file": name }));
    }
    let mut out = classification(&run.series, params, cfg)?;
    out["min_value"] = json!(run.min_value);
    out["snapshots"] = json!(snaps);
    Ok(out)
}

fn run_boundaries(cfg: &RunConfig, params: &SystemParams, w: &mut ArtifactWriter, opts: &RunOptions) -> CliResult<Value> {
    let temps = match &cfg.sweep {
        Some(s) if !s.u_t.is_empty() => s.u_t.clone(),
        _ => vec![params.u_t],
    };
    let curves: Vec<_> = temps
        .par_iter()
        .map(|&u_t| {
            let mut p = *params;
            p.u_t = u_t;
            let sc = threshold_sc_a0(&p).map_err(CliError::from)?;
            Ok((p, sc, boundary_curve(&p, &default_omega_grid(&p))))
        })
        .collect::<CliResult<_>>()?;
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for (p, sc, curve) in &curves {
        let name = format!("boundary_u_t_{}.csv", fmt_f64(p.u_t));
        w.write(&name, boundary_csv(curve).as_bytes())?;
        let rays: Vec<Value> = [0.0, 0.25, 0.5, 0.75, 0.9]
            .iter()
            .map(|&r| json!({ "a_over_s": r, "s_critical": curve.critical_pump(r, p) }))
            .collect();
        entries.push(json!({
            "u_t": p.u_t,
            "file": name,
            "sc_a0": sc,
            "samples": curve.samples.len(),
            "singular": curve.singular.len(),
            "critical": rays,
        }));
        let pts: Vec<(f64, f64)> = curve.samples.iter().map(|s| (s.a_asym / s.s_total, s.s_total.log10())).collect();
        lines.push((format!("u_t = {}", fmt_f64(p.u_t)), pts));
    }
    if opts.svg {
        let named: Vec<(&str, Vec<(f64, f64)>)> = lines.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        let doc = svg::line_plot("marginal stability", "A/S", "log10 S", &named);
        w.write("boundary.svg", doc.as_bytes())?;
    }
    Ok(json!({ "curves": entries }))
}
