use std::fs;
use std::path::Path;
use std::process::Command;

use carlo_cli::config::{parse_config, Mode};
use carlo_cli::manifest::RunManifest;
use carlo_cli::output::sha256_hex;
use carlo_cli::{load_config, run_experiment, RunOptions, Source};
use tempfile::tempdir;

const SMALL_NBODY: &str = r#"
mode = "nbody"
seed = 5

[system]
delta = -1.0
n_particles = 2000
n_u0 = -1.0
u_t = 3.0

[pump]
s_over_sc = 2.0
a_over_s = 0.3

[solver]
t_end = 2.0
sample_every = 0.5
"#;

fn carlo(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_carlo")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn sweep_config(s: &str, a: &str, extra: &str) -> String {
    format!(
        r#"
mode = "phase-diagram"
seed = 3

[system]
delta = -1.0
n_particles = 10000
n_u0 = -1.0
u_t = 3.0

[sweep]
s_over_sc = {s}
a_over_s = {a}
{extra}
"#
    )
}

#[test]
fn ordered_wave_preset_parameters() {
    let c = load_config(&Source::Preset("ordered-wave".into()), None).unwrap();
    assert_eq!(c.mode, Mode::Nbody);
    let p = c.params().unwrap();
    assert_eq!(p.delta, -1.0);
    assert_eq!(p.u_t, 3.0);
    assert!((p.relative_asymmetry() - 0.3).abs() < 1e-12);
    let vw = load_config(&Source::Preset("ordered-wave".into()), Some(Mode::ValidateWave)).unwrap();
    assert_eq!(vw.mode, Mode::ValidateWave);
    assert_eq!(vw.system, c.system);
}

#[test]
fn empty_and_inconsistent_files_are_rejected() {
    let e = parse_config("").unwrap_err();
    assert!(e.violations.len() >= 5, "{e}");
    let bad = SMALL_NBODY.replace("a_over_s = 0.3", "a_over_s = -1.5");
    assert!(parse_config(&bad).is_err());
}

#[test]
fn sweep_straddling_the_symmetric_threshold() {
    let dir = tempdir().unwrap();
    let cfg = parse_config(&sweep_config("[0.9, 1.1]", "[0.0]", "")).unwrap();
    let m = run_experiment(&cfg, dir.path(), &RunOptions::default()).unwrap();
    let csv = fs::read_to_string(dir.path().join("phase_diagram.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].contains(",stable,nan,nan"), "{}", rows[0]);
    assert!(rows[1].contains(",ordered-wave,"), "{}", rows[1]);
    let growth: f64 = rows[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!(growth > 0.0);
    assert_eq!(m.results["computed"], 2);
}

#[test]
fn completed_sweep_is_not_recomputed() {
    let dir = tempdir().unwrap();
    let cfg = parse_config(&sweep_config("[0.5, 1.5, 3.0]", "{ from = -0.9, to = 0.9, steps = 4 }", "")).unwrap();
    let first = run_experiment(&cfg, dir.path(), &RunOptions::default()).unwrap();
    assert_eq!(first.results["computed"], 12);
    let csv = fs::read(dir.path().join("phase_diagram.csv")).unwrap();

    let second = run_experiment(&cfg, dir.path(), &RunOptions::default()).unwrap();
    assert_eq!(second.results["computed"], 0);
    assert_eq!(second.results["reused"], 12);
    assert_eq!(fs::read(dir.path().join("phase_diagram.csv")).unwrap(), csv);
    assert_eq!(first.files, second.files);

    // A damaged cell no longer matches its checksum and is recomputed.
    fs::write(dir.path().join("cells/cell_00005.json"), "{}").unwrap();
    let third = run_experiment(&cfg, dir.path(), &RunOptions::default()).unwrap();
    assert_eq!(third.results["computed"], 1);
    assert_eq!(fs::read(dir.path().join("phase_diagram.csv")).unwrap(), csv);

    // A different configuration starts afresh.
    let mut other = cfg.clone();
    other.seed += 1;
    assert_eq!(run_experiment(&other, dir.path(), &RunOptions::default()).unwrap().results["computed"], 12);
}

#[test]
fn repeated_runs_are_byte_identical_and_checksummed() {
    let cfg = parse_config(SMALL_NBODY).unwrap();
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    let opts = RunOptions { svg: true };
    let ma = run_experiment(&cfg, a.path(), &opts).unwrap();
    run_experiment(&cfg, b.path(), &opts).unwrap();
    let read = |d: &Path| fs::read(d.join("timeseries.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
    for f in &ma.files {
        assert_eq!(sha256_hex(&fs::read(a.path().join(&f.path)).unwrap()), f.sha256, "{}", f.path);
    }
    assert!(ma.files.iter().any(|f| f.path == "theta.svg"));

    // The manifest alone reproduces the run.
    let back = RunManifest::read(a.path()).unwrap().unwrap();
    assert_eq!(back.config().unwrap(), cfg);
    assert!(back.derived.unwrap().sc_a0.unwrap() > 0.0);
}

#[test]
fn exit_status_follows_the_failure_class() {
    let dir = tempdir().unwrap();
    let good = write(dir.path(), "good.toml", SMALL_NBODY);
    let out = dir.path().join("run");
    let ok = carlo(&["nbody", "--config", &good, "--out", out.to_str().unwrap(), "--seed", "9", "--threads", "2"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let m = RunManifest::read(&out).unwrap().unwrap();
    assert_eq!(m.config().unwrap().seed, 9);

    let invalid = write(dir.path(), "bad.toml", &SMALL_NBODY.replace("u_t = 3.0", "u_t = -3.0"));
    assert_eq!(carlo(&["nbody", "--config", &invalid, "--out", out.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(carlo(&["vlasov", "--config", &good]).status.code(), Some(1));
    assert_eq!(carlo(&["nbody", "--preset", "no-such-preset"]).status.code(), Some(1));
    assert_eq!(carlo(&["nbody", "--config", &good, "--threads", "0", "--out", out.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(carlo(&["nbody", "--no-such-flag"]).status.code(), Some(1));

    // An explicit step far beyond the stability limit of the integrator.
    let unstable = SMALL_NBODY
        .replace("t_end = 2.0", "t_end = 5000.0\ndt = 5.0")
        .replace("sample_every = 0.5", "sample_every = 5.0");
    let unstable = write(dir.path(), "unstable.toml", &unstable);
    let out2 = dir.path().join("diverged");
    let res = carlo(&["nbody", "--config", &unstable, "--out", out2.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2), "{}", String::from_utf8_lossy(&res.stderr));
    let failed = RunManifest::read(&out2).unwrap().unwrap();
    assert!(failed.error.unwrap().message.contains("diverged"));

    assert_eq!(carlo(&["nbody", "--config", "/nonexistent/config.toml"]).status.code(), Some(3));
    let blocked = dir.path().join("good.toml").join("sub");
    assert_eq!(carlo(&["nbody", "--config", &good, "--out", blocked.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn default_output_root_comes_from_the_environment() {
    let dir = tempdir().unwrap();
    let cfg = write(dir.path(), "envrun.toml", SMALL_NBODY);
    let res = Command::new(env!("CARGO_BIN_EXE_carlo"))
        .args(["nbody", "--config", &cfg])
        .env("CARLO_OUT", dir.path().join("root"))
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(0));
    assert!(dir.path().join("root/envrun/timeseries.csv").exists());
}

#[test]
fn boundary_mode_writes_one_curve_per_temperature() {
    let dir = tempdir().unwrap();
    let cfg = load_config(&Source::Preset("boundaries".into()), None).unwrap();
    let m = run_experiment(&cfg, dir.path(), &RunOptions { svg: true }).unwrap();
    for t in ["3", "100", "200"] {
        let text = fs::read_to_string(dir.path().join(format!("boundary_u_t_{t}.csv"))).unwrap();
        assert!(text.starts_with("omega,S,A\n"));
        assert!(text.lines().count() > 100);
    }
    assert_eq!(m.results["curves"].as_array().unwrap().len(), 3);
}

#[test]
fn analytic_and_simulated_stability_agree_away_from_boundaries() {
    let dir = tempdir().unwrap();
    let text = sweep_config("[0.3, 3.0]", "[-0.5, -0.2, 0.0, 0.2, 0.5]", "dynamic = true")
        + "\n[solver]\nt_end = 30.0\n";
    let cfg = parse_config(&text).unwrap();
    let m = run_experiment(&cfg, dir.path(), &RunOptions::default()).unwrap();
    let report = serde_json::to_string_pretty(&m.results).unwrap();
    let stab = &m.results["stability_agreement"];
    assert_eq!(stab["interior_cells"], 10, "{report}");
    assert!(stab["fraction"].as_f64().unwrap() >= 0.9, "{report}");
    let csv = fs::read_to_string(dir.path().join("phase_diagram.csv")).unwrap();
    assert!(csv.starts_with("S,A,regime,growth_re,growth_im,dynamic_regime\n"));
}
