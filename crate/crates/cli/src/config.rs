//! Strict TOML run configuration. The grammar is documented in
//! `docs/config.md`; every violation found in a file is reported at once.

use std::collections::BTreeSet;
use std::fmt;

use carlo::stability::threshold_sc_a0;
use carlo::{Complex64, SystemParams};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Nbody,
    Vlasov,
    StabilityBoundary,
    PhaseDiagram,
    Classify,
    SlowBeam,
    ValidateWave,
}

impl Mode {
    pub const ALL: [Mode; 7] = [
        Mode::Nbody,
        Mode::Vlasov,
        Mode::StabilityBoundary,
        Mode::PhaseDiagram,
        Mode::Classify,
        Mode::SlowBeam,
        Mode::ValidateWave,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Nbody => "nbody",
            Mode::Vlasov => "vlasov",
            Mode::StabilityBoundary => "stability-boundary",
            Mode::PhaseDiagram => "phase-diagram",
            Mode::Classify => "classify",
            Mode::SlowBeam => "slow-beam",
            Mode::ValidateWave => "validate-wave",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.as_str() == s)
    }

    fn needs_pump(self) -> bool {
        !matches!(self, Mode::StabilityBoundary | Mode::PhaseDiagram)
    }

    fn integrates(self) -> bool {
        matches!(self, Mode::Nbody | Mode::SlowBeam | Mode::ValidateWave | Mode::Classify | Mode::PhaseDiagram)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    U0(f64),
    NU0(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub delta: f64,
    pub n_particles: usize,
    pub coupling: Coupling,
    pub rho_r: f64,
    pub u_t: f64,
}

impl SystemConfig {
    pub fn u0(&self) -> f64 {
        match self.coupling {
            Coupling::U0(u) => u,
            Coupling::NU0(nu) => nu / self.n_particles as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    Total(f64),
    /// Multiple of the symmetric-pump threshold.
    OverSc(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Asymmetry {
    Absolute(f64),
    OverS(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PumpSpec {
    Intensities { strength: Strength, asymmetry: Asymmetry },
    Amplitudes { eta_plus: [f64; 2], eta_minus: [f64; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoadingKind {
    Jittered,
    Quiet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: f64,
    pub v_initial: f64,
    pub loading: LoadingKind,
    pub jitter: f64,
    pub modulation: f64,
    pub nx: usize,
    pub nv: usize,
    pub u_margin: f64,
    pub snapshots: Vec<f64>,
    pub theta_min: f64,
    pub slope_tol: f64,
    pub tail_fraction: f64,
}

impl SolverConfig {
    pub fn defaults(mode: Mode) -> Self {
        let (t_end, modulation) = match mode {
            Mode::Vlasov => (10.0, 1e-3),
            _ => (80.0, 0.0),
        };
        SolverConfig {
            dt: 0.01,
            t_end,
            sample_every: 0.1,
            v_initial: 0.0,
            loading: LoadingKind::Jittered,
            jitter: 1e-3,
            modulation,
            nx: 256,
            nv: 512,
            u_margin: 2.0,
            snapshots: Vec::new(),
            theta_min: 0.05,
            slope_tol: 0.02,
            tail_fraction: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub s_over_sc: Vec<f64>,
    pub a_over_s: Vec<f64>,
    /// Temperatures for boundary curves; empty means the system value.
    pub u_t: Vec<f64>,
    /// Also integrate every phase-diagram cell and classify the run.
    pub dynamic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub seed: u64,
    pub system: SystemConfig,
    pub pump: Option<PumpSpec>,
    pub solver: SolverConfig,
    pub sweep: Option<SweepConfig>,
}

/// Every problem found while reading a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub violations: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration ({} problem(s)):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

struct Section<'a> {
    name: &'static str,
    table: Option<&'a Table>,
    allowed: &'static [&'static str],
}

struct Reader {
    errors: Vec<String>,
}

impl Reader {
    fn key(section: &str, key: &str) -> String {
        if section.is_empty() {
            key.to_string()
        } else {
            format!("{section}.{key}")
        }
    }

    fn check_keys(&mut self, s: &Section<'_>) {
        if let Some(t) = s.table {
            for k in t.keys() {
                if !s.allowed.contains(&k.as_str()) {
                    self.errors.push(format!("unknown key `{}`", Self::key(s.name, k)));
                }
            }
        }
    }

    fn number(&mut self, s: &Section<'_>, key: &str) -> Option<f64> {
        let v = s.table?.get(key)?;
        match v {
            Value::Float(x) if x.is_finite() => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            _ => {
                self.errors.push(format!("`{}` must be a finite number", Self::key(s.name, key)));
                None
            }
        }
    }

    fn count(&mut self, s: &Section<'_>, key: &str) -> Option<usize> {
        let v = s.table?.get(key)?;
        match v {
            Value::Integer(i) if *i >= 0 => Some(*i as usize),
            _ => {
                self.errors.push(format!("`{}` must be a nonnegative integer", Self::key(s.name, key)));
                None
            }
        }
    }

    fn boolean(&mut self, s: &Section<'_>, key: &str) -> Option<bool> {
        match s.table?.get(key)? {
            Value::Boolean(b) => Some(*b),
            _ => {
                self.errors.push(format!("`{}` must be true or false", Self::key(s.name, key)));
                None
            }
        }
    }

    fn string<'t>(&mut self, s: &Section<'t>, key: &str) -> Option<&'t str> {
        match s.table?.get(key)? {
            Value::String(x) => Some(x.as_str()),
            _ => {
                self.errors.push(format!("`{}` must be a string", Self::key(s.name, key)));
                None
            }
        }
    }

    fn complex(&mut self, s: &Section<'_>, key: &str) -> Option<[f64; 2]> {
        let v = s.table?.get(key)?;
        let as_f = |v: &Value| match v {
            Value::Float(x) if x.is_finite() => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            _ => None,
        };
        let out = match v {
            Value::Array(a) if a.len() == 2 => as_f(&a[0]).zip(as_f(&a[1])).map(|(r, i)| [r, i]),
            other => as_f(other).map(|r| [r, 0.0]),
        };
        if out.is_none() {
            self.errors.push(format!("`{}` must be a number or a [re, im] pair", Self::key(s.name, key)));
        }
        out
    }

    /// A list of numbers, or an inline table `{ from, to, steps }` for an
    /// evenly spaced range including both ends.
    fn grid(&mut self, s: &Section<'_>, key: &str) -> Option<Vec<f64>> {
        let v = s.table?.get(key)?;
        let name = Self::key(s.name, key);
        match v {
            Value::Array(a) => {
                let vals: Option<Vec<f64>> = a
                    .iter()
                    .map(|x| match x {
                        Value::Float(f) if f.is_finite() => Some(*f),
                        Value::Integer(i) => Some(*i as f64),
                        _ => None,
                    })
                    .collect();
                match vals {
                    Some(v) if !v.is_empty() => Some(v),
                    _ => {
                        self.errors.push(format!("`{name}` must be a nonempty list of numbers"));
                        None
                    }
                }
            }
            Value::Table(t) => {
                let sub = Section { name: "", table: Some(t), allowed: &["from", "to", "steps"] };
                let before = self.errors.len();
                for k in t.keys() {
                    if !sub.allowed.contains(&k.as_str()) {
                        self.errors.push(format!("unknown key `{name}.{k}`"));
                    }
                }
                let from = self.number(&sub, "from");
                let to = self.number(&sub, "to");
                let steps = self.count(&sub, "steps");
                if self.errors.len() > before {
                    return None;
                }
                match (from, to, steps) {
                    (Some(a), Some(b), Some(n)) if n >= 1 => {
                        if n == 1 {
                            Some(vec![a])
                        } else {
                            Some((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect())
                        }
                    }
                    _ => {
                        self.errors.push(format!("`{name}` needs `from`, `to` and `steps >= 1`"));
                        None
                    }
                }
            }
            _ => {
                self.errors.push(format!("`{name}` must be a list or a {{ from, to, steps }} table"));
                None
            }
        }
    }

    fn require<T>(&mut self, v: Option<T>, present: bool, name: &str) -> Option<T> {
        if v.is_none() && !present {
            self.errors.push(format!("missing required field `{name}`"));
        }
        v
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.errors.push(msg());
        }
    }
}

const TOP_KEYS: &[&str] = &["mode", "seed", "system", "pump", "solver", "sweep"];
const SYSTEM_KEYS: &[&str] = &["delta", "n_particles", "u0", "n_u0", "rho_r", "u_t"];
const PUMP_KEYS: &[&str] = &["s_total", "s_over_sc", "a_asym", "a_over_s", "eta_plus", "eta_minus"];
const SOLVER_KEYS: &[&str] = &[
    "dt",
    "t_end",
    "sample_every",
    "v_initial",
    "loading",
    "jitter",
    "modulation",
    "nx",
    "nv",
    "u_margin",
    "snapshots",
    "theta_min",
    "slope_tol",
    "tail_fraction",
];
const SWEEP_KEYS: &[&str] = &["s_over_sc", "a_over_s", "u_t", "dynamic"];

fn section<'a>(
    r: &mut Reader,
    root: &'a Table,
    name: &'static str,
    allowed: &'static [&'static str],
) -> Section<'a> {
    let table = match root.get(name) {
        None => None,
        Some(Value::Table(t)) => Some(t),
        Some(_) => {
            r.errors.push(format!("`{name}` must be a table"));
            None
        }
    };
    let s = Section { name, table, allowed };
    r.check_keys(&s);
    s
}

/// Parses a configuration whose `mode` key is required.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_for(text, None)
}

/// Parses a configuration. When `mode` is given it supplies the run mode
/// and the file's `mode` key, if present, must agree with it.
pub fn parse_config_for(text: &str, mode: Option<Mode>) -> Result<RunConfig, ConfigError> {
    let root: Table = text.parse().map_err(|e: toml::de::Error| ConfigError {
        violations: vec![format!("syntax error: {}", e.message())],
    })?;
    let mut r = Reader { errors: Vec::new() };
    let top = Section { name: "", table: Some(&root), allowed: TOP_KEYS };
    r.check_keys(&top);

    let file_mode = r.string(&top, "mode").and_then(|m| {
        let parsed = Mode::parse(m);
        if parsed.is_none() {
            let names: Vec<&str> = Mode::ALL.iter().map(|m| m.as_str()).collect();
            r.errors.push(format!("unknown mode `{m}`; expected one of {}", names.join(", ")));
        }
        parsed
    });
    let mode = match (mode, file_mode) {
        (Some(a), Some(b)) if a != b => {
            r.errors.push(format!("config declares mode `{b}` but `{a}` was requested"));
            Some(a)
        }
        (Some(a), _) => Some(a),
        (None, Some(b)) => Some(b),
        (None, None) => {
            if !root.contains_key("mode") {
                r.errors.push("missing required field `mode`".to_string());
            }
            None
        }
    };
    let seed = match root.get("seed") {
        None => 0,
        Some(Value::Integer(i)) if *i >= 0 => *i as u64,
        Some(_) => {
            r.errors.push("`seed` must be a nonnegative integer".to_string());
            0
        }
    };

    let sys = section(&mut r, &root, "system", SYSTEM_KEYS);
    let present = |s: &Section<'_>, k: &str| s.table.is_some_and(|t| t.contains_key(k));
    let delta = r.number(&sys, "delta");
    let delta = r.require(delta, present(&sys, "delta"), "system.delta");
    let n_particles = r.count(&sys, "n_particles");
    let n_particles = r.require(n_particles, present(&sys, "n_particles"), "system.n_particles");
    let u_t = r.number(&sys, "u_t");
    let u_t = r.require(u_t, present(&sys, "u_t"), "system.u_t");
    let rho_r = r.number(&sys, "rho_r").unwrap_or(0.01);
    let u0 = r.number(&sys, "u0");
    let n_u0 = r.number(&sys, "n_u0");
    let coupling = match (u0, n_u0, present(&sys, "u0"), present(&sys, "n_u0")) {
        (_, _, true, true) => {
            r.errors.push("give only one of `system.u0` and `system.n_u0`".to_string());
            None
        }
        (Some(u), None, _, _) => Some(Coupling::U0(u)),
        (None, Some(nu), _, _) => Some(Coupling::NU0(nu)),
        (None, None, false, false) => {
            r.errors.push("missing required field `system.u0` or `system.n_u0`".to_string());
            None
        }
        _ => None,
    };
    if let Some(n) = n_particles {
        r.check(n >= 1, || "`system.n_particles` must be at least 1".to_string());
    }
    if let Some(t) = u_t {
        r.check(t >= 0.0, || format!("`system.u_t` must be nonnegative, got {t}"));
    }
    r.check(rho_r > 0.0, || format!("`system.rho_r` must be positive, got {rho_r}"));

    let pump_sec = section(&mut r, &root, "pump", PUMP_KEYS);
    let pump = if pump_sec.table.is_none() {
        if mode.is_some_and(Mode::needs_pump) {
            r.errors.push(
                "missing required section `pump` (s_total or s_over_sc, with a_asym or a_over_s; or eta_plus and eta_minus)"
                    .to_string(),
            );
        }
        None
    } else {
        parse_pump(&mut r, &pump_sec)
    };

    let mut solver = SolverConfig::defaults(mode.unwrap_or(Mode::Nbody));
    let sol = section(&mut r, &root, "solver", SOLVER_KEYS);
    macro_rules! set {
        ($field:ident, $getter:ident) => {
            if let Some(v) = r.$getter(&sol, stringify!($field)) {
                solver.$field = v;
            }
        };
    }
    set!(dt, number);
    set!(t_end, number);
    set!(sample_every, number);
    set!(v_initial, number);
    set!(jitter, number);
    set!(modulation, number);
    set!(nx, count);
    set!(nv, count);
    set!(u_margin, number);
    set!(theta_min, number);
    set!(slope_tol, number);
    set!(tail_fraction, number);
    set!(snapshots, grid);
    if let Some(l) = r.string(&sol, "loading") {
        match l {
            "jittered" => solver.loading = LoadingKind::Jittered,
            "quiet" => solver.loading = LoadingKind::Quiet,
            other => r.errors.push(format!("`solver.loading` must be \"jittered\" or \"quiet\", got \"{other}\"")),
        }
    }
    validate_solver(&mut r, &solver);

    let sw = section(&mut r, &root, "sweep", SWEEP_KEYS);
    let sweep = if sw.table.is_some() {
        Some(SweepConfig {
            s_over_sc: r.grid(&sw, "s_over_sc").unwrap_or_default(),
            a_over_s: r.grid(&sw, "a_over_s").unwrap_or_default(),
            u_t: r.grid(&sw, "u_t").unwrap_or_default(),
            dynamic: r.boolean(&sw, "dynamic").unwrap_or(false),
        })
    } else {
        None
    };
    if let Some(s) = &sweep {
        for &x in &s.s_over_sc {
            r.check(x >= 0.0, || format!("`sweep.s_over_sc` entries must be nonnegative, got {x}"));
        }
        for &x in &s.a_over_s {
            r.check(x.abs() <= 1.0, || format!("`sweep.a_over_s` entries must lie in [-1, 1], got {x}"));
        }
        for &x in &s.u_t {
            r.check(x > 0.0, || format!("`sweep.u_t` entries must be positive, got {x}"));
        }
    }

    if let Some(m) = mode {
        if m == Mode::PhaseDiagram {
            match &sweep {
                Some(s) if !s.s_over_sc.is_empty() && !s.a_over_s.is_empty() => {}
                _ => r.errors.push("phase-diagram mode needs `sweep.s_over_sc` and `sweep.a_over_s`".to_string()),
            }
        } else if sweep.as_ref().is_some_and(|s| !s.s_over_sc.is_empty() || !s.a_over_s.is_empty() || s.dynamic) {
            r.errors.push(format!("`sweep` grids apply to phase-diagram mode only, not `{m}`"));
        }
        if m != Mode::StabilityBoundary && sweep.as_ref().is_some_and(|s| !s.u_t.is_empty()) {
            r.errors.push("`sweep.u_t` applies to stability-boundary mode only".to_string());
        }
        if m == Mode::Vlasov {
            if let Some(t) = u_t {
                r.check(t > 0.0, || "vlasov mode needs a warm gas (`system.u_t` > 0)".to_string());
            }
        }
        if m.integrates() && solver.t_end <= 0.0 {
            r.errors.push(format!("`solver.t_end` must be positive for `{m}`"));
        }
    }

    let (Some(mode), Some(delta), Some(n_particles), Some(u_t), Some(coupling)) =
        (mode, delta, n_particles, u_t, coupling)
    else {
        return Err(ConfigError { violations: r.errors });
    };
    let cfg = RunConfig {
        mode,
        seed,
        system: SystemConfig { delta, n_particles, coupling, rho_r, u_t },
        pump,
        solver,
        sweep,
    };
    if r.errors.is_empty() {
        if let Err(e) = cfg.params() {
            r.errors.push(e.to_string());
        } else if mode == Mode::SlowBeam {
            let p = cfg.params().expect("checked above");
            r.check(p.asymmetry() == 0.0, || "slow-beam mode needs symmetric pumping (A = 0)".to_string());
            r.check(cfg.solver.v_initial != 0.0, || "slow-beam mode needs a moving beam (`solver.v_initial` != 0)".to_string());
        }
    }
    if r.errors.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError { violations: r.errors })
    }
}

fn parse_pump(r: &mut Reader, s: &Section<'_>) -> Option<PumpSpec> {
    let has = |k: &str| s.table.is_some_and(|t| t.contains_key(k));
    let amplitudes = has("eta_plus") || has("eta_minus");
    let intensities = ["s_total", "s_over_sc", "a_asym", "a_over_s"].iter().any(|k| has(k));
    if amplitudes && intensities {
        r.errors.push("`pump` takes either eta_plus/eta_minus or intensities, not both".to_string());
        return None;
    }
    if amplitudes {
        let ep = r.complex(s, "eta_plus");
        let em = r.complex(s, "eta_minus");
        let ep = r.require(ep, has("eta_plus"), "pump.eta_plus");
        let em = r.require(em, has("eta_minus"), "pump.eta_minus");
        return Some(PumpSpec::Amplitudes { eta_plus: ep?, eta_minus: em? });
    }
    let strength = match (has("s_total"), has("s_over_sc")) {
        (true, true) => {
            r.errors.push("give only one of `pump.s_total` and `pump.s_over_sc`".to_string());
            None
        }
        (true, false) => r.number(s, "s_total").map(Strength::Total),
        (false, true) => r.number(s, "s_over_sc").map(Strength::OverSc),
        (false, false) => {
            r.errors.push("missing required field `pump.s_total` or `pump.s_over_sc`".to_string());
            None
        }
    };
    let asymmetry = match (has("a_asym"), has("a_over_s")) {
        (true, true) => {
            r.errors.push("give only one of `pump.a_asym` and `pump.a_over_s`".to_string());
            None
        }
        (true, false) => r.number(s, "a_asym").map(Asymmetry::Absolute),
        (false, true) => r.number(s, "a_over_s").map(Asymmetry::OverS),
        (false, false) => {
            r.errors.push("missing required field `pump.a_asym` or `pump.a_over_s`".to_string());
            None
        }
    };
    let (strength, asymmetry) = (strength?, asymmetry?);
    match strength {
        Strength::Total(v) | Strength::OverSc(v) if v < 0.0 => {
            r.errors.push(format!("pump strength must be nonnegative, got {v}"));
        }
        _ => {}
    }
    match (strength, asymmetry) {
        (_, Asymmetry::OverS(a)) if a.abs() > 1.0 => {
            r.errors.push(format!("|A| must not exceed S: `pump.a_over_s` = {a}"));
        }
        (Strength::Total(sv), Asymmetry::Absolute(a)) if a.abs() > sv => {
            r.errors.push(format!("|A| must not exceed S: a_asym = {a}, s_total = {sv}"));
        }
        _ => {}
    }
    Some(PumpSpec::Intensities { strength, asymmetry })
}

fn validate_solver(r: &mut Reader, s: &SolverConfig) {
    r.check(s.dt > 0.0, || format!("`solver.dt` must be positive, got {}", s.dt));
    r.check(s.t_end >= 0.0, || format!("`solver.t_end` must be nonnegative, got {}", s.t_end));
    r.check(s.sample_every > 0.0, || format!("`solver.sample_every` must be positive, got {}", s.sample_every));
    r.check((0.0..=0.5).contains(&s.jitter), || format!("`solver.jitter` must lie in [0, 0.5], got {}", s.jitter));
    r.check(s.modulation.abs() < 1.0, || format!("`solver.modulation` must satisfy |eps| < 1, got {}", s.modulation));
    r.check(s.nx >= 8, || format!("`solver.nx` must be at least 8, got {}", s.nx));
    r.check(s.nv >= 8, || format!("`solver.nv` must be at least 8, got {}", s.nv));
    r.check(s.u_margin >= 0.0, || format!("`solver.u_margin` must be nonnegative, got {}", s.u_margin));
    r.check(s.theta_min > 0.0 && s.theta_min < 1.0, || {
        format!("`solver.theta_min` must lie in (0, 1), got {}", s.theta_min)
    });
    r.check(s.slope_tol > 0.0, || format!("`solver.slope_tol` must be positive, got {}", s.slope_tol));
    r.check(s.tail_fraction > 0.0 && s.tail_fraction <= 1.0, || {
        format!("`solver.tail_fraction` must lie in (0, 1], got {}", s.tail_fraction)
    });
    for &t in &s.snapshots {
        r.check(t >= 0.0, || format!("`solver.snapshots` entries must be nonnegative, got {t}"));
    }
}

impl RunConfig {
    /// Physical parameters without a pump.
    pub fn base_params(&self) -> SystemParams {
        let s = &self.system;
        let mut p = SystemParams::reference(s.n_particles);
        p.delta = s.delta;
        p.u0 = s.u0();
        p.rho_r = s.rho_r;
        p.u_t = s.u_t;
        p.seed = self.seed;
        p.eta_plus = Complex64::new(0.0, 0.0);
        p.eta_minus = Complex64::new(0.0, 0.0);
        p
    }

    /// Resolves the pump specification into amplitudes.
    pub fn params(&self) -> carlo::Result<SystemParams> {
        let p = self.base_params();
        p.validate()?;
        match self.pump {
            None => Ok(p),
            Some(PumpSpec::Amplitudes { eta_plus, eta_minus }) => {
                let mut q = p;
                q.eta_plus = Complex64::new(eta_plus[0], eta_plus[1]);
                q.eta_minus = Complex64::new(eta_minus[0], eta_minus[1]);
                q.validate()?;
                Ok(q)
            }
            Some(PumpSpec::Intensities { strength, asymmetry }) => {
                let s = match strength {
                    Strength::Total(s) => s,
                    Strength::OverSc(r) => r * threshold_sc_a0(&p)?,
                };
                let a = match asymmetry {
                    Asymmetry::Absolute(a) => a,
                    Asymmetry::OverS(r) => r * s,
                };
                p.with_pump(s, a)
            }
        }
    }

    /// Canonical TOML text that parses back to this configuration.
    pub fn to_toml(&self) -> String {
        let num = |x: f64| Value::Float(x);
        let mut root = Table::new();
        root.insert("mode".into(), Value::String(self.mode.as_str().into()));
        root.insert("seed".into(), Value::Integer(self.seed as i64));

        let s = &self.system;
        let mut sys = Table::new();
        sys.insert("delta".into(), num(s.delta));
        sys.insert("n_particles".into(), Value::Integer(s.n_particles as i64));
        match s.coupling {
            Coupling::U0(u) => sys.insert("u0".into(), num(u)),
            Coupling::NU0(u) => sys.insert("n_u0".into(), num(u)),
        };
        sys.insert("rho_r".into(), num(s.rho_r));
        sys.insert("u_t".into(), num(s.u_t));
        root.insert("system".into(), Value::Table(sys));

        if let Some(pump) = self.pump {
            let mut t = Table::new();
            match pump {
                PumpSpec::Amplitudes { eta_plus, eta_minus } => {
                    t.insert("eta_plus".into(), Value::Array(vec![num(eta_plus[0]), num(eta_plus[1])]));
                    t.insert("eta_minus".into(), Value::Array(vec![num(eta_minus[0]), num(eta_minus[1])]));
                }
                PumpSpec::Intensities { strength, asymmetry } => {
                    match strength {
                        Strength::Total(x) => t.insert("s_total".into(), num(x)),
                        Strength::OverSc(x) => t.insert("s_over_sc".into(), num(x)),
                    };
                    match asymmetry {
                        Asymmetry::Absolute(x) => t.insert("a_asym".into(), num(x)),
                        Asymmetry::OverS(x) => t.insert("a_over_s".into(), num(x)),
                    };
                }
            }
            root.insert("pump".into(), Value::Table(t));
        }

        let v = &self.solver;
        let mut sol = Table::new();
        for (k, x) in [
            ("dt", v.dt),
            ("t_end", v.t_end),
            ("sample_every", v.sample_every),
            ("v_initial", v.v_initial),
            ("jitter", v.jitter),
            ("modulation", v.modulation),
            ("u_margin", v.u_margin),
            ("theta_min", v.theta_min),
            ("slope_tol", v.slope_tol),
            ("tail_fraction", v.tail_fraction),
        ] {
            sol.insert(k.into(), num(x));
        }
        sol.insert("nx".into(), Value::Integer(v.nx as i64));
        sol.insert("nv".into(), Value::Integer(v.nv as i64));
        let loading = match v.loading {
            LoadingKind::Jittered => "jittered",
            LoadingKind::Quiet => "quiet",
        };
        sol.insert("loading".into(), Value::String(loading.into()));
        if !v.snapshots.is_empty() {
            sol.insert("snapshots".into(), Value::Array(v.snapshots.iter().map(|&x| num(x)).collect()));
        }
        root.insert("solver".into(), Value::Table(sol));

        if let Some(sw) = &self.sweep {
            let mut t = Table::new();
            let list = |xs: &[f64]| Value::Array(xs.iter().map(|&x| num(x)).collect());
            if !sw.s_over_sc.is_empty() {
                t.insert("s_over_sc".into(), list(&sw.s_over_sc));
            }
            if !sw.a_over_s.is_empty() {
                t.insert("a_over_s".into(), list(&sw.a_over_s));
            }
            if !sw.u_t.is_empty() {
                t.insert("u_t".into(), list(&sw.u_t));
            }
            t.insert("dynamic".into(), Value::Boolean(sw.dynamic));
            root.insert("sweep".into(), Value::Table(t));
        }
        toml::to_string(&root).expect("tables always serialise")
    }

    /// Names of every top-level key and section accepted in a file.
    pub fn known_keys() -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        out.extend(TOP_KEYS.iter().map(|k| k.to_string()));
        for (sec, keys) in [("system", SYSTEM_KEYS), ("pump", PUMP_KEYS), ("solver", SOLVER_KEYS), ("sweep", SWEEP_KEYS)] {
            out.extend(keys.iter().map(|k| format!("{sec}.{k}")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
mode = "nbody"

[system]
delta = -1.0
n_particles = 10000
n_u0 = -1.0
u_t = 3.0

[pump]
s_over_sc = 2.0
a_over_s = 0.3
"#;

    #[test]
    fn minimal_file_parses() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.mode, Mode::Nbody);
        assert_eq!(c.system.delta, -1.0);
        assert_eq!(c.system.u0(), -1e-4);
        let p = c.params().unwrap();
        assert!((p.relative_asymmetry() - 0.3).abs() < 1e-12);
        assert_eq!(c.solver, SolverConfig::defaults(Mode::Nbody));
    }

    #[test]
    fn empty_file_lists_every_required_field() {
        let e = parse_config("").unwrap_err();
        let all = e.violations.join("\n");
        for needle in ["`mode`", "system.delta", "system.n_particles", "system.u_t", "system.u0"] {
            assert!(all.contains(needle), "{needle} missing from {all}");
        }
    }

    #[test]
    fn pump_asymmetry_beyond_total_is_rejected() {
        let text = MINIMAL.replace("a_over_s = 0.3", "a_over_s = 1.2");
        let e = parse_config(&text).unwrap_err();
        assert!(e.violations.iter().any(|v| v.contains("|A| must not exceed S")));
        let text = MINIMAL.replace("s_over_sc = 2.0\na_over_s = 0.3", "s_total = 10.0\na_asym = -11.0");
        assert!(parse_config(&text).is_err());
    }

    #[test]
    fn unknown_keys_and_bad_values_are_all_reported() {
        let text = format!("{MINIMAL}\n[solver]\ndt = -1\nfoo = 2\nloading = \"lattice\"\n");
        let e = parse_config(&text).unwrap_err();
        assert_eq!(e.violations.len(), 3, "{e}");
    }

    #[test]
    fn requested_mode_must_match_file() {
        assert!(parse_config_for(MINIMAL, Some(Mode::Vlasov)).is_err());
        let no_mode = MINIMAL.replace("mode = \"nbody\"", "");
        assert_eq!(parse_config_for(&no_mode, Some(Mode::Vlasov)).unwrap().mode, Mode::Vlasov);
    }

    #[test]
    fn amplitudes_and_ranges() {
        let text = r#"
mode = "phase-diagram"
[system]
delta = -1
n_particles = 100
u0 = -0.01
u_t = 3
[pump]
eta_plus = [1.0, 0.5]
eta_minus = 2
[sweep]
s_over_sc = { from = 0.5, to = 2.0, steps = 4 }
a_over_s = [0, 0.5]
"#;
        let c = parse_config(text).unwrap();
        assert_eq!(c.sweep.as_ref().unwrap().s_over_sc, vec![0.5, 1.0, 1.5, 2.0]);
        let p = c.params().unwrap();
        assert_eq!(p.eta_plus, Complex64::new(1.0, 0.5));
        assert_eq!(p.eta_minus, Complex64::new(2.0, 0.0));
    }

    #[test]
    fn canonical_text_round_trips() {
        let mut c = parse_config(MINIMAL).unwrap();
        c.solver.snapshots = vec![20.0, 32.0];
        c.seed = 77;
        assert_eq!(parse_config(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn slow_beam_requires_balanced_pumps() {
        let text = MINIMAL.replace("mode = \"nbody\"", "mode = \"slow-beam\"");
        let e = parse_config(&text).unwrap_err();
        assert!(e.violations.iter().any(|v| v.contains("symmetric")));
    }
}
