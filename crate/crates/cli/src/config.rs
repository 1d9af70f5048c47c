//! Flat `key = value` configuration.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! line    := blank | comment | entry
//! comment := ('#' | ';') any*
//! entry   := key ws* '=' ws* value ws* comment?
//! key     := [a-z0-9_]+
//! value   := any text up to an inline comment; lists are whitespace separated
//! ```
//!
//! Every key may appear at most once. Unknown keys are errors. Command-line overrides are
//! applied on top of the file before validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use shadowlab_core::flows::{lagrange_l1, KatokParams, SpheroidParams};
use shadowlab_core::geometry::{Chart, CoordinateFrame};
use shadowlab_core::poincare::{AreaWeight, Tomography};
use shadowlab_core::scenario::{KatokScenario, Scr3bpScenario, SpheroidScenario};

/// Where a raw value came from, for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    Line(usize),
    Flag,
    Default,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag => write!(f, "command line"),
            Origin::Default => write!(f, "default"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub origin: Origin,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key.is_empty() {
            write!(f, "config error ({}): {}", self.origin, self.message)
        } else {
            write!(f, "config error ({}, key `{}`): {}", self.origin, self.key, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

pub const KEYS: &[&str] = &[
    "scenario",
    "epsilon",
    "a",
    "b",
    "mu",
    "jacobi",
    "jacobi_offset",
    "chart",
    "ob_axis",
    "lf_axis",
    "conjugate_ob",
    "theta0",
    "t0",
    "r0",
    "tol",
    "residual_tol",
    "conjugacy_tol",
    "area_tol",
    "grid_n",
    "k",
    "samples",
    "t_end",
    "time_samples",
    "loop_radius",
    "loop_points",
    "area_weight",
    "t_max",
    "tasks",
    "out",
    "seed",
    "threads",
];

/// Raw entries with their origins.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Origin)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (n, line) in text.lines().enumerate() {
            let origin = Origin::Line(n + 1);
            let body = strip_comment(line).trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(ConfigError {
                    origin,
                    key: String::new(),
                    message: format!("expected `key = value`, got `{body}`"),
                });
            };
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
                return Err(ConfigError { origin, key: key.to_string(), message: "malformed key".into() });
            }
            if !KEYS.contains(&key) {
                return Err(ConfigError { origin, key: key.to_string(), message: "unknown key".into() });
            }
            if let Some((_, first)) = raw.entries.get(key) {
                return Err(ConfigError {
                    origin,
                    key: key.to_string(),
                    message: format!("duplicate key (first at {first})"),
                });
            }
            raw.entries.insert(key.to_string(), (value.trim().to_string(), origin));
        }
        Ok(raw)
    }

    pub fn set(&mut self, key: &str, value: String) {
        debug_assert!(KEYS.contains(&key), "override for unknown key {key}");
        self.entries.insert(key.to_string(), (value, Origin::Flag));
    }

    fn get(&self, key: &str) -> Option<&(String, Origin)> {
        self.entries.get(key)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find(['#', ';']) {
        Some(i) => &line[..i],
        None => line,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Katok,
    Spheroid,
    Kepler,
    RotatingKepler,
    Scr3bp,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Katok => "katok",
            ScenarioKind::Spheroid => "spheroid",
            ScenarioKind::Kepler => "kepler",
            ScenarioKind::RotatingKepler => "rotating-kepler",
            ScenarioKind::Scr3bp => "scr3bp",
        }
    }

    fn three_body(&self) -> bool {
        matches!(self, ScenarioKind::Kepler | ScenarioKind::RotatingKepler | ScenarioKind::Scr3bp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Task {
    L1,
    Census,
    ShadowCheck,
    ReturnMap,
    Recurrence,
    AreaCheck,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::L1 => "l1",
            Task::Census => "census",
            Task::ShadowCheck => "shadow-check",
            Task::ReturnMap => "return-map",
            Task::Recurrence => "recurrence",
            Task::AreaCheck => "area-check",
        }
    }

    fn parse(s: &str) -> Option<Task> {
        [Task::L1, Task::Census, Task::ShadowCheck, Task::ReturnMap, Task::Recurrence, Task::AreaCheck]
            .into_iter()
            .find(|t| t.name() == s)
    }
}

/// The system a run works on, already built.
#[derive(Debug, Clone, Copy)]
pub enum AnyScenario {
    Katok(KatokScenario),
    Spheroid(SpheroidScenario),
    ThreeBody(Scr3bpScenario),
}

/// Validated configuration.
#[derive(Debug, Clone)]
pub struct Config {
    pub scenario: ScenarioKind,
    pub epsilon: f64,
    pub a: f64,
    pub b: f64,
    pub mu: f64,
    /// Energy level (Jacobi constant) of the three-body scenarios.
    pub jacobi: f64,
    pub frame: CoordinateFrame,
    pub theta0: f64,
    pub t0: f64,
    pub r0: f64,
    pub tol: f64,
    pub residual_tol: f64,
    pub conjugacy_tol: f64,
    pub area_tol: f64,
    pub grid_n: usize,
    pub k: Vec<usize>,
    pub samples: usize,
    pub t_end: f64,
    pub time_samples: usize,
    pub loop_radius: f64,
    pub loop_points: usize,
    pub area_weight: AreaWeight,
    pub t_max: f64,
    pub tasks: Vec<Task>,
    pub out: PathBuf,
    pub seed: u64,
    pub threads: usize,
    pub warnings: Vec<String>,
}

struct Reader<'a> {
    raw: &'a RawConfig,
}

impl Reader<'_> {
    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        let origin = self.raw.get(key).map(|(_, o)| o.clone()).unwrap_or(Origin::Default);
        ConfigError { origin, key: key.to_string(), message: message.into() }
    }

    fn text(&self, key: &str) -> Option<&str> {
        self.raw.get(key).map(|(v, _)| v.as_str())
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        match self.text(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| self.err(key, format!("cannot parse `{v}`"))),
        }
    }

    fn float(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v: f64 = self.parsed(key, default)?;
        if !v.is_finite() {
            return Err(self.err(key, "must be finite"));
        }
        Ok(v)
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.float(key, default)?;
        if !(v > 0.0) {
            return Err(self.err(key, "must be positive"));
        }
        Ok(v)
    }

    fn count(&self, key: &str, default: usize, min: usize) -> Result<usize, ConfigError> {
        let v: usize = self.parsed(key, default)?;
        if v < min {
            return Err(self.err(key, format!("must be at least {min}")));
        }
        Ok(v)
    }
}

fn default_tasks(kind: ScenarioKind) -> Vec<Task> {
    match kind {
        ScenarioKind::Katok => {
            vec![Task::ShadowCheck, Task::Census, Task::ReturnMap, Task::Recurrence, Task::AreaCheck]
        }
        ScenarioKind::Scr3bp => vec![Task::L1, Task::ShadowCheck, Task::ReturnMap, Task::Recurrence, Task::AreaCheck],
        _ => vec![Task::ShadowCheck, Task::ReturnMap, Task::Recurrence, Task::AreaCheck],
    }
}

impl Config {
    pub fn from_raw(raw: &RawConfig) -> Result<Config, ConfigError> {
        let r = Reader { raw };
        let scenario = match r.text("scenario").unwrap_or("katok") {
            "katok" => ScenarioKind::Katok,
            "spheroid" => ScenarioKind::Spheroid,
            "kepler" => ScenarioKind::Kepler,
            "rotating-kepler" => ScenarioKind::RotatingKepler,
            "scr3bp" => ScenarioKind::Scr3bp,
            other => return Err(r.err("scenario", format!("unknown scenario `{other}`"))),
        };
        let mut warnings = Vec::new();

        let epsilon = r.float("epsilon", 0.0618)?;
        if KatokParams::new(epsilon).is_err() {
            return Err(r.err("epsilon", "must lie in [0, 1)"));
        }
        if epsilon == 0.0 && scenario == ScenarioKind::Katok {
            warnings.push("degenerate: all shadows Hopf".to_string());
        }
        let a = r.positive("a", 1.0)?;
        let b = r.positive("b", 1.618)?;

        let mu_default = if scenario == ScenarioKind::Scr3bp { 1e-3 } else { 0.0 };
        let mu = r.float("mu", mu_default)?;
        match scenario {
            ScenarioKind::Scr3bp if !(mu > 0.0 && mu < 1.0) => return Err(r.err("mu", "must lie in (0, 1)")),
            ScenarioKind::Kepler | ScenarioKind::RotatingKepler if mu != 0.0 => {
                return Err(r.err("mu", "the Kepler scenarios have mu = 0"))
            }
            _ => {}
        }
        let jacobi_offset = r.float("jacobi_offset", 0.05)?;
        let jacobi = match scenario {
            ScenarioKind::Scr3bp => {
                if !(jacobi_offset > 0.0) {
                    return Err(r.err("jacobi_offset", "must be positive (the level must lie below H(L1))"));
                }
                let (_, h_l1) = lagrange_l1(mu).map_err(|e| r.err("mu", e.to_string()))?;
                let c = r.float("jacobi", h_l1 - jacobi_offset)?;
                if c > h_l1 - jacobi_offset {
                    return Err(
                        r.err("jacobi", format!("must not exceed H(L1) - jacobi_offset = {}", h_l1 - jacobi_offset))
                    );
                }
                c
            }
            ScenarioKind::Kepler => r.float("jacobi", -0.5)?,
            ScenarioKind::RotatingKepler => r.float("jacobi", -1.8)?,
            _ => r.float("jacobi", 0.0)?,
        };
        if scenario.three_body() && !(jacobi < 0.0) {
            return Err(r.err("jacobi", "energy level must be negative"));
        }

        let (chart_default, ob_default, lf_default) = match scenario {
            ScenarioKind::Katok => ("katok", 0, 2),
            ScenarioKind::Spheroid => ("quadric", 0, 1),
            _ => ("quadric", 3, 0),
        };
        let chart = match r.text("chart").unwrap_or(chart_default) {
            "quadric" => Chart::Quadric,
            "katok" => Chart::Katok,
            "equivariant" => Chart::Equivariant,
            other => return Err(r.err("chart", format!("unknown chart `{other}`"))),
        };
        let ob_axis = r.count("ob_axis", ob_default, 0)?;
        let lf_axis = r.count("lf_axis", lf_default, 0)?;
        let conjugate_ob = r.parsed("conjugate_ob", false)?;
        let frame =
            CoordinateFrame::new(chart, ob_axis, lf_axis, conjugate_ob).map_err(|e| r.err("lf_axis", e.to_string()))?;

        let theta0 = r.float("theta0", 0.0)?;
        let t0 = r.float("t0", 0.3)?;
        let r0 = r.float("r0", 0.6)?;
        Tomography::new(theta0, t0, r0, frame).map_err(|e| r.err("r0", e.to_string()))?;

        let k: Vec<usize> = match r.text("k") {
            None => vec![1],
            Some(v) => v
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().ok().filter(|&k| k >= 1))
                .collect::<Option<_>>()
                .ok_or_else(|| r.err("k", format!("expected positive integers, got `{v}`")))?,
        };
        if k.is_empty() {
            return Err(r.err("k", "needs at least one return index"));
        }

        let area_weight = match r.text("area_weight").unwrap_or("induced") {
            "flat" => AreaWeight::Flat,
            "induced" => AreaWeight::Induced,
            other => return Err(r.err("area_weight", format!("unknown weight `{other}`"))),
        };
        let t_max = r.float("t_max", 2.0)?;
        if !(t_max >= 1.0 / (1.0 - epsilon)) {
            return Err(r.err("t_max", "census horizon must be at least 1/(1 - epsilon)"));
        }
        let tasks = match r.text("tasks") {
            None => default_tasks(scenario),
            Some(v) => v
                .split_whitespace()
                .map(Task::parse)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| r.err("tasks", format!("unknown task in `{v}`")))?,
        };
        if tasks.contains(&Task::L1) && !(mu > 0.0 && mu < 1.0) {
            return Err(r.err("mu", "the l1 task needs 0 < mu < 1"));
        }
        let loop_radius = r.positive("loop_radius", 0.4)?;
        if loop_radius > r0 {
            return Err(r.err("loop_radius", "test loop must fit inside the tomography disk"));
        }

        Ok(Config {
            scenario,
            epsilon,
            a,
            b,
            mu,
            jacobi,
            frame,
            theta0,
            t0,
            r0,
            tol: r.positive("tol", 1e-11)?,
            residual_tol: r.positive("residual_tol", 1e-6)?,
            conjugacy_tol: r.positive("conjugacy_tol", 1e-12)?,
            area_tol: r.positive("area_tol", 1e-3)?,
            grid_n: r.count("grid_n", 16, 1)?,
            k,
            samples: r.count("samples", 100, 1)?,
            t_end: r.positive("t_end", 10.0)?,
            time_samples: r.count("time_samples", 1000, 2)?,
            loop_radius,
            loop_points: r.count("loop_points", 128, 8)?,
            area_weight,
            t_max,
            tasks,
            out: PathBuf::from(r.text("out").unwrap_or("shadowlab-out")),
            seed: r.parsed("seed", 0u64)?,
            threads: r.parsed("threads", 0usize)?,
            warnings,
        })
    }

    pub fn tomography(&self) -> Tomography {
        Tomography::new(self.theta0, self.t0, self.r0, self.frame).expect("validated")
    }

    pub fn build_scenario(&self) -> AnyScenario {
        match self.scenario {
            ScenarioKind::Katok => {
                AnyScenario::Katok(KatokScenario::new(KatokParams { epsilon: self.epsilon }, self.frame))
            }
            ScenarioKind::Spheroid => AnyScenario::Spheroid(SpheroidScenario {
                params: SpheroidParams::new(self.a, self.b).expect("validated"),
            }),
            kind => {
                let base = match kind {
                    ScenarioKind::Kepler => Scr3bpScenario::kepler(),
                    ScenarioKind::RotatingKepler => Scr3bpScenario::rotating_kepler(self.jacobi),
                    _ => Scr3bpScenario::restricted(self.mu, self.jacobi).expect("validated"),
                };
                let mut sc = base.with_frame(self.frame);
                sc.control.tol = self.tol;
                sc.level = self.jacobi;
                AnyScenario::ThreeBody(sc)
            }
        }
    }

    /// Every setting that can change a result, one sorted `key = value` line each.
    pub fn canonical(&self) -> String {
        let mut m: BTreeMap<&str, String> = self.scenario_entries();
        m.insert("tol", format!("{:?}", self.tol));
        m.insert("residual_tol", format!("{:?}", self.residual_tol));
        m.insert("conjugacy_tol", format!("{:?}", self.conjugacy_tol));
        m.insert("area_tol", format!("{:?}", self.area_tol));
        m.insert("grid_n", self.grid_n.to_string());
        m.insert("k", self.k.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" "));
        m.insert("samples", self.samples.to_string());
        m.insert("t_end", format!("{:?}", self.t_end));
        m.insert("time_samples", self.time_samples.to_string());
        m.insert("loop_radius", format!("{:?}", self.loop_radius));
        m.insert("loop_points", self.loop_points.to_string());
        m.insert("area_weight", format!("{:?}", self.area_weight).to_lowercase());
        m.insert("t_max", format!("{:?}", self.t_max));
        m.insert("tasks", self.tasks.iter().map(|t| t.name()).collect::<Vec<_>>().join(" "));
        m.insert("seed", self.seed.to_string());
        m.into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// Settings that define the dynamical system and the section.
    pub fn scenario_entries(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("scenario", self.scenario.name().to_string());
        match self.scenario {
            ScenarioKind::Katok => {
                m.insert("epsilon", format!("{:?}", self.epsilon));
            }
            ScenarioKind::Spheroid => {
                m.insert("a", format!("{:?}", self.a));
                m.insert("b", format!("{:?}", self.b));
            }
            _ => {
                m.insert("mu", format!("{:?}", self.mu));
                m.insert("jacobi", format!("{:?}", self.jacobi));
            }
        }
        m.insert("chart", format!("{:?}", self.frame.chart).to_lowercase());
        m.insert("ob_axis", self.frame.ob_axis.to_string());
        m.insert("lf_axis", self.frame.lf_axis.to_string());
        m.insert("conjugate_ob", self.frame.conjugate_ob.to_string());
        m.insert("theta0", format!("{:?}", self.theta0));
        m.insert("t0", format!("{:?}", self.t0));
        m.insert("r0", format!("{:?}", self.r0));
        m
    }
}
