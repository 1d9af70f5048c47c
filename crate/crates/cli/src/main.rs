//! `shadowlab`: runs return-map, recurrence and shadow experiments from a flat config file.
//!
//! Exit codes: 0 success, 2 configuration error, 3 a computation failed, 4 a checked
//! invariant was violated.

// `!(x > 0.0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod exec;
mod output;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{Config, ConfigError, Origin, RawConfig, Task};
use output::{json_bytes, sha256_hex, Collector};
use tasks::{run_task, Ctx, Status};

#[derive(Parser)]
#[command(name = "shadowlab", version, about = "Return maps, recurrence certificates and shadow checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat `key = value` file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Every task listed under `tasks` (or the scenario defaults).
    Run,
    ShadowCheck,
    ReturnMap,
    Recurrence,
    Census,
    L1,
    AreaCheck,
}

impl Command {
    fn task(self) -> Option<Task> {
        match self {
            Command::Run => None,
            Command::ShadowCheck => Some(Task::ShadowCheck),
            Command::ReturnMap => Some(Task::ReturnMap),
            Command::Recurrence => Some(Task::Recurrence),
            Command::Census => Some(Task::Census),
            Command::L1 => Some(Task::L1),
            Command::AreaCheck => Some(Task::AreaCheck),
        }
    }
}

/// One flag per config key. Values go through the same validation as the file.
#[derive(Args)]
struct Overrides {
    #[arg(long, global = true)]
    scenario: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    epsilon: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    a: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    b: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    mu: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    jacobi: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    jacobi_offset: Option<String>,
    #[arg(long, global = true)]
    chart: Option<String>,
    #[arg(long, global = true)]
    ob_axis: Option<String>,
    #[arg(long, global = true)]
    lf_axis: Option<String>,
    #[arg(long, global = true)]
    conjugate_ob: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    theta0: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    t0: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    r0: Option<String>,
    #[arg(long, global = true)]
    tol: Option<String>,
    #[arg(long, global = true)]
    residual_tol: Option<String>,
    #[arg(long, global = true)]
    conjugacy_tol: Option<String>,
    #[arg(long, global = true)]
    area_tol: Option<String>,
    #[arg(long, global = true)]
    grid_n: Option<String>,
    /// Return indices, e.g. `--k 1 2`.
    #[arg(long, global = true, num_args = 1..)]
    k: Vec<String>,
    #[arg(long, global = true)]
    samples: Option<String>,
    #[arg(long, global = true)]
    t_end: Option<String>,
    #[arg(long, global = true)]
    time_samples: Option<String>,
    #[arg(long, global = true)]
    loop_radius: Option<String>,
    #[arg(long, global = true)]
    loop_points: Option<String>,
    #[arg(long, global = true)]
    area_weight: Option<String>,
    #[arg(long, global = true)]
    t_max: Option<String>,
    /// Space separated task names for `run`.
    #[arg(long, global = true)]
    tasks: Option<String>,
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true)]
    threads: Option<String>,
}

impl Overrides {
    fn apply(self, raw: &mut RawConfig) {
        let k = (!self.k.is_empty()).then(|| self.k.join(" "));
        let pairs = [
            ("scenario", self.scenario),
            ("epsilon", self.epsilon),
            ("a", self.a),
            ("b", self.b),
            ("mu", self.mu),
            ("jacobi", self.jacobi),
            ("jacobi_offset", self.jacobi_offset),
            ("chart", self.chart),
            ("ob_axis", self.ob_axis),
            ("lf_axis", self.lf_axis),
            ("conjugate_ob", self.conjugate_ob),
            ("theta0", self.theta0),
            ("t0", self.t0),
            ("r0", self.r0),
            ("tol", self.tol),
            ("residual_tol", self.residual_tol),
            ("conjugacy_tol", self.conjugacy_tol),
            ("area_tol", self.area_tol),
            ("grid_n", self.grid_n),
            ("k", k),
            ("samples", self.samples),
            ("t_end", self.t_end),
            ("time_samples", self.time_samples),
            ("loop_radius", self.loop_radius),
            ("loop_points", self.loop_points),
            ("area_weight", self.area_weight),
            ("t_max", self.t_max),
            ("tasks", self.tasks),
            ("out", self.out),
            ("seed", self.seed),
            ("threads", self.threads),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                raw.set(key, v);
            }
        }
    }
}

const EXIT_CONFIG: u8 = 2;
const EXIT_FAILED: u8 = 3;
const EXIT_VIOLATED: u8 = 4;

fn load(cli: Cli) -> Result<Config, ConfigError> {
    let mut raw = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
                origin: Origin::Default,
                key: String::new(),
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    let task = cli.command.task();
    cli.overrides.apply(&mut raw);
    if let Some(t) = task {
        raw.set("tasks", t.name().to_string());
    }
    Config::from_raw(&raw)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    match run(&cfg) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILED)
        }
    }
}

fn run(cfg: &Config) -> std::io::Result<u8> {
    let start = Instant::now();
    let pool = exec::Pool::new(cfg.threads).map_err(std::io::Error::other)?;
    let canonical = cfg.canonical();
    let scenario_hash =
        sha256_hex(cfg.scenario_entries().iter().map(|(k, v)| format!("{k} = {v}\n")).collect::<String>().as_bytes());
    let ctx = Ctx { cfg, exec: &pool, scenario_hash: &scenario_hash };

    let mut out = Collector::new(&cfg.out)?;
    out.write("config.canonical", canonical.as_bytes())?;
    let mut task_reports = Vec::new();
    let mut worst = Status::Ok;
    for &task in &cfg.tasks {
        let result = run_task(task, &ctx);
        let mut names = Vec::new();
        for (name, bytes) in &result.files {
            out.write(name, bytes)?;
            names.push(name.clone());
        }
        println!("{:<13} {:<9} {}", task.name(), format!("{:?}", result.status).to_lowercase(), result.message);
        worst = worst.max(result.status);
        task_reports.push(json!({
            "task": task.name(),
            "status": result.status,
            "message": result.message,
            "files": names,
        }));
    }
    let code = match worst {
        Status::Ok => 0,
        Status::Violated => EXIT_VIOLATED,
        Status::Failed => EXIT_FAILED,
    };

    // Last, so that every file it lists already exists.
    let manifest = json!({
        "config_hash": sha256_hex(canonical.as_bytes()),
        "scenario_hash": scenario_hash,
        "seed": cfg.seed,
        "versions": {
            "shadowlab-cli": env!("CARGO_PKG_VERSION"),
            "shadowlab-core": shadowlab_core::VERSION,
        },
        "wall_time_seconds": start.elapsed().as_secs_f64(),
        "tasks": task_reports,
        "files": out.files,
        "warnings": cfg.warnings,
        "exit_code": code,
    });
    out.write("manifest.json", &json_bytes(&manifest))?;
    println!("wrote {} files to {}", out.files.len(), out.root().display());
    Ok(code)
}
