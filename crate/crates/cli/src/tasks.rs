//! One function per subcommand. Tasks never write files themselves; they hand their
//! artifacts back to the collector in `main`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use shadowlab_core::exec::Executor;
use shadowlab_core::flows::{lagrange_l1, KatokParams};
use shadowlab_core::geometry::StiefelPoint;
use shadowlab_core::poincare::{
    area_ratio, circle_loop, find_recurrent_points, periodic_census, return_sample, RecurrenceOptions, Tomography,
};
use shadowlab_core::scenario::Scenario;
use shadowlab_core::shadow::{conjugacy_residual, shadow_path};
use shadowlab_core::{Complex64, Error};

use crate::config::{AnyScenario, Config, Task};
use crate::output::{json_bytes, Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// A checked property did not hold.
    Violated,
    /// A computation raised an error.
    Failed,
}

pub struct TaskOutput {
    pub status: Status,
    pub message: String,
    pub files: Vec<(String, Vec<u8>)>,
}

impl TaskOutput {
    fn new() -> Self {
        TaskOutput { status: Status::Ok, message: String::new(), files: Vec::new() }
    }

    fn flag(&mut self, status: Status, message: String) {
        if status > self.status {
            self.status = status;
        }
        if !self.message.is_empty() {
            self.message.push_str("; ");
        }
        self.message.push_str(&message);
    }
}

pub struct Ctx<'a, E: Executor> {
    pub cfg: &'a Config,
    pub exec: &'a E,
    pub scenario_hash: &'a str,
}

pub fn run_task<E: Executor>(task: Task, ctx: &Ctx<E>) -> TaskOutput {
    macro_rules! with_scenario {
        ($f:ident) => {
            match ctx.cfg.build_scenario() {
                AnyScenario::Katok(sc) => $f(&sc, ctx),
                AnyScenario::Spheroid(sc) => $f(&sc, ctx),
                AnyScenario::ThreeBody(sc) => $f(&sc, ctx),
            }
        };
    }
    match task {
        Task::L1 => l1(ctx.cfg),
        Task::Census => census(ctx.cfg),
        Task::ShadowCheck => match ctx.cfg.build_scenario() {
            AnyScenario::Katok(sc) => katok_shadow_check(&sc, ctx),
            AnyScenario::Spheroid(sc) => path_check(&sc, ctx, TaskOutput::new()),
            AnyScenario::ThreeBody(sc) => path_check(&sc, ctx, TaskOutput::new()),
        },
        Task::ReturnMap => with_scenario!(return_map_grid),
        Task::Recurrence => with_scenario!(recurrence),
        Task::AreaCheck => with_scenario!(area_check),
    }
}

fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn tomography_json(t: &Tomography) -> Value {
    json!({
        "theta0": t.theta0,
        "t0": t.t0,
        "r0": t.r0,
        "chart": format!("{:?}", t.frame.chart).to_lowercase(),
        "ob_axis": t.frame.ob_axis,
        "lf_axis": t.frame.lf_axis,
        "conjugate_ob": t.frame.conjugate_ob,
    })
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split([' ', '(', '{']).next().unwrap_or("").to_string()
}

fn l1(cfg: &Config) -> TaskOutput {
    let mut out = TaskOutput::new();
    match lagrange_l1(cfg.mu) {
        Ok((x, c)) => {
            let report = json!({ "mu": cfg.mu, "x": x, "gamma": 1.0 - cfg.mu - x, "critical_value": c });
            out.message = format!("L1 at x = {x:.12}, H(L1) = {c:.12}");
            out.files.push(("l1.json".into(), json_bytes(&report)));
        }
        Err(e) => out.flag(Status::Failed, e.to_string()),
    }
    out
}

fn census(cfg: &Config) -> TaskOutput {
    let mut out = TaskOutput::new();
    let census = match periodic_census(&KatokParams { epsilon: cfg.epsilon }, cfg.t_max) {
        Ok(c) => c,
        Err(e) => {
            out.flag(Status::Failed, e.to_string());
            return out;
        }
    };
    let orbits: Vec<Value> = census
        .orbits
        .iter()
        .map(|o| {
            let w = o.representative.in_chart(shadowlab_core::geometry::Chart::Katok);
            json!({ "period": o.period, "support": o.support, "katok_coordinates": w.0.map(pair) })
        })
        .collect();
    let families: Vec<Value> =
        census.families.iter().map(|f| json!({ "support": f.support, "period": f.period })).collect();
    let report = json!({
        "epsilon": census.epsilon,
        "t_max": cfg.t_max,
        "resonant": census.resonant(),
        "count": census.count(),
        "orbits": orbits,
        "families": families,
    });
    out.message = match census.count() {
        Some(n) => format!("{n} simple periodic orbits"),
        None => format!("resonant: {} orbit families, no finite count", census.families.len()),
    };
    out.files.push(("census.json".into(), json_bytes(&report)));
    out
}

/// Random points of the quadric from the configured seed.
fn random_starts(seed: u64, n: usize) -> Vec<StiefelPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let y: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        if let Ok(p) = StiefelPoint::from_real_pair(x, y) {
            pts.push(p);
        }
    }
    pts
}

fn katok_shadow_check<E: Executor>(sc: &shadowlab_core::scenario::KatokScenario, ctx: &Ctx<E>) -> TaskOutput {
    let cfg = ctx.cfg;
    let mut out = TaskOutput::new();
    let starts = random_starts(cfg.seed, cfg.samples);
    let n = cfg.time_samples;
    let times: Vec<f64> = (0..n).map(|i| cfg.t_end * i as f64 / (n - 1) as f64).collect();
    let mut table = Table::new(&["axis", "spheroid_a", "spheroid_b", "max_residual", "samples"]);
    let mut axes = Vec::new();
    let mut worst = 0.0f64;
    for axis in 1..=3 {
        match conjugacy_residual(&sc.params, axis, &starts, &times, ctx.exec) {
            Ok(r) => {
                table.row(&[
                    Cell::U(axis),
                    Cell::F(r.spheroid.a),
                    Cell::F(r.spheroid.b),
                    Cell::F(r.max_residual),
                    Cell::U(r.sample_count),
                ]);
                axes.push(json!({
                    "axis": axis,
                    "spheroid": { "a": r.spheroid.a, "b": r.spheroid.b },
                    "max_residual": r.max_residual,
                    "samples": r.sample_count,
                }));
                worst = worst.max(r.max_residual);
            }
            Err(e) => out.flag(Status::Failed, format!("axis {axis}: {e}")),
        }
    }
    if worst > cfg.conjugacy_tol {
        out.flag(Status::Violated, format!("conjugacy residual {worst:e} above {:e}", cfg.conjugacy_tol));
    }
    let report = json!({
        "epsilon": sc.params.epsilon,
        "starts": cfg.samples,
        "times": n,
        "t_end": cfg.t_end,
        "seed": cfg.seed,
        "tolerance": cfg.conjugacy_tol,
        "max_residual": worst,
        "axes": axes,
    });
    out.files.push(("shadow_check.json".into(), json_bytes(&report)));
    out.files.push(("shadow_residuals.csv".into(), table.into_bytes()));
    if out.message.is_empty() {
        out.message = format!("max conjugacy residual {worst:.3e}");
    }
    path_check(sc, ctx, out)
}

/// Shadow of the flow line through the section point over the disk center.
fn path_check<S: Scenario, E: Executor>(sc: &S, ctx: &Ctx<E>, mut out: TaskOutput) -> TaskOutput {
    let cfg = ctx.cfg;
    let tom = cfg.tomography();
    let dt = cfg.t_end / (cfg.time_samples - 1) as f64;
    let path = match sc.section(Complex64::new(0.0, 0.0), &tom).and_then(|s| shadow_path(sc, &s, cfg.t_end, dt)) {
        Ok(p) => p,
        Err(e) => {
            out.flag(Status::Failed, format!("shadow path: {e}"));
            return out;
        }
    };
    let mut table = Table::new(&["t", "theta", "c_re", "c_im", "unwrapped", "margin"]);
    for (((t, l), u), m) in path.samples.iter().zip(&path.unwrapped).zip(&path.margins) {
        table.row(&[Cell::F(*t), Cell::F(l.theta), Cell::F(l.c.re), Cell::F(l.c.im), Cell::F(*u), Cell::F(*m)]);
    }
    if let Some(e) = path.transversality_loss() {
        out.flag(Status::Violated, format!("shadow path: {e}"));
    } else if out.message.is_empty() {
        out.message = format!("shadow path transverse, min margin {:.3e}", path.min_margin());
    }
    out.files.push(("shadow_path.csv".into(), table.into_bytes()));
    out
}

struct GridPoint {
    i: usize,
    j: usize,
    c: Complex64,
}

/// Nodes of the `(n+1) × (n+1)` grid over `[−r0, r0]²` that lie in the disk.
fn grid(cfg: &Config) -> Vec<GridPoint> {
    let n = cfg.grid_n;
    let h = 2.0 * cfg.r0 / n as f64;
    let tom = cfg.tomography();
    let mut pts = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let c = Complex64::new(-cfg.r0 + h * i as f64, -cfg.r0 + h * j as f64);
            if tom.contains(c) {
                pts.push(GridPoint { i, j, c });
            }
        }
    }
    pts
}

fn return_map_grid<S: Scenario, E: Executor>(sc: &S, ctx: &Ctx<E>) -> TaskOutput {
    let cfg = ctx.cfg;
    let tom = cfg.tomography();
    let pts = grid(cfg);
    let mut out = TaskOutput::new();
    let mut summary = Vec::new();
    for &k in &cfg.k {
        let samples = ctx.exec.map_indexed(pts.len(), |i| return_sample(pts[i].c, k, &tom, sc));
        let mut table = Table::new(&[
            "i",
            "j",
            "c_re",
            "c_im",
            "image_re",
            "image_im",
            "displacement",
            "return_time",
            "max_drift",
            "min_margin",
            "status",
        ]);
        let mut errors: BTreeMap<String, usize> = BTreeMap::new();
        let (mut max_disp, mut max_drift, mut min_margin) = (0.0f64, 0.0f64, f64::INFINITY);
        for (p, s) in pts.iter().zip(&samples) {
            match s {
                Ok(s) => {
                    let d = (s.image - p.c).norm();
                    max_disp = max_disp.max(d);
                    max_drift = max_drift.max(s.max_drift);
                    min_margin = min_margin.min(s.min_margin);
                    table.row(&[
                        Cell::U(p.i),
                        Cell::U(p.j),
                        Cell::F(p.c.re),
                        Cell::F(p.c.im),
                        Cell::F(s.image.re),
                        Cell::F(s.image.im),
                        Cell::F(d),
                        Cell::F(s.time),
                        Cell::F(s.max_drift),
                        Cell::F(s.min_margin),
                        Cell::S("ok".into()),
                    ]);
                }
                Err(e) => {
                    *errors.entry(error_kind(e)).or_default() += 1;
                    let mut row = vec![Cell::U(p.i), Cell::U(p.j), Cell::F(p.c.re), Cell::F(p.c.im)];
                    row.extend((0..6).map(|_| Cell::F(f64::NAN)));
                    row.push(Cell::S(e.to_string()));
                    table.row(&row);
                }
            }
        }
        let failed: usize = errors.values().sum();
        if failed > 0 {
            out.flag(Status::Failed, format!("k = {k}: {failed} of {} nodes failed", pts.len()));
        }
        summary.push(json!({
            "k": k,
            "nodes": pts.len(),
            "failed": failed,
            "errors": errors,
            "max_displacement": max_disp,
            "max_drift": max_drift,
            "min_margin": if min_margin.is_finite() { json!(min_margin) } else { Value::Null },
        }));
        out.files.push((format!("return_map_k{k}.csv"), table.into_bytes()));
    }
    let report = json!({
        "scenario": sc.name(),
        "scenario_hash": ctx.scenario_hash,
        "tomography": tomography_json(&tom),
        "grid_n": cfg.grid_n,
        "returns": summary,
    });
    out.files.insert(0, ("return_map.json".into(), json_bytes(&report)));
    if out.message.is_empty() {
        out.message = format!("{} nodes per return index", pts.len());
    }
    out
}

fn recurrence<S: Scenario, E: Executor>(sc: &S, ctx: &Ctx<E>) -> TaskOutput {
    let cfg = ctx.cfg;
    let tom = cfg.tomography();
    let opts = RecurrenceOptions { grid_n: cfg.grid_n, residual_tol: cfg.residual_tol, ..RecurrenceOptions::default() };
    let mut out = TaskOutput::new();
    let mut certificates = Vec::new();
    let mut diagnostics = Vec::new();
    let mut counts = Vec::new();
    let n1 = cfg.grid_n + 1;
    for &k in &cfg.k {
        let search = find_recurrent_points(&tom, k, sc, &opts, ctx.exec);
        let mut table =
            Table::new(&["index", "i", "j", "c_re", "c_im", "d_re", "d_im", "drift", "min_margin", "status"]);
        for node in &search.nodes {
            let (i, j) = (node.index / n1, node.index % n1);
            let (d, status) = match &node.displacement {
                Ok(d) => (*d, "ok".to_string()),
                Err(e) => (Complex64::new(f64::NAN, f64::NAN), e.to_string()),
            };
            table.row(&[
                Cell::U(node.index),
                Cell::U(i),
                Cell::U(j),
                Cell::F(node.c.re),
                Cell::F(node.c.im),
                Cell::F(d.re),
                Cell::F(d.im),
                Cell::F(node.drift),
                Cell::F(node.min_margin),
                Cell::S(status),
            ]);
        }
        out.files.push((format!("displacement_k{k}.csv"), table.into_bytes()));
        for c in &search.certificates {
            if !c.leaf_recurrent {
                out.flag(
                    Status::Violated,
                    format!("k = {k}: certificate at grid index {} fails the leaf test", c.grid_index),
                );
            }
            certificates.push(json!({
                "c_star": pair(c.c_star),
                "k": c.k,
                "winding": c.winding,
                "residual": c.residual,
                "tomography": tomography_json(&c.tomography),
                "scenario_hash": ctx.scenario_hash,
                "grid_index": c.grid_index,
                "loop_radius": c.loop_radius,
                "leaf_recurrent": c.leaf_recurrent,
                "return_time": c.return_time,
                "newton_iterations": c.trace.len() - 1,
            }));
        }
        for d in &search.diagnostics {
            diagnostics.push(json!({
                "k": k,
                "grid_index": d.grid_index,
                "stage": d.stage,
                "kind": error_kind(&d.error),
                "error": d.error.to_string(),
            }));
        }
        if search.certificates.is_empty() {
            out.flag(Status::Violated, format!("k = {k}: no certified recurrent point"));
        }
        counts.push(
            json!({ "k": k, "certificates": search.certificates.len(), "diagnostics": search.diagnostics.len() }),
        );
    }
    let report = json!({
        "scenario": sc.name(),
        "scenario_hash": ctx.scenario_hash,
        "tomography": tomography_json(&tom),
        "grid_n": cfg.grid_n,
        "residual_tol": cfg.residual_tol,
        "summary": counts,
        "certificates": certificates,
    });
    out.files.insert(0, ("certificates.json".into(), json_bytes(&report)));
    out.files.push(("recurrence_diagnostics.json".into(), json_bytes(&diagnostics)));
    if out.message.is_empty() {
        out.message = format!("certificates: {}", certificates.len());
    }
    out
}

fn area_check<S: Scenario, E: Executor>(sc: &S, ctx: &Ctx<E>) -> TaskOutput {
    let cfg = ctx.cfg;
    let tom = cfg.tomography();
    let poly = circle_loop(Complex64::new(0.0, 0.0), cfg.loop_radius, cfg.loop_points);
    let mut out = TaskOutput::new();
    let mut rows = Vec::new();
    for &k in &cfg.k {
        match area_ratio(&poly, k, &tom, sc, cfg.area_weight, ctx.exec) {
            Ok(r) => {
                let err = (r.ratio - 1.0).abs();
                if !(err <= cfg.area_tol) {
                    out.flag(Status::Violated, format!("k = {k}: |ratio - 1| = {err:e} above {:e}", cfg.area_tol));
                }
                rows.push(json!({
                    "k": k,
                    "source_area": r.source_area,
                    "image_area": r.image_area,
                    "ratio": r.ratio,
                    "deviation": err,
                }));
            }
            Err(e) => out.flag(Status::Failed, format!("k = {k}: {e}")),
        }
    }
    let report = json!({
        "scenario": sc.name(),
        "scenario_hash": ctx.scenario_hash,
        "tomography": tomography_json(&tom),
        "loop_radius": cfg.loop_radius,
        "loop_points": cfg.loop_points,
        "weight": format!("{:?}", cfg.area_weight).to_lowercase(),
        "tolerance": cfg.area_tol,
        "ratios": rows,
    });
    out.files.push(("area.json".into(), json_bytes(&report)));
    if out.message.is_empty() {
        out.message = format!("area ratios within {:e}", cfg.area_tol);
    }
    out
}
