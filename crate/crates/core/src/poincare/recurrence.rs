use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::crossings::return_sample;
use super::winding::{loop_winding, ZERO_TOL};
use super::Tomography;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::geometry::{LeafLabel, LEAF_TOL};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceOptions {
    /// Cells per side of the square grid over `[−r0, r0]²`.
    pub grid_n: usize,
    /// Largest accepted `|f_{k,D}(c*) − c*|`.
    pub residual_tol: f64,
    /// Newton stops early once the residual is below this.
    pub newton_target: f64,
    pub fd_step: f64,
    pub max_newton: usize,
    /// Bisection depth for loop segments whose phase step reaches `π/2`.
    pub max_depth: usize,
    pub leaf_tol: f64,
}

impl Default for RecurrenceOptions {
    fn default() -> Self {
        RecurrenceOptions {
            grid_n: 16,
            residual_tol: 1e-6,
            newton_target: 1e-12,
            fd_step: 1e-6,
            max_newton: 40,
            max_depth: 6,
            leaf_tol: LEAF_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementStep {
    pub iteration: usize,
    pub c: Complex64,
    pub residual: f64,
    pub damping: f64,
}

/// A point `c*` of the tomography disk with `f_{k,D}(c*) ≈ c*`, certified by the winding of
/// the displacement around a small loop enclosing it.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCertificate {
    pub c_star: Complex64,
    pub k: usize,
    pub winding: i64,
    pub residual: f64,
    pub tomography: Tomography,
    /// Lower-left grid node of the cell (or the node) the search started from.
    pub grid_index: usize,
    pub loop_radius: f64,
    /// The leaf label at the k-th crossing equals the starting label within the leaf tolerance.
    pub leaf_recurrent: bool,
    pub return_time: f64,
    pub trace: Vec<RefinementStep>,
}

/// Displacement `f_{k,D}(c) − c` at a grid node inside the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct GridNode {
    pub index: usize,
    pub c: Complex64,
    pub displacement: core::result::Result<Complex64, Error>,
    /// Energy drift over the evaluation, when it succeeded.
    pub drift: f64,
    pub min_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub grid_index: usize,
    pub stage: &'static str,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceSearch {
    pub certificates: Vec<RecurrenceCertificate>,
    pub nodes: Vec<GridNode>,
    pub diagnostics: Vec<Diagnostic>,
}

impl RecurrenceSearch {
    /// Fraction of evaluated nodes whose displacement is at most `tol`.
    pub fn node_pass_fraction(&self, tol: f64) -> f64 {
        if self.nodes.is_empty() {
            return 0.0;
        }
        let pass = self.nodes.iter().filter(|n| matches!(n.displacement, Ok(d) if d.norm() <= tol)).count();
        pass as f64 / self.nodes.len() as f64
    }
}

struct Grid {
    n: usize,
    r0: f64,
}

impl Grid {
    fn node(&self, i: usize, j: usize) -> Complex64 {
        let h = 2.0 * self.r0 / self.n as f64;
        Complex64::new(-self.r0 + h * i as f64, -self.r0 + h * j as f64)
    }
    fn index(&self, i: usize, j: usize) -> usize {
        i * (self.n + 1) + j
    }
    fn spacing(&self) -> f64 {
        2.0 * self.r0 / self.n as f64
    }
}

enum Seed {
    Cell { i: usize, j: usize },
    Node { i: usize, j: usize },
}

/// Searches the tomography disk for points fixed by `f_{k,D}`.
///
/// The displacement is evaluated on an `n × n` grid; cells whose boundary winding is nonzero
/// (and nodes where the displacement vanishes) seed a damped Newton iteration with a
/// finite-difference Jacobian. Every converged point is re-certified by the winding along a
/// small circle around it. Failures are recorded as diagnostics, never raised.
pub fn find_recurrent_points<S: Scenario, E: Executor>(
    tom: &Tomography,
    k: usize,
    sc: &S,
    opts: &RecurrenceOptions,
    exec: &E,
) -> RecurrenceSearch {
    let grid = Grid { n: opts.grid_n.max(1), r0: tom.r0 };
    let n1 = grid.n + 1;
    let displacement = |c: Complex64| -> Result<Complex64> { Ok(return_sample(c, k, tom, sc)?.image - c) };

    let evaluated = exec.map_indexed(n1 * n1, |idx| {
        let (i, j) = (idx / n1, idx % n1);
        let c = grid.node(i, j);
        if !tom.contains(c) {
            return None;
        }
        let r = return_sample(c, k, tom, sc);
        Some(match r {
            Ok(s) => {
                GridNode { index: idx, c, displacement: Ok(s.image - c), drift: s.max_drift, min_margin: s.min_margin }
            }
            Err(e) => GridNode { index: idx, c, displacement: Err(e), drift: f64::NAN, min_margin: f64::NAN },
        })
    });
    let mut diagnostics = Vec::new();
    let mut seeds = Vec::new();
    for node in evaluated.iter().flatten() {
        match &node.displacement {
            Ok(d) if d.norm() < ZERO_TOL => seeds.push(Seed::Node { i: node.index / n1, j: node.index % n1 }),
            Ok(_) => {}
            Err(e) => diagnostics.push(Diagnostic { grid_index: node.index, stage: "grid", error: e.clone() }),
        }
    }

    // Cell windings, refined along the edges when needed.
    let cell_windings = exec.map_indexed(grid.n * grid.n, |cell| {
        let (i, j) = (cell / grid.n, cell % grid.n);
        let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
        let mut nodes = Vec::with_capacity(4);
        for (s, &(a, b)) in corners.iter().enumerate() {
            match evaluated[grid.index(a, b)].as_ref().map(|n| &n.displacement) {
                Some(Ok(d)) => nodes.push((s as f64, *d)),
                _ => return None,
            }
        }
        let p = |s: f64| -> Complex64 {
            let e = (s.floor() as usize).min(3);
            let f = s - e as f64;
            let (a, b) = (corners[e], corners[(e + 1) % 4]);
            grid.node(a.0, a.1) * (1.0 - f) + grid.node(b.0, b.1) * f
        };
        Some(loop_winding(&nodes, 4.0, &p, &displacement, opts.max_depth))
    });
    for (cell, w) in cell_windings.into_iter().enumerate() {
        let (i, j) = (cell / grid.n, cell % grid.n);
        match w {
            Some(Ok(0)) | None => {}
            Some(Ok(_)) => seeds.push(Seed::Cell { i, j }),
            Some(Err(Error::ZeroOnLoop { .. })) => {}
            Some(Err(e)) => {
                diagnostics.push(Diagnostic { grid_index: grid.index(i, j), stage: "cell winding", error: e })
            }
        }
    }

    let h = grid.spacing();
    let refined = exec.map_indexed(seeds.len(), |s| {
        let (start, index) = match seeds[s] {
            Seed::Cell { i, j } => (grid.node(i, j) + Complex64::new(0.5 * h, 0.5 * h), grid.index(i, j)),
            Seed::Node { i, j } => (grid.node(i, j), grid.index(i, j)),
        };
        (index, certify(start, k, tom, sc, opts, h, &displacement))
    });
    let mut certificates: Vec<RecurrenceCertificate> = Vec::new();
    for (index, r) in refined {
        match r {
            Ok(mut cert) => {
                if certificates.iter().any(|c| (c.c_star - cert.c_star).norm() <= 1e-7) {
                    continue;
                }
                cert.grid_index = index;
                certificates.push(cert);
            }
            Err((stage, error)) => diagnostics.push(Diagnostic { grid_index: index, stage, error }),
        }
    }
    certificates.sort_by_key(|c| c.grid_index);
    RecurrenceSearch { certificates, nodes: evaluated.into_iter().flatten().collect(), diagnostics }
}

fn certify<S: Scenario>(
    start: Complex64,
    k: usize,
    tom: &Tomography,
    sc: &S,
    opts: &RecurrenceOptions,
    spacing: f64,
    displacement: &dyn Fn(Complex64) -> Result<Complex64>,
) -> core::result::Result<RecurrenceCertificate, (&'static str, Error)> {
    let newton = |e| ("newton", e);
    let mut c = start;
    let mut d = displacement(c).map_err(newton)?;
    let mut trace = alloc::vec![RefinementStep { iteration: 0, c, residual: d.norm(), damping: 1.0 }];
    for it in 1..=opts.max_newton {
        if d.norm() <= opts.newton_target {
            break;
        }
        let hs = opts.fd_step;
        let dx = (displacement(c + hs).map_err(newton)? - d) / hs;
        let dy = (displacement(c + Complex64::new(0.0, hs)).map_err(newton)? - d) / hs;
        let det = dx.re * dy.im - dy.re * dx.im;
        if det.abs() < 1e-300 {
            return Err(("newton", Error::InvalidParameter("singular displacement Jacobian")));
        }
        let step = Complex64::new((-d.re * dy.im + dy.re * d.im) / det, (-dx.re * d.im + dx.im * d.re) / det);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let trial = c + step * lambda;
            if tom.contains(trial) {
                if let Ok(dt) = displacement(trial) {
                    if dt.norm() < d.norm() {
                        accepted = Some((trial, dt));
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        let Some((cn, dn)) = accepted else { break };
        c = cn;
        d = dn;
        trace.push(RefinementStep { iteration: it, c, residual: d.norm(), damping: lambda });
    }
    let residual = d.norm();
    if !(residual <= opts.residual_tol) {
        return Err(("newton", Error::InvalidParameter("Newton refinement did not reach the residual tolerance")));
    }

    let radius = (0.25 * spacing).min(0.5 * (tom.r0 - c.norm())).max(1e-6 * spacing);
    let n = 16;
    let point_at = |s: f64| c + Complex64::from_polar(radius, TAU * s / n as f64);
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let p = point_at(i as f64);
        nodes.push((i as f64, displacement(p).map_err(|e| ("loop", e))?));
    }
    let winding = loop_winding(&nodes, n as f64, &point_at, displacement, opts.max_depth).map_err(|e| ("loop", e))?;
    if winding == 0 {
        return Err(("loop", Error::InvalidParameter("small loop around the refined point has winding 0")));
    }
    let sample = return_sample(c, k, tom, sc).map_err(|e| ("label", e))?;
    let start_label = LeafLabel { theta: tom.theta0, c };
    let leaf_recurrent = sample.label.approx_eq(&start_label, opts.leaf_tol);
    Ok(RecurrenceCertificate {
        c_star: c,
        k,
        winding,
        residual,
        tomography: *tom,
        grid_index: 0,
        loop_radius: radius,
        leaf_recurrent,
        return_time: sample.time,
        trace,
    })
}
