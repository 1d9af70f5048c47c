use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::Tomography;
use crate::error::{Error, Result};
use crate::geometry::{circle_distance, phase_step, LeafLabel, BINDING_TOL};
use crate::scenario::{scenario_phase, Propagator, Scenario};

/// Largest admissible distance between a refined crossing and its page.
pub const CROSSING_TOL: f64 = 1e-10;
/// Crossings closer than this in time count as grazing.
pub const GRAZING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingEvent<T> {
    pub t_cross: f64,
    pub point: T,
    /// 1-based crossing count.
    pub index: usize,
    /// Circle distance between the page angle of `point` and the target page.
    pub refinement_residual: f64,
    /// Page-angle rate at the crossing.
    pub margin: f64,
}

/// Crossings of one flow line plus trajectory diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingRun<T> {
    pub events: Vec<CrossingEvent<T>>,
    /// Energy drift reported by the propagator.
    pub max_drift: f64,
    /// Smallest average page-angle rate over a sampled segment.
    pub min_rate: f64,
}

fn ob_of<S: Scenario>(sc: &S, s: &S::State) -> Result<Complex64> {
    let ob = sc.ob_coordinate(s)?;
    if ob.norm() <= BINDING_TOL {
        return Err(Error::OnBinding { modulus: ob.norm() });
    }
    Ok(ob)
}

/// Time at which the continued page angle `psi_a + Δarg` reaches `target` on `[ta, tb]`,
/// by Illinois regula falsi on exact evaluations.
fn refine<S: Scenario>(
    sc: &S,
    prop: &S::Propagator,
    (ta, ob_a, psi_a): (f64, Complex64, f64),
    tb: f64,
    psi_b: f64,
    target: f64,
) -> Result<f64> {
    let g = |t: f64| -> Result<f64> { Ok(psi_a + phase_step(ob_a, ob_of(sc, &prop.evaluate(t)?)?) - target) };
    let (mut a, mut fa) = (ta, psi_a - target);
    let (mut b, mut fb) = (tb, psi_b - target);
    if fb == 0.0 {
        return Ok(b);
    }
    let mut side = 0i8;
    let mut t = b;
    for it in 0..200 {
        t = if it % 8 == 7 { 0.5 * (a + b) } else { (a * fb - b * fa) / (fb - fa) };
        if !(t > a && t < b) {
            t = 0.5 * (a + b);
        }
        let ft = g(t)?;
        if ft.abs() <= 1e-14 || (b - a) <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
            break;
        }
        if (ft > 0.0) == (fb > 0.0) {
            b = t;
            fb = ft;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = t;
            fa = ft;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(t)
}

/// The first `k_max` upward crossings of the page `theta0` by the flow line through `start`.
///
/// A start lying on the page (within the crossing tolerance) is snapped to it and its next
/// crossing is one full turn later.
pub fn page_crossings<S: Scenario>(
    sc: &S,
    start: &S::State,
    theta0: f64,
    k_max: usize,
) -> Result<CrossingRun<S::State>> {
    let mut run = CrossingRun { events: Vec::new(), max_drift: 0.0, min_rate: f64::INFINITY };
    if k_max == 0 {
        return Ok(run);
    }
    let mut prop = sc.propagator(start)?;
    let ob0 = ob_of(sc, start)?;
    let offset = {
        let d = (ob0.arg() - theta0) % TAU;
        if d > core::f64::consts::PI {
            d - TAU
        } else if d <= -core::f64::consts::PI {
            d + TAU
        } else {
            d
        }
    };
    let mut psi = if offset.abs() <= CROSSING_TOL { 0.0 } else { offset };
    let mut target = if psi < 0.0 { 0.0 } else { TAU };
    let budget = sc.crossing_budget() * k_max as f64;
    let mut t_prev = prop.time();
    let mut ob_prev = ob0;
    loop {
        prop.step()?;
        let t_now = prop.time();
        let ob_now = ob_of(sc, &prop.state())?;
        // Sub-sample the step until every page-angle increment is below π/2.
        let mut nodes = alloc::vec![(t_prev, ob_prev), (t_now, ob_now)];
        let mut depth = 0;
        while nodes.windows(2).any(|w| phase_step(w[0].1, w[1].1).abs() >= FRAC_PI_2) {
            depth += 1;
            if depth > 10 {
                return Err(Error::AdaptiveRefineNeeded { index: run.events.len(), step: phase_step(ob_prev, ob_now) });
            }
            let mut finer = Vec::with_capacity(2 * nodes.len());
            for w in nodes.windows(2) {
                let tm = 0.5 * (w[0].0 + w[1].0);
                finer.push(w[0]);
                finer.push((tm, ob_of(sc, &prop.evaluate(tm)?)?));
            }
            finer.push(nodes[nodes.len() - 1]);
            nodes = finer;
        }
        for w in nodes.windows(2) {
            let ((ta, oa), (tb, ob)) = (w[0], w[1]);
            let step = phase_step(oa, ob);
            run.min_rate = run.min_rate.min(step / (tb - ta));
            let psi_b = psi + step;
            while psi_b >= target {
                let tc = refine(sc, &prop, (ta, oa, psi), tb, psi_b, target)?;
                let point = prop.evaluate(tc)?;
                let residual = circle_distance(scenario_phase(sc, &point)?, theta0);
                let dt = 1e-4 * (tb - ta);
                let (lo, hi) = ((tc - dt).max(ta), (tc + dt).min(tb));
                let margin = phase_step(ob_of(sc, &prop.evaluate(lo)?)?, ob_of(sc, &prop.evaluate(hi)?)?) / (hi - lo);
                if !(margin > 0.0) {
                    return Err(Error::TransversalityLoss { t: tc, margin });
                }
                if let Some(last) = run.events.last() {
                    if tc - last.t_cross <= GRAZING_TOL {
                        return Err(Error::TransversalityLoss { t: tc, margin });
                    }
                }
                if residual > CROSSING_TOL {
                    return Err(Error::TransversalityLoss { t: tc, margin });
                }
                run.events.push(CrossingEvent {
                    t_cross: tc,
                    point,
                    index: run.events.len() + 1,
                    refinement_residual: residual,
                    margin,
                });
                if run.events.len() == k_max {
                    run.max_drift = prop.max_drift();
                    return Ok(run);
                }
                target += TAU;
            }
            psi = psi_b;
        }
        t_prev = t_now;
        ob_prev = ob_now;
        if t_now > budget {
            return Err(Error::IntegrationBudgetExceeded { t: t_now, crossings: run.events.len() });
        }
    }
}

/// One evaluation of the return map with the data needed to audit it.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSample {
    pub c: Complex64,
    /// Fibration value at the k-th crossing, `f_{k,D}(c)`.
    pub image: Complex64,
    pub label: LeafLabel,
    pub time: f64,
    pub max_drift: f64,
    pub min_rate: f64,
    /// Smallest crossing margin among the first `k` crossings.
    pub min_margin: f64,
}

/// `f_{k,D}(c)` together with its crossing diagnostics.
pub fn return_sample<S: Scenario>(c: Complex64, k: usize, tom: &Tomography, sc: &S) -> Result<ReturnSample> {
    if k == 0 {
        return Err(Error::InvalidParameter("return index k must be at least 1"));
    }
    let start = sc.section(c, tom)?;
    let run = page_crossings(sc, &start, tom.theta0, k)?;
    let last = &run.events[k - 1];
    let label = sc.label(&last.point)?;
    Ok(ReturnSample {
        c,
        image: label.c,
        label,
        time: last.t_cross,
        max_drift: run.max_drift,
        min_rate: run.min_rate,
        min_margin: run.events.iter().map(|e| e.margin).fold(f64::INFINITY, f64::min),
    })
}

/// `f_{k,D}(c)`: the fibration value of the flow line through the section point over `c`
/// at its `k`-th return to the page. Never computed by composing first returns.
pub fn return_map<S: Scenario>(c: Complex64, k: usize, tom: &Tomography, sc: &S) -> Result<Complex64> {
    Ok(return_sample(c, k, tom, sc)?.image)
}
