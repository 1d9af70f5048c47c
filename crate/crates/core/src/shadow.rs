//! Transverse shadows, the Katok semi-conjugacies and symplectic positivity of leaves.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::flows::{katok_flow, spheroid_flow, KatokParams, SpheroidParams};
use crate::geometry::{spheroid_project, Chart, ComplexVec4, CoordinateFrame, LeafLabel, StiefelPoint};
use crate::poincare::LeafChart;
use crate::scenario::{Propagator, Scenario};

/// A contact form `α = α_std / K` with `K = Σ k_j |w_j|²` in some unitary coordinates `w`,
/// where `α_std(v) = Im⟨z, v⟩`.
pub trait ContactForm {
    /// Coordinates in which `K` is diagonal, from the ambient ones.
    fn to_weighted(&self, z: &[Complex64]) -> Vec<Complex64>;
    fn weights(&self) -> Vec<f64>;

    fn alpha(&self, p: &[Complex64], v: &[Complex64]) -> f64 {
        let (w, u) = (self.to_weighted(p), self.to_weighted(v));
        hermitian(&w, &u).im / energy(&self.weights(), &w)
    }

    fn d_alpha(&self, p: &[Complex64], v: &[Complex64], u: &[Complex64]) -> f64 {
        let k = self.weights();
        let w = self.to_weighted(p);
        let (a, b) = (self.to_weighted(v), self.to_weighted(u));
        let h = energy(&k, &w);
        let dh = |x: &[Complex64]| -> f64 {
            2.0 * k.iter().zip(w.iter().zip(x)).map(|(kj, (wj, xj))| kj * (wj.conj() * xj).re).sum::<f64>()
        };
        let std_a = hermitian(&w, &a).im;
        let std_b = hermitian(&w, &b).im;
        2.0 * hermitian(&a, &b).im / h - (dh(&a) * std_b - dh(&b) * std_a) / (h * h)
    }
}

fn hermitian(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn energy(k: &[f64], w: &[Complex64]) -> f64 {
    k.iter().zip(w).map(|(kj, wj)| kj * wj.norm_sqr()).sum()
}

/// `α_ε = α_std / H_ε` with `H_ε = ‖w‖² + ε(|w₂|² − |w₃|²)` in Katok coordinates.
impl ContactForm for KatokParams {
    fn to_weighted(&self, z: &[Complex64]) -> Vec<Complex64> {
        let z = ComplexVec4([z[0], z[1], z[2], z[3]]);
        Chart::Katok.to_chart(&z).0.to_vec()
    }
    fn weights(&self) -> Vec<f64> {
        self.frequencies().to_vec()
    }
}

/// Standard form of the spheroid, `α_std / (a|u|² + b|v|²)` on the unit sphere of `ℂ²`.
impl ContactForm for SpheroidParams {
    fn to_weighted(&self, z: &[Complex64]) -> Vec<Complex64> {
        z.to_vec()
    }
    fn weights(&self) -> Vec<f64> {
        alloc::vec![self.a, self.b]
    }
}

/// Leaf labels along a flow line together with page-transversality margins.
#[derive(Debug, Clone, PartialEq)]
pub struct TransversePath {
    pub source: &'static str,
    pub samples: Vec<(f64, LeafLabel)>,
    /// Continuous page angle at each sample.
    pub unwrapped: Vec<f64>,
    /// Finite-difference estimates of the page-angle rate.
    pub margins: Vec<f64>,
}

impl TransversePath {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// First sample whose margin is not positive, reported as an error value.
    pub fn transversality_loss(&self) -> Option<Error> {
        self.margins
            .iter()
            .zip(&self.samples)
            .find(|(m, _)| !(**m > 0.0))
            .map(|(m, (t, _))| Error::TransversalityLoss { t: *t, margin: *m })
    }
}

fn advance<P: Propagator>(prop: &mut P, t: f64) -> Result<P::State> {
    while prop.time() < t {
        prop.step()?;
    }
    prop.evaluate(t)
}

fn angle_step(a: f64, b: f64) -> f64 {
    let d = (b - a) % TAU;
    if d > core::f64::consts::PI {
        d - TAU
    } else if d <= -core::f64::consts::PI {
        d + TAU
    } else {
        d
    }
}

/// Samples the leaf label of the flow line through `start` every `dt` up to `t_end`.
///
/// The page angle is continued by nearest branch; a step of `π/2` or more is resampled
/// at half spacing (up to eight times).
pub fn shadow_path<S: Scenario>(sc: &S, start: &S::State, t_end: f64, dt: f64) -> Result<TransversePath> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::InvalidParameter("shadow path needs dt > 0 and T >= 0"));
    }
    let mut prop = sc.propagator(start)?;
    let first = sc.label(start)?;
    let mut samples = alloc::vec![(0.0, first)];
    let mut unwrapped = alloc::vec![first.theta];
    let n = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    for j in 1..=n {
        let t = (j as f64 * dt).min(t_end);
        let state = advance(&mut prop, t)?;
        let label = sc.label(&state)?;
        let (t_prev, l_prev) = samples[samples.len() - 1];
        if angle_step(l_prev.theta, label.theta).abs() >= FRAC_PI_2 {
            // Fill in with finer samples until every step is small.
            let mut fine = alloc::vec![(t_prev, l_prev), (t, label)];
            let mut depth = 0;
            while fine.windows(2).any(|w| angle_step(w[0].1.theta, w[1].1.theta).abs() >= FRAC_PI_2) {
                depth += 1;
                if depth > 8 {
                    return Err(Error::AdaptiveRefineNeeded { index: j, step: angle_step(l_prev.theta, label.theta) });
                }
                let mut next = Vec::with_capacity(2 * fine.len());
                for w in fine.windows(2) {
                    let tm = 0.5 * (w[0].0 + w[1].0);
                    next.push(w[0]);
                    next.push((tm, sc.label(&prop.evaluate(tm)?)?));
                }
                next.push(fine[fine.len() - 1]);
                fine = next;
            }
            for w in fine.windows(2) {
                let last = unwrapped[unwrapped.len() - 1];
                unwrapped.push(last + angle_step(w[0].1.theta, w[1].1.theta));
                samples.push(w[1]);
            }
        } else {
            let last = unwrapped[unwrapped.len() - 1];
            unwrapped.push(last + angle_step(l_prev.theta, label.theta));
            samples.push((t, label));
        }
    }
    let margins = (0..samples.len())
        .map(|i| {
            if samples.len() < 2 {
                return f64::NAN;
            }
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(samples.len() - 1);
            (unwrapped[hi] - unwrapped[lo]) / (samples[hi].0 - samples[lo].0)
        })
        .collect();
    Ok(TransversePath { source: sc.name(), samples, unwrapped, margins })
}

/// Largest distance between the projected Katok flow and the spheroid flow it should match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugacyReport {
    pub max_residual: f64,
    pub sample_count: usize,
    pub frame: CoordinateFrame,
    pub spheroid: SpheroidParams,
}

/// The spheroid `S_i = S(1, f_i)` that the projection `σ_i(w) = (w₀, w_i)/‖(w₀, w_i)‖`
/// semi-conjugates the Katok flow to.
pub fn shadow_spheroid(k: &KatokParams, axis: usize) -> Result<SpheroidParams> {
    if !(1..=3).contains(&axis) {
        return Err(Error::InvalidParameter("projection axis must be 1, 2 or 3"));
    }
    SpheroidParams::new(1.0, k.frequencies()[axis])
}

/// Maximum over starts and times of `‖σ_i(φ_t(p)) − ψ_t(σ_i(p))‖`.
pub fn conjugacy_residual<E: Executor>(
    k: &KatokParams,
    axis: usize,
    starts: &[StiefelPoint],
    times: &[f64],
    exec: &E,
) -> Result<ConjugacyReport> {
    let spheroid = shadow_spheroid(k, axis)?;
    let frame = CoordinateFrame::new(Chart::Katok, 0, axis, false)?;
    let per_start = exec.map_indexed(starts.len(), |i| -> Result<f64> {
        let p = &starts[i];
        let base = spheroid_project(p, &frame)?;
        let mut worst = 0.0f64;
        for &t in times {
            let lhs = spheroid_project(&katok_flow(p, t, k), &frame)?;
            let rhs = spheroid_flow(&base, t, &spheroid);
            worst = worst.max(lhs.distance(&rhs));
        }
        Ok(worst)
    });
    let mut max_residual = 0.0f64;
    for r in per_start {
        max_residual = max_residual.max(r?);
    }
    Ok(ConjugacyReport { max_residual, sample_count: starts.len() * times.len(), frame, spheroid })
}

/// Minimum and maximum of `dα` on oriented unit tangent planes of a leaf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport {
    pub leaf: LeafLabel,
    pub frame: CoordinateFrame,
    pub samples: usize,
    pub min_value: f64,
    pub max_value: f64,
}

/// Evaluates `dα` on the leaf `{arg u_ob = θ, u_lf = c/√2}`, oriented so that the binding
/// is its positively oriented boundary, and normalized by the area of the tangent frame.
pub fn leaf_symplectic_check<F: ContactForm>(
    form: &F,
    frame: &CoordinateFrame,
    leaf: &LeafLabel,
    n_samples: usize,
) -> Result<PositivityReport> {
    let chart = LeafChart::new(*frame, *leaf)?;
    let hm = chart.fold_height();
    if hm < 1e-9 {
        return Err(Error::DegenerateLeaf { area: hm });
    }
    let n_h = (((n_samples.max(2) / 2) as f64).sqrt().ceil() as usize).max(1);
    let n_psi = (n_samples.max(2) / 2).div_ceil(n_h).max(1);
    let dh = 1e-6 * hm;
    let dpsi = 1e-6;
    let tangents = |h: f64, psi: f64, upper: bool| -> Result<(StiefelPoint, ComplexVec4, ComplexVec4)> {
        let p = chart.point(h, psi, upper)?;
        let d_h =
            (*chart.point(h + dh, psi, upper)?.coords() - *chart.point(h - dh, psi, upper)?.coords()).scale(0.5 / dh);
        let d_psi = (*chart.point(h, psi + dpsi, upper)?.coords() - *chart.point(h, psi - dpsi, upper)?.coords())
            .scale(0.5 / dpsi);
        Ok((p, d_h, d_psi))
    };
    let mut min_value = f64::INFINITY;
    let mut max_value = f64::NEG_INFINITY;
    let mut count = 0;
    for upper in [true, false] {
        // Orientation: the binding (h → 0) must be a positively oriented boundary.
        let (p, _, d_psi) = tangents(1e-3 * hm, 0.0, upper)?;
        let sign = form.alpha(&p.coords().0, &d_psi.0).signum();
        for i in 0..n_h {
            let h = hm * (i as f64 + 0.5) / n_h as f64;
            for j in 0..n_psi {
                let psi = TAU * j as f64 / n_psi as f64;
                let (p, d_h, d_psi) = tangents(h, psi, upper)?;
                let gram = d_h.norm_sqr() * d_psi.norm_sqr() - d_h.hermitian(&d_psi).re.powi(2);
                let area = gram.max(0.0).sqrt();
                if area < 1e-12 {
                    return Err(Error::DegenerateLeaf { area });
                }
                let v = sign * form.d_alpha(&p.coords().0, &d_psi.0, &d_h.0) / area;
                min_value = min_value.min(v);
                max_value = max_value.max(v);
                count += 1;
            }
        }
    }
    Ok(PositivityReport { leaf: *leaf, frame: *frame, samples: count, min_value, max_value })
}
