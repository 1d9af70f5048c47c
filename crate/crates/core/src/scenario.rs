//! Dynamical systems the shadow and return-map machinery runs on.
//!
//! A [`Scenario`] knows how to propagate its states, how to read the open-book coordinate and
//! the leaf label of a state, and how to turn a base value of a [`Tomography`] into a start.

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::flows::{
    katok_flow, lift_to_level, moser_chart, spheroid_flow, IntegratorControl, KatokParams, MoserChartParams,
    PhaseState, Scr3bp, SpheroidParams, Stepper,
};
use crate::geometry::{cis, wrap_angle, Chart, CoordinateFrame, LeafLabel, SpheroidPoint, StiefelPoint};
use crate::poincare::{tomography_section, Tomography};
use crate::shadow::ContactForm;

/// Step-wise time evolution with dense output.
pub trait Propagator {
    type State;

    fn time(&self) -> f64;
    fn state(&self) -> Self::State;
    /// Start of the last step (equal to [`Propagator::time`] before the first step).
    fn previous_time(&self) -> f64;
    fn step(&mut self) -> Result<()>;
    /// Cheap interpolant valid on the last step.
    fn interpolate(&self, t: f64) -> Self::State;
    /// Accurate state at `t`, normally inside or near the last step.
    fn evaluate(&self, t: f64) -> Result<Self::State>;
    /// Largest deviation of the conserved energy so far.
    fn max_drift(&self) -> f64 {
        0.0
    }
}

/// A flow with a closed-form solution.
pub trait ClosedFlow {
    type State: Copy;
    fn flow(&self, s: &Self::State, t: f64) -> Self::State;
}

impl ClosedFlow for KatokParams {
    type State = StiefelPoint;
    fn flow(&self, s: &StiefelPoint, t: f64) -> StiefelPoint {
        katok_flow(s, t, self)
    }
}

impl ClosedFlow for SpheroidParams {
    type State = SpheroidPoint;
    fn flow(&self, s: &SpheroidPoint, t: f64) -> SpheroidPoint {
        spheroid_flow(s, t, self)
    }
}

/// Fixed-step walker over a closed-form flow; every evaluation is exact.
#[derive(Debug, Clone)]
pub struct ClosedFormPropagator<F: ClosedFlow> {
    flow: F,
    start: F::State,
    t: f64,
    prev: f64,
    dt: f64,
}

impl<F: ClosedFlow> ClosedFormPropagator<F> {
    pub fn new(flow: F, start: F::State, dt: f64) -> Self {
        ClosedFormPropagator { flow, start, t: 0.0, prev: 0.0, dt }
    }
}

impl<F: ClosedFlow> Propagator for ClosedFormPropagator<F> {
    type State = F::State;

    fn time(&self) -> f64 {
        self.t
    }
    fn state(&self) -> F::State {
        self.flow.flow(&self.start, self.t)
    }
    fn previous_time(&self) -> f64 {
        self.prev
    }
    fn step(&mut self) -> Result<()> {
        self.prev = self.t;
        self.t += self.dt;
        Ok(())
    }
    fn interpolate(&self, t: f64) -> F::State {
        self.flow.flow(&self.start, t)
    }
    fn evaluate(&self, t: f64) -> Result<F::State> {
        Ok(self.flow.flow(&self.start, t))
    }
}

impl Propagator for Stepper {
    type State = PhaseState;

    fn time(&self) -> f64 {
        Stepper::time(self)
    }
    fn state(&self) -> PhaseState {
        Stepper::state(self)
    }
    fn previous_time(&self) -> f64 {
        Stepper::previous_time(self).unwrap_or(Stepper::time(self))
    }
    fn step(&mut self) -> Result<()> {
        Stepper::step(self)
    }
    fn interpolate(&self, t: f64) -> PhaseState {
        Stepper::interpolate(self, t)
    }
    fn evaluate(&self, t: f64) -> Result<PhaseState> {
        Stepper::evaluate(self, t)
    }
    fn max_drift(&self) -> f64 {
        self.max_drift
    }
}

pub trait Scenario: Sync {
    type State: Clone + Send + Sync + core::fmt::Debug;
    type Propagator: Propagator<State = Self::State>;

    fn name(&self) -> &'static str;
    fn propagator(&self, start: &Self::State) -> Result<Self::Propagator>;
    /// Open-book coordinate; its argument is the page angle.
    fn ob_coordinate(&self, s: &Self::State) -> Result<Complex64>;
    fn label(&self, s: &Self::State) -> Result<LeafLabel>;
    /// Start state over the base value `c` of `tom`.
    fn section(&self, c: Complex64, tom: &Tomography) -> Result<Self::State>;
    /// Flow time after which a page crossing is overdue.
    fn crossing_budget(&self) -> f64;
    /// Density of the pulled-back area form `dα` on the section at `c` (relative to `dx ∧ dy`).
    fn area_density(&self, _c: Complex64, _tom: &Tomography) -> Result<f64> {
        Ok(1.0)
    }
}

/// Page angle in `[0, 2π)` of a scenario state.
pub fn scenario_phase<S: Scenario>(sc: &S, s: &S::State) -> Result<f64> {
    let ob = sc.ob_coordinate(s)?;
    if ob.norm() <= crate::geometry::BINDING_TOL {
        return Err(Error::OnBinding { modulus: ob.norm() });
    }
    Ok(wrap_angle(ob.arg()))
}

const FD_STEP: f64 = 1e-6;

/// Central differences of a section map along both real directions of `c`.
fn section_tangents<T>(c: Complex64, f: impl Fn(Complex64) -> Result<T>, diff: impl Fn(&T, &T) -> T) -> Result<(T, T)> {
    let h = FD_STEP;
    let dx = diff(&f(c + h)?, &f(c - h)?);
    let dy = diff(&f(c + Complex64::new(0.0, h))?, &f(c - Complex64::new(0.0, h))?);
    Ok((dx, dy))
}

fn check_frame(own: &CoordinateFrame, tom: &Tomography) -> Result<()> {
    if own != &tom.frame {
        return Err(Error::InvalidParameter("tomography frame differs from the scenario frame"));
    }
    Ok(())
}

/// Katok's perturbed flow read in a frame of the Katok chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KatokScenario {
    pub params: KatokParams,
    pub frame: CoordinateFrame,
}

impl KatokScenario {
    pub fn new(params: KatokParams, frame: CoordinateFrame) -> Self {
        KatokScenario { params, frame }
    }

    /// Frame with open book `w₀` and fibration `w_i`.
    pub fn standard(params: KatokParams, lf_axis: usize) -> Result<Self> {
        Ok(KatokScenario { params, frame: CoordinateFrame::new(Chart::Katok, 0, lf_axis, false)? })
    }
}

impl Scenario for KatokScenario {
    type State = StiefelPoint;
    type Propagator = ClosedFormPropagator<KatokParams>;

    fn name(&self) -> &'static str {
        "katok"
    }
    fn propagator(&self, start: &StiefelPoint) -> Result<Self::Propagator> {
        Ok(ClosedFormPropagator::new(self.params, *start, 1.0 / 32.0))
    }
    fn ob_coordinate(&self, s: &StiefelPoint) -> Result<Complex64> {
        Ok(self.frame.ob_coordinate(&s.in_chart(self.frame.chart)))
    }
    fn label(&self, s: &StiefelPoint) -> Result<LeafLabel> {
        crate::geometry::leaf_label(s, &self.frame)
    }
    fn section(&self, c: Complex64, tom: &Tomography) -> Result<StiefelPoint> {
        check_frame(&self.frame, tom)?;
        tomography_section(c, tom)
    }
    fn crossing_budget(&self) -> f64 {
        let f = self.params.frequencies();
        2.0 / f.iter().cloned().fold(f64::INFINITY, f64::min)
    }
    fn area_density(&self, c: Complex64, tom: &Tomography) -> Result<f64> {
        let p = self.section(c, tom)?;
        let (vx, vy) =
            section_tangents(c, |x| Ok(*self.section(x, tom)?.coords()), |a, b| (*a - *b).scale(0.5 / FD_STEP))?;
        Ok(self.params.d_alpha(&p.coords().0, &vx.0, &vy.0))
    }
}

/// Spheroid `S(a, b)`: open book on `v`, leaves labelled by `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpheroidScenario {
    pub params: SpheroidParams,
}

impl Scenario for SpheroidScenario {
    type State = SpheroidPoint;
    type Propagator = ClosedFormPropagator<SpheroidParams>;

    fn name(&self) -> &'static str {
        "spheroid"
    }
    fn propagator(&self, start: &SpheroidPoint) -> Result<Self::Propagator> {
        let dt = 1.0 / (32.0 * self.params.a.max(self.params.b));
        Ok(ClosedFormPropagator::new(self.params, *start, dt))
    }
    fn ob_coordinate(&self, s: &SpheroidPoint) -> Result<Complex64> {
        Ok(s.v)
    }
    fn label(&self, s: &SpheroidPoint) -> Result<LeafLabel> {
        if s.v.norm() <= crate::geometry::BINDING_TOL {
            return Err(Error::OnBinding { modulus: s.v.norm() });
        }
        Ok(LeafLabel { theta: wrap_angle(s.v.arg()), c: s.u })
    }
    fn section(&self, c: Complex64, tom: &Tomography) -> Result<SpheroidPoint> {
        if !tom.contains(c) {
            return Err(Error::OutOfDomain { modulus: c.norm(), radius: tom.r0 });
        }
        SpheroidPoint::new(c, cis(tom.theta0) * (1.0 - c.norm_sqr()).sqrt())
    }
    fn crossing_budget(&self) -> f64 {
        2.0 / self.params.b
    }
    fn area_density(&self, c: Complex64, tom: &Tomography) -> Result<f64> {
        let p = self.section(c, tom)?;
        let (vx, vy) = section_tangents(
            c,
            |x| {
                let s = self.section(x, tom)?;
                Ok([s.u, s.v])
            },
            |a, b| [(a[0] - b[0]) * (0.5 / FD_STEP), (a[1] - b[1]) * (0.5 / FD_STEP)],
        )?;
        Ok(self.params.d_alpha(&[p.u, p.v], &vx, &vy))
    }
}

/// Which Hamiltonian system a [`Scr3bpScenario`] integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scr3bpKind {
    /// Inertial Kepler problem; the regularized flow is the geodesic flow.
    Kepler,
    /// Rotating frame with `μ = 0`.
    RotatingKepler,
    /// Rotating frame with `μ > 0`.
    Restricted,
}

/// Restricted three-body flow on a fixed energy level, read through the Moser chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scr3bpScenario {
    pub kind: Scr3bpKind,
    pub system: Scr3bp,
    pub level: f64,
    pub chart: MoserChartParams,
    pub frame: CoordinateFrame,
    pub control: IntegratorControl,
    pub budget: f64,
}

impl Scr3bpScenario {
    /// Open book `u₃` (the planar problem is the binding), fibration `u₀`.
    pub fn default_frame() -> CoordinateFrame {
        CoordinateFrame { chart: Chart::Quadric, ob_axis: 3, lf_axis: 0, conjugate_ob: false }
    }

    /// Frame with fibration the rotation-equivariant combination `(u₁ + i u₂)/√2`.
    pub fn equivariant_frame() -> CoordinateFrame {
        CoordinateFrame { chart: Chart::Equivariant, ob_axis: 3, lf_axis: 1, conjugate_ob: false }
    }

    fn build(kind: Scr3bpKind, system: Scr3bp, level: f64) -> Self {
        Scr3bpScenario {
            kind,
            system,
            level,
            chart: MoserChartParams::default(),
            frame: Self::default_frame(),
            control: IntegratorControl::default(),
            budget: 50.0,
        }
    }

    /// Inertial Kepler problem on the level `E = −½`.
    pub fn kepler() -> Self {
        Self::build(Scr3bpKind::Kepler, Scr3bp::kepler(), -0.5)
    }

    pub fn rotating_kepler(level: f64) -> Self {
        Self::build(Scr3bpKind::RotatingKepler, Scr3bp::new(0.0).expect("valid"), level)
    }

    pub fn restricted(mu: f64, level: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::InvalidParameter("restricted problem needs 0 < mu < 1"));
        }
        Ok(Self::build(Scr3bpKind::Restricted, Scr3bp::new(mu)?, level))
    }

    pub fn with_frame(mut self, frame: CoordinateFrame) -> Self {
        self.frame = frame;
        self
    }

    pub fn with_control(mut self, control: IntegratorControl) -> Self {
        self.control = control;
        self
    }

    /// Chart image of a phase-space state.
    pub fn chart_point(&self, s: &PhaseState) -> Result<StiefelPoint> {
        moser_chart(s, &self.chart)
    }

    /// Phase-space state on the scenario's level over a chart point.
    pub fn lift(&self, p: &StiefelPoint) -> Result<PhaseState> {
        lift_to_level(p, &self.chart, &self.system, self.level)
    }
}

impl Scenario for Scr3bpScenario {
    type State = PhaseState;
    type Propagator = Stepper;

    fn name(&self) -> &'static str {
        match self.kind {
            Scr3bpKind::Kepler => "kepler",
            Scr3bpKind::RotatingKepler => "rotating-kepler",
            Scr3bpKind::Restricted => "scr3bp",
        }
    }
    fn propagator(&self, start: &PhaseState) -> Result<Stepper> {
        Stepper::new(self.system, start, self.control)
    }
    fn ob_coordinate(&self, s: &PhaseState) -> Result<Complex64> {
        let p = self.chart_point(s)?;
        Ok(self.frame.ob_coordinate(&p.in_chart(self.frame.chart)))
    }
    fn label(&self, s: &PhaseState) -> Result<LeafLabel> {
        crate::geometry::leaf_label(&self.chart_point(s)?, &self.frame)
    }
    fn section(&self, c: Complex64, tom: &Tomography) -> Result<PhaseState> {
        check_frame(&self.frame, tom)?;
        self.lift(&tomography_section(c, tom)?)
    }
    fn crossing_budget(&self) -> f64 {
        self.budget
    }
    fn area_density(&self, c: Complex64, tom: &Tomography) -> Result<f64> {
        let (vx, vy) = section_tangents(
            c,
            |x| Ok(self.section(x, tom)?.to_array()),
            |a, b| core::array::from_fn(|i| (a[i] - b[i]) * (0.5 / FD_STEP)),
        )?;
        Ok((0..3).map(|i| vx[i] * vy[i + 3] - vx[i + 3] * vy[i]).sum())
    }
}
