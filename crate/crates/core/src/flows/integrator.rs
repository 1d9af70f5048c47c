#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;

use super::scr3bp::{PhaseState, Scr3bp};
use crate::error::{Error, Result};

type State = [f64; 6];

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// Step-size control for [`Stepper`] and [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorControl {
    /// Mixed absolute/relative local error tolerance.
    pub tol: f64,
    pub initial_step: f64,
    pub max_step: f64,
    /// Relative step floor; below `min_step · max(1, |t|)` the integration fails.
    pub min_step: f64,
}

impl Default for IntegratorControl {
    fn default() -> Self {
        IntegratorControl { tol: 1e-11, initial_step: 1e-3, max_step: 0.25, min_step: 1e-14 }
    }
}

impl IntegratorControl {
    pub fn with_tol(tol: f64) -> Self {
        IntegratorControl { tol, ..Self::default() }
    }
}

fn combine(y: &State, h: f64, ks: &[State], coeffs: &[f64]) -> State {
    let mut out = *y;
    for (k, &a) in ks.iter().zip(coeffs) {
        if a != 0.0 {
            for i in 0..6 {
                out[i] += h * a * k[i];
            }
        }
    }
    out
}

struct Trial {
    y: State,
    dy: State,
    err: State,
}

fn dp5(sys: &Scr3bp, y: &State, k1: &State, h: f64) -> Result<Trial> {
    let mut ks: Vec<State> = Vec::with_capacity(7);
    ks.push(*k1);
    let rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
    for row in rows {
        let yi = combine(y, h, &ks, row);
        ks.push(sys.derivative(&yi)?);
    }
    let y5 = combine(y, h, &ks, &B);
    ks.push(sys.derivative(&y5)?);
    let mut err = [0.0; 6];
    for (k, &e) in ks.iter().zip(E.iter()) {
        for i in 0..6 {
            err[i] += h * e * k[i];
        }
    }
    Ok(Trial { y: y5, dy: ks[6], err })
}

#[derive(Debug, Clone, Copy)]
struct Node {
    t: f64,
    y: State,
    dy: State,
}

/// Adaptive Dormand–Prince 5(4) stepper with FSAL and cubic Hermite dense output.
#[derive(Debug, Clone)]
pub struct Stepper {
    sys: Scr3bp,
    ctrl: IntegratorControl,
    cur: Node,
    prev: Option<Node>,
    h: f64,
    energy0: f64,
    pub steps: usize,
    pub rejected: usize,
    pub max_drift: f64,
}

impl Stepper {
    pub fn new(sys: Scr3bp, s: &PhaseState, ctrl: IntegratorControl) -> Result<Self> {
        let y = s.to_array();
        let dy = sys.derivative(&y)?;
        Ok(Stepper {
            sys,
            ctrl,
            cur: Node { t: 0.0, y, dy },
            prev: None,
            h: ctrl.initial_step,
            energy0: sys.hamiltonian(s),
            steps: 0,
            rejected: 0,
            max_drift: 0.0,
        })
    }

    pub fn system(&self) -> &Scr3bp {
        &self.sys
    }

    pub fn time(&self) -> f64 {
        self.cur.t
    }

    pub fn state(&self) -> PhaseState {
        PhaseState::from_array(&self.cur.y, self.sys.mu)
    }

    pub fn previous_time(&self) -> Option<f64> {
        self.prev.map(|n| n.t)
    }

    pub fn previous_state(&self) -> Option<PhaseState> {
        self.prev.map(|n| PhaseState::from_array(&n.y, self.sys.mu))
    }

    /// Takes one accepted step, never passing `t_limit` when given.
    pub fn step_bounded(&mut self, t_limit: Option<f64>) -> Result<()> {
        let mut rejected_here = false;
        loop {
            let mut h = self.h.min(self.ctrl.max_step);
            let mut clipped = false;
            if let Some(lim) = t_limit {
                let room = lim - self.cur.t;
                if room <= 0.0 {
                    return Err(Error::InvalidParameter("step limit lies behind the current time"));
                }
                if h >= room {
                    h = room;
                    clipped = true;
                }
            }
            if h < self.ctrl.min_step * self.cur.t.abs().max(1.0) && !clipped {
                return Err(Error::StepFailure { t: self.cur.t });
            }
            let trial = dp5(&self.sys, &self.cur.y, &self.cur.dy, h)?;
            let tol = self.ctrl.tol;
            let mut acc = 0.0;
            for i in 0..6 {
                let sc = tol + tol * self.cur.y[i].abs().max(trial.y[i].abs());
                acc += (trial.err[i] / sc).powi(2);
            }
            let err = (acc / 6.0).sqrt();
            if err <= 1.0 {
                let mut fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if rejected_here {
                    fac = fac.min(1.0);
                }
                self.prev = Some(self.cur);
                self.cur = Node { t: self.cur.t + h, y: trial.y, dy: trial.dy };
                if clipped {
                    self.h = self.h.max(h);
                } else {
                    self.h = h * fac;
                }
                self.steps += 1;
                let drift = (self.sys.hamiltonian(&self.state()) - self.energy0).abs();
                self.max_drift = self.max_drift.max(drift);
                return Ok(());
            }
            self.rejected += 1;
            rejected_here = true;
            self.h = h * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            if self.h < self.ctrl.min_step * self.cur.t.abs().max(1.0) {
                return Err(Error::StepFailure { t: self.cur.t });
            }
        }
    }

    pub fn step(&mut self) -> Result<()> {
        self.step_bounded(None)
    }

    /// Cubic Hermite interpolant on the last accepted step.
    pub fn interpolate(&self, t: f64) -> PhaseState {
        let Some(p) = self.prev else {
            return self.state();
        };
        let c = &self.cur;
        let h = c.t - p.t;
        let s = (t - p.t) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let y: State = core::array::from_fn(|i| h00 * p.y[i] + h10 * h * p.dy[i] + h01 * c.y[i] + h11 * h * c.dy[i]);
        PhaseState::from_array(&y, self.sys.mu)
    }

    /// Re-steps once from the previous accepted node to `t`; accurate to the local tolerance.
    pub fn evaluate(&self, t: f64) -> Result<PhaseState> {
        let Some(p) = self.prev else {
            return Ok(self.state());
        };
        let h = t - p.t;
        if h == 0.0 {
            return Ok(PhaseState::from_array(&p.y, self.sys.mu));
        }
        let trial = dp5(&self.sys, &p.y, &p.dy, h)?;
        Ok(PhaseState::from_array(&trial.y, self.sys.mu))
    }
}

/// Samples at every accepted step of an adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, PhaseState)>,
    pub steps: usize,
    pub rejected: usize,
    /// Largest deviation of the Hamiltonian from its initial value.
    pub max_drift: f64,
}

impl Trajectory {
    pub fn last(&self) -> &PhaseState {
        &self.samples[self.samples.len() - 1].1
    }
}

/// Integrates the rotating-frame problem with mass ratio `s.mu` over `[0, t_end]`.
pub fn integrate(s: &PhaseState, t_end: f64, ctrl: IntegratorControl) -> Result<Trajectory> {
    integrate_system(Scr3bp::new(s.mu)?, s, t_end, ctrl)
}

pub fn integrate_system(sys: Scr3bp, s: &PhaseState, t_end: f64, ctrl: IntegratorControl) -> Result<Trajectory> {
    if !(t_end >= 0.0) {
        return Err(Error::InvalidParameter("integration time must be non-negative"));
    }
    let mut stepper = Stepper::new(sys, s, ctrl)?;
    let mut samples = vec![(0.0, *s)];
    while stepper.time() < t_end {
        stepper.step_bounded(Some(t_end))?;
        samples.push((stepper.time(), stepper.state()));
    }
    Ok(Trajectory { samples, steps: stepper.steps, rejected: stepper.rejected, max_drift: stepper.max_drift })
}
