#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

pub const DEFAULT_COLLISION_GUARD: f64 = 1e-6;

pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Rotating-frame state `(q, p)` of the spatial circular restricted three-body problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub q: Vec3,
    pub p: Vec3,
    pub mu: f64,
}

impl PhaseState {
    pub fn new(q: Vec3, p: Vec3, mu: f64) -> Self {
        PhaseState { q, p, mu }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.q[0], self.q[1], self.q[2], self.p[0], self.p[1], self.p[2]]
    }

    pub fn from_array(y: &[f64; 6], mu: f64) -> Self {
        PhaseState { q: [y[0], y[1], y[2]], p: [y[3], y[4], y[5]], mu }
    }

    pub fn is_planar(&self) -> bool {
        self.q[2] == 0.0 && self.p[2] == 0.0
    }
}

/// The Hamiltonian system
/// `H = ½|p|² + p₁q₂ − p₂q₁ − (1−μ)/|q − q_H| − μ/|q − q_L|`
/// with the heavy primary at `(−μ, 0, 0)` and the light one at `(1−μ, 0, 0)`.
///
/// With `rotating = false` the Coriolis term is dropped (inertial Kepler problem for `μ = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scr3bp {
    pub mu: f64,
    pub rotating: bool,
    pub collision_guard: f64,
}

impl Scr3bp {
    pub fn new(mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::InvalidParameter("mass ratio must lie in [0, 1]"));
        }
        Ok(Scr3bp { mu, rotating: true, collision_guard: DEFAULT_COLLISION_GUARD })
    }

    /// Inertial spatial Kepler problem about the origin.
    pub fn kepler() -> Self {
        Scr3bp { mu: 0.0, rotating: false, collision_guard: DEFAULT_COLLISION_GUARD }
    }

    pub fn with_guard(mut self, guard: f64) -> Self {
        self.collision_guard = guard;
        self
    }

    pub fn heavy(&self) -> Vec3 {
        [-self.mu, 0.0, 0.0]
    }

    pub fn light(&self) -> Vec3 {
        [1.0 - self.mu, 0.0, 0.0]
    }

    fn distances(&self, q: &Vec3) -> Result<(f64, f64)> {
        let rh = norm(&sub(q, &self.heavy()));
        let rl = norm(&sub(q, &self.light()));
        let guard = self.collision_guard;
        if (self.mu < 1.0 && rh < guard) || (self.mu > 0.0 && rl < guard) {
            return Err(Error::CollisionGuard { distance: rh.min(rl), guard });
        }
        Ok((rh, rl))
    }

    pub fn hamiltonian(&self, s: &PhaseState) -> f64 {
        let (q, p) = (&s.q, &s.p);
        let rh = norm(&sub(q, &self.heavy()));
        let rl = norm(&sub(q, &self.light()));
        let mut h = 0.5 * dot(p, p) - (1.0 - self.mu) / rh;
        if self.mu > 0.0 {
            h -= self.mu / rl;
        }
        if self.rotating {
            h += p[0] * q[1] - p[1] * q[0];
        }
        h
    }

    /// Hamiltonian vector field on `y = (q, p)`.
    pub fn derivative(&self, y: &[f64; 6]) -> Result<[f64; 6]> {
        let q = [y[0], y[1], y[2]];
        let (rh, rl) = self.distances(&q)?;
        let dh = sub(&q, &self.heavy());
        let dl = sub(&q, &self.light());
        let ch = (1.0 - self.mu) / (rh * rh * rh);
        let cl = if self.mu > 0.0 { self.mu / (rl * rl * rl) } else { 0.0 };
        let mut out = [y[3], y[4], y[5], -ch * dh[0] - cl * dl[0], -ch * dh[1] - cl * dl[1], -ch * dh[2] - cl * dl[2]];
        if self.rotating {
            out[0] += y[1];
            out[1] -= y[0];
            out[3] += y[4];
            out[4] -= y[3];
        }
        Ok(out)
    }
}

/// Rotating-frame Hamiltonian value (the Jacobi-type energy `c`) of `s`.
pub fn jacobi_constant(s: &PhaseState) -> f64 {
    Scr3bp { mu: s.mu, rotating: true, collision_guard: DEFAULT_COLLISION_GUARD }.hamiltonian(s)
}

/// `(dq/dt, dp/dt)` with the default collision guard.
pub fn scr3bp_derivative(s: &PhaseState) -> Result<(Vec3, Vec3)> {
    let sys = Scr3bp::new(s.mu)?;
    let d = sys.derivative(&s.to_array())?;
    Ok(([d[0], d[1], d[2]], [d[3], d[4], d[5]]))
}
