use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::scr3bp::{dot, norm, sub, PhaseState, Scr3bp, Vec3};
use crate::error::{Error, Result};
use crate::geometry::{ComplexVec4, StiefelPoint, CONSTRAINT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primary {
    Heavy,
    Light,
}

/// Which primary the regularization is centred on, and the largest admissible
/// osculating Kepler energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoserChartParams {
    pub primary: Primary,
    pub energy_floor: f64,
}

impl Default for MoserChartParams {
    fn default() -> Self {
        MoserChartParams { primary: Primary::Heavy, energy_floor: -1e-3 }
    }
}

impl MoserChartParams {
    pub fn new(primary: Primary, energy_floor: f64) -> Result<Self> {
        if !(energy_floor < 0.0) {
            return Err(Error::InvalidParameter("energy floor must be negative"));
        }
        Ok(MoserChartParams { primary, energy_floor })
    }

    /// Position and mass of the centre primary.
    pub fn center(&self, mu: f64) -> (Vec3, f64) {
        match self.primary {
            Primary::Heavy => ([-mu, 0.0, 0.0], 1.0 - mu),
            Primary::Light => ([1.0 - mu, 0.0, 0.0], mu),
        }
    }
}

/// Moser regularization of `s` about the chosen primary, after rescaling its osculating
/// Kepler energy to `−½`.
pub fn moser_chart(s: &PhaseState, mp: &MoserChartParams) -> Result<StiefelPoint> {
    let (qc, mc) = mp.center(s.mu);
    let d = sub(&s.q, &qc);
    let r = norm(&d);
    if r == 0.0 || mc == 0.0 {
        return Err(Error::CollisionGuard { distance: r, guard: 0.0 });
    }
    let energy = 0.5 * dot(&s.p, &s.p) - mc / r;
    if !(energy < mp.energy_floor) {
        return Err(Error::EnergyAboveFloor { energy, floor: mp.energy_floor });
    }
    let nu2 = -2.0 * energy;
    let nu = nu2.sqrt();
    let qp = d.map(|v| v * nu2);
    let pp = s.p.map(|v| v / nu);
    let n2 = dot(&pp, &pp);
    let x = [(n2 - 1.0) / (n2 + 1.0), 2.0 * pp[0] / (n2 + 1.0), 2.0 * pp[1] / (n2 + 1.0), 2.0 * pp[2] / (n2 + 1.0)];
    let qdp = dot(&qp, &pp);
    let k = 0.5 * (n2 + 1.0);
    let mut y = [qdp, k * qp[0] - qdp * pp[0], k * qp[1] - qdp * pp[1], k * qp[2] - qdp * pp[2]];
    let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    y.iter_mut().for_each(|v| *v /= ny);
    let u = ComplexVec4(core::array::from_fn(|j| Complex64::new(x[j], y[j]) * FRAC_1_SQRT_2));
    StiefelPoint::new(u, CONSTRAINT_TOL)
}

/// Inverse of [`moser_chart`] for a prescribed scale `nu = √(−2E)`.
pub fn moser_chart_inverse(p: &StiefelPoint, mp: &MoserChartParams, mu: f64, nu: f64) -> Result<PhaseState> {
    let (qc, mc) = mp.center(mu);
    let (x, y) = p.real_pair();
    let denom = 1.0 - x[0];
    if denom < 1e-12 {
        return Err(Error::DegenerateProjection);
    }
    let pp = [x[1] / denom, x[2] / denom, x[3] / denom];
    let n2 = dot(&pp, &pp);
    let k = mc * 2.0 / (n2 + 1.0);
    let qp: Vec3 = core::array::from_fn(|j| k * (y[j + 1] + y[0] * pp[j]));
    let nu2 = nu * nu;
    Ok(PhaseState::new(core::array::from_fn(|j| qc[j] + qp[j] / nu2), pp.map(|v| v * nu), mu))
}

/// Lifts `p` to the energy level `H = level` of `sys`, choosing the largest scale `ν`
/// solving the level equation (the bounded component around the centre primary).
pub fn lift_to_level(p: &StiefelPoint, mp: &MoserChartParams, sys: &Scr3bp, level: f64) -> Result<PhaseState> {
    let mu = sys.mu;
    let energy_at = |nu: f64| -> Result<f64> { Ok(sys.hamiltonian(&moser_chart_inverse(p, mp, mu, nu)?) - level) };
    let mut hi = 2.0 * (2.0 * level.abs()).sqrt() + 2.0;
    let mut g_hi = energy_at(hi)?;
    let mut guard = 0;
    while !(g_hi < 0.0) {
        hi *= 2.0;
        g_hi = energy_at(hi)?;
        guard += 1;
        if guard > 60 {
            return Err(Error::LevelUnreachable { level });
        }
    }
    let nu_min = (-2.0 * mp.energy_floor).sqrt();
    let mut lo = hi;
    loop {
        let next = lo * 0.97;
        if next <= nu_min {
            return Err(Error::LevelUnreachable { level });
        }
        let g = energy_at(next)?;
        if g >= 0.0 {
            hi = lo;
            lo = next;
            break;
        }
        lo = next;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if energy_at(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let nu = if energy_at(lo)?.abs() <= energy_at(hi)?.abs() { lo } else { hi };
    moser_chart_inverse(p, mp, mu, nu)
}
