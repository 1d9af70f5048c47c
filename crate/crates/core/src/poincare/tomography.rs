use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{cis, AxisKind, ComplexVec4, CoordinateFrame, LeafLabel, StiefelPoint, CONSTRAINT_TOL};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
enum SectionKind {
    /// Open-book and fibration axes are both square axes; the complementary pair is
    /// solved in quadric coordinates.
    Diagonal { rest: [usize; 2] },
    /// Fibration axis belongs to an isotropic pair `κ w_lf w_partner`.
    Isotropic { partner: usize, kappa: Complex64, square: usize },
}

fn section_kind(frame: &CoordinateFrame) -> Result<SectionKind> {
    if frame.chart.axis_kind(frame.ob_axis) != AxisKind::Square {
        return Err(Error::UnsupportedFrame("open-book axis must be a square axis of its chart"));
    }
    match frame.chart.axis_kind(frame.lf_axis) {
        AxisKind::Square => {
            let mut rest = [0; 2];
            let mut n = 0;
            for j in 0..4 {
                if j != frame.ob_axis && j != frame.lf_axis {
                    rest[n] = j;
                    n += 1;
                }
            }
            Ok(SectionKind::Diagonal { rest })
        }
        AxisKind::Isotropic { partner, kappa } => {
            let square = (0..4).find(|&j| j != frame.ob_axis && j != frame.lf_axis && j != partner).expect("four axes");
            Ok(SectionKind::Isotropic { partner, kappa, square })
        }
    }
}

/// A section of the page Lefschetz fibration over the disk `|c| ≤ r0` of the page `θ₀`.
///
/// For frames whose two axes are square axes the open-book modulus follows
/// `h² = (1 − |c|²)(1 − 2t0²)/2`, which requires `(1 − r0²)(1 − 2t0²) ≥ r0²`. When the
/// fibration axis sits in an isotropic pair the section is the explicit family with
/// `δ = t0` described in [`tomography_section`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tomography {
    pub theta0: f64,
    pub t0: f64,
    pub r0: f64,
    pub frame: CoordinateFrame,
}

impl Tomography {
    pub fn new(theta0: f64, t0: f64, r0: f64, frame: CoordinateFrame) -> Result<Self> {
        if !(t0 > 0.0 && t0 < 1.0) {
            return Err(Error::InvalidParameter("t0 must lie in (0, 1)"));
        }
        if !(r0 > 0.0 && r0 < 1.0) {
            return Err(Error::InvalidParameter("r0 must lie in (0, 1)"));
        }
        if !theta0.is_finite() {
            return Err(Error::InvalidParameter("theta0 must be finite"));
        }
        match section_kind(&frame)? {
            SectionKind::Diagonal { .. } => {
                if (1.0 - r0 * r0) * (1.0 - 2.0 * t0 * t0) < r0 * r0 {
                    return Err(Error::InvalidParameter("tomography violates (1 - r0^2)(1 - 2 t0^2) >= r0^2"));
                }
            }
            SectionKind::Isotropic { .. } => {
                if (1.0 + t0).powi(2) * r0 * r0 >= 2.0 {
                    return Err(Error::InvalidParameter("tomography violates (1 + t0)^2 r0^2 < 2"));
                }
            }
        }
        Ok(Tomography { theta0, t0, r0, frame })
    }

    /// Largest admissible `r0` of a diagonal-frame tomography with this `t0`.
    pub fn max_radius(t0: f64) -> f64 {
        let k = 1.0 - 2.0 * t0 * t0;
        (k / (1.0 + k)).sqrt()
    }

    /// Phase of the raw open-book coordinate on the page.
    pub fn raw_phase(&self) -> f64 {
        if self.frame.conjugate_ob {
            -self.theta0
        } else {
            self.theta0
        }
    }

    pub fn contains(&self, c: Complex64) -> bool {
        c.norm() <= self.r0 * (1.0 + 1e-12)
    }
}

/// Canonical solution of `a² + b² = S`, `|a|² + |b|² = m` with `arg` of the half phase
/// given by `phi / 2`.
fn half_phase_pair(m: f64, s_abs: f64, phi: f64) -> (Complex64, Complex64) {
    let rot = cis(0.5 * phi);
    let a = rot * ((m + s_abs) / 2.0).sqrt();
    let b = I * rot * ((m - s_abs).max(0.0) / 2.0).sqrt();
    (a, b)
}

/// Half-phase angle for `S = −(u_lf² + h² e^{2iθ'})`, continuous while `h > |u_lf|`.
fn section_phase(lf: Complex64, h: f64, theta: f64) -> f64 {
    2.0 * theta + PI + (lf * lf * cis(-2.0 * theta) + h * h).arg()
}

/// The section point over the base value `c`.
///
/// Diagonal frames: `u_ob = h e^{iθ'}`, `u_lf = c/√2` and the complementary pair `(a, b)`
/// solves `a² + b² = S := −(u_lf² + u_ob²)`, `|a|² + |b|² = m := 1 − |u_lf|² − h²` by
/// `a = √((m+|S|)/2) e^{iφ/2}`, `b = i √((m−|S|)/2) e^{iφ/2}`, `e^{iφ} = S/|S|`.
///
/// Isotropic fibration axis `w_lf` with partner `w_p` (quadric term `κ w_lf w_p`) and the
/// remaining square axis `w_s`: `w_p = 2δ e^{2iθ'} w̄_lf / κ`, `w_s = i e^{iθ'} √(h² + 2δ|w_lf|²)`
/// and `2h² = 1 − (1 + δ)² |w_lf|²` with `δ = t0`.
pub fn tomography_section(c: Complex64, tom: &Tomography) -> Result<StiefelPoint> {
    if !tom.contains(c) {
        return Err(Error::OutOfDomain { modulus: c.norm(), radius: tom.r0 });
    }
    let frame = &tom.frame;
    let lf = c * FRAC_1_SQRT_2;
    let theta = tom.raw_phase();
    match section_kind(frame)? {
        SectionKind::Diagonal { rest } => {
            let h = ((1.0 - c.norm_sqr()) * (1.0 - 2.0 * tom.t0 * tom.t0) / 2.0).sqrt();
            let ob = cis(theta) * h;
            let s = -(lf * lf + ob * ob);
            let m = 1.0 - lf.norm_sqr() - h * h;
            if m < s.norm() - 1e-14 {
                return Err(Error::SolvabilityFailure { m, s: s.norm() });
            }
            let (a, b) = half_phase_pair(m, s.norm(), section_phase(lf, h, theta));
            let mut z = ComplexVec4::ZERO;
            z[frame.ob_axis] = ob;
            z[frame.lf_axis] = lf;
            z[rest[0]] = a;
            z[rest[1]] = b;
            StiefelPoint::new(z, CONSTRAINT_TOL)
        }
        SectionKind::Isotropic { partner, kappa, square } => {
            let delta = tom.t0;
            let h2 = 0.5 * (1.0 - (1.0 + delta).powi(2) * lf.norm_sqr());
            if h2 <= 0.0 {
                return Err(Error::SolvabilityFailure { m: h2, s: 0.0 });
            }
            let mut w = ComplexVec4::ZERO;
            w[frame.ob_axis] = cis(theta) * h2.sqrt();
            w[frame.lf_axis] = lf;
            w[partner] = cis(2.0 * theta) * lf.conj() * (2.0 * delta) / kappa;
            w[square] = I * cis(theta) * (h2 + 2.0 * delta * lf.norm_sqr()).sqrt();
            StiefelPoint::from_chart(frame.chart, w, CONSTRAINT_TOL)
        }
    }
}

/// Explicit parametrization of the leaf `{arg u_ob = θ, u_lf = c/√2}` for diagonal frames.
///
/// Points are indexed by the open-book modulus `h ∈ (0, h_max)`, a rotation angle `ψ` of the
/// complementary pair, and a sheet sign. The two sheets meet along the fold `h = h_max`
/// and the leaf closes up on the binding as `h → 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafChart {
    pub frame: CoordinateFrame,
    pub leaf: LeafLabel,
    rest: [usize; 2],
}

impl LeafChart {
    pub fn new(frame: CoordinateFrame, leaf: LeafLabel) -> Result<Self> {
        match section_kind(&frame)? {
            SectionKind::Diagonal { rest } => {
                if !(leaf.c.norm() < 1.0) {
                    return Err(Error::OutOfDomain { modulus: leaf.c.norm(), radius: 1.0 });
                }
                Ok(LeafChart { frame, leaf, rest })
            }
            SectionKind::Isotropic { .. } => Err(Error::UnsupportedFrame("leaf charts need a diagonal frame")),
        }
    }

    fn raw_phase(&self) -> f64 {
        if self.frame.conjugate_ob {
            -self.leaf.theta
        } else {
            self.leaf.theta
        }
    }

    fn gap(&self, h: f64) -> f64 {
        let lf = self.leaf.c * FRAC_1_SQRT_2;
        let ob = cis(self.raw_phase()) * h;
        1.0 - lf.norm_sqr() - h * h - (lf * lf + ob * ob).norm()
    }

    /// Modulus at which the two sheets meet.
    pub fn fold_height(&self) -> f64 {
        let lf = self.leaf.c * FRAC_1_SQRT_2;
        let mut lo = 0.0;
        let mut hi = (1.0 - lf.norm_sqr()).sqrt();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.gap(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn point(&self, h: f64, psi: f64, upper: bool) -> Result<StiefelPoint> {
        let lf = self.leaf.c * FRAC_1_SQRT_2;
        let theta = self.raw_phase();
        let ob = cis(theta) * h;
        let s = -(lf * lf + ob * ob);
        let m = 1.0 - lf.norm_sqr() - h * h;
        if m < s.norm() - 1e-14 {
            return Err(Error::SolvabilityFailure { m, s: s.norm() });
        }
        let (a0, mut b0) = half_phase_pair(m, s.norm(), section_phase(lf, h, theta));
        if !upper {
            b0 = -b0;
        }
        let (cs, sn) = (psi.cos(), psi.sin());
        let mut z = ComplexVec4::ZERO;
        z[self.frame.ob_axis] = ob;
        z[self.frame.lf_axis] = lf;
        z[self.rest[0]] = a0 * cs - b0 * sn;
        z[self.rest[1]] = a0 * sn + b0 * cs;
        StiefelPoint::new(z, CONSTRAINT_TOL)
    }
}
