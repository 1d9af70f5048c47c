//! Coordinate models for the quadric `V = {Σ u_j² = 0, ‖u‖ = 1} ⊂ ℂ⁴`.
//!
//! A [`StiefelPoint`] always stores quadric coordinates `u` (the `z` coordinates of the
//! Brieskorn model). Open-book and Lefschetz coordinates are read through a [`Chart`], a
//! fixed unitary change of coordinates, selected together with the two axes by a
//! [`CoordinateFrame`].

use core::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Default tolerance of the two quadric constraints.
pub const CONSTRAINT_TOL: f64 = 1e-10;
/// Modulus below which the open-book coordinate counts as zero.
pub const BINDING_TOL: f64 = 1e-12;
/// Default tolerance for leaf-label equality (angle and base value).
pub const LEAF_TOL: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVec4(pub [Complex64; 4]);

impl ComplexVec4 {
    pub const ZERO: Self = ComplexVec4([ZERO; 4]);

    pub fn new(c0: Complex64, c1: Complex64, c2: Complex64, c3: Complex64) -> Self {
        ComplexVec4([c0, c1, c2, c3])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Bilinear sum `Σ a_j b_j` (no conjugation).
    pub fn bilinear(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    /// Hermitian product `Σ conj(a_j) b_j`.
    pub fn hermitian(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// `Σ u_j²`.
    pub fn quadric(&self) -> Complex64 {
        self.bilinear(self)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexVec4(self.0.map(|c| c * s))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }
}

impl Index<usize> for ComplexVec4 {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVec4 {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl Add for ComplexVec4 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ComplexVec4(core::array::from_fn(|j| self.0[j] + rhs.0[j]))
    }
}

impl Sub for ComplexVec4 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ComplexVec4(core::array::from_fn(|j| self.0[j] - rhs.0[j]))
    }
}

impl Mul<Complex64> for ComplexVec4 {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        ComplexVec4(self.0.map(|c| c * rhs))
    }
}

/// Residuals `(|Σu²|, |‖u‖ − 1|)`.
pub fn constraint_residuals(u: &ComplexVec4) -> (f64, f64) {
    (u.quadric().norm(), (u.norm() - 1.0).abs())
}

/// A validated point of the quadric model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiefelPoint {
    u: ComplexVec4,
}

impl StiefelPoint {
    /// Validates `u` against both constraints at `tol` without modifying it.
    pub fn new(u: ComplexVec4, tol: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::InvalidParameter("non-finite coordinates"));
        }
        let (quadric, norm) = constraint_residuals(&u);
        if quadric > tol || norm > tol {
            return Err(Error::ConstraintViolation { quadric, norm });
        }
        Ok(StiefelPoint { u })
    }

    pub(crate) fn new_unchecked(u: ComplexVec4) -> Self {
        StiefelPoint { u }
    }

    /// Builds the point `(x + i y)/√2` from two real 4-vectors, after Gram–Schmidt
    /// orthonormalization of `(x, y)`. Every point of the quadric arises this way.
    pub fn from_real_pair(x: [f64; 4], y: [f64; 4]) -> Result<Self> {
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nx < 1e-12 {
            return Err(Error::InvalidParameter("degenerate real pair"));
        }
        let xn = x.map(|v| v / nx);
        let d: f64 = xn.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
        let yo: [f64; 4] = core::array::from_fn(|j| y[j] - d * xn[j]);
        let ny = yo.iter().map(|v| v * v).sum::<f64>().sqrt();
        if ny < 1e-12 {
            return Err(Error::InvalidParameter("degenerate real pair"));
        }
        let u = ComplexVec4(core::array::from_fn(|j| Complex64::new(xn[j], yo[j] / ny) * FRAC_1_SQRT_2));
        StiefelPoint::new(u, CONSTRAINT_TOL)
    }

    /// Builds a point from coordinates expressed in `chart`.
    pub fn from_chart(chart: Chart, w: ComplexVec4, tol: f64) -> Result<Self> {
        StiefelPoint::new(chart.from_chart(&w), tol)
    }

    pub fn coords(&self) -> &ComplexVec4 {
        &self.u
    }

    pub fn in_chart(&self, chart: Chart) -> ComplexVec4 {
        chart.to_chart(&self.u)
    }

    pub fn residuals(&self) -> (f64, f64) {
        constraint_residuals(&self.u)
    }

    /// Real and imaginary parts `(x, y)` with `u = (x + i y)/√2`.
    pub fn real_pair(&self) -> ([f64; 4], [f64; 4]) {
        let s = core::f64::consts::SQRT_2;
        (self.u.0.map(|c| c.re * s), self.u.0.map(|c| c.im * s))
    }
}

/// Validates `v`, after one Gauss–Newton projection step onto both constraints.
pub fn make_stiefel(v: ComplexVec4, tol: f64) -> Result<StiefelPoint> {
    if !v.is_finite() || v.norm() == 0.0 {
        return Err(Error::InvalidParameter("zero or non-finite vector"));
    }
    let (q0, n0) = constraint_residuals(&v);
    if q0 <= tol && n0 <= tol {
        return Ok(StiefelPoint { u: v });
    }
    // Real coordinates (a_j, b_j); constraint gradients of Re Σu², Im Σu², ‖u‖² − 1.
    let a = v.0.map(|c| c.re);
    let b = v.0.map(|c| c.im);
    let mut jac = [[0.0f64; 8]; 3];
    for j in 0..4 {
        jac[0][j] = 2.0 * a[j];
        jac[0][j + 4] = -2.0 * b[j];
        jac[1][j] = 2.0 * b[j];
        jac[1][j + 4] = 2.0 * a[j];
        jac[2][j] = 2.0 * a[j];
        jac[2][j + 4] = 2.0 * b[j];
    }
    let q = v.quadric();
    let g = [q.re, q.im, v.norm_sqr() - 1.0];
    let mut gram = [[0.0f64; 3]; 3];
    for r in 0..3 {
        for s in 0..3 {
            gram[r][s] = (0..8).map(|k| jac[r][k] * jac[s][k]).sum();
        }
    }
    let lambda = solve3(&gram, &g).ok_or(Error::ConstraintViolation { quadric: q0, norm: n0 })?;
    let mut u = v;
    for j in 0..4 {
        let da: f64 = -(0..3).map(|r| jac[r][j] * lambda[r]).sum::<f64>();
        let db: f64 = -(0..3).map(|r| jac[r][j + 4] * lambda[r]).sum::<f64>();
        u[j] += Complex64::new(da, db);
    }
    StiefelPoint::new(u, tol)
}

fn solve3(m: &[[f64; 3]; 3], rhs: &[f64; 3]) -> Option<[f64; 3]> {
    let det = |a: &[[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(m);
    let scale: f64 = m.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    if !(d.abs() > 1e-12 * scale.powi(3)) {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut mk = *m;
        for r in 0..3 {
            mk[r][k] = rhs[r];
        }
        *slot = det(&mk) / d;
    }
    Some(out)
}

/// Fixed unitary coordinate systems on `ℂ⁴`.
///
/// Every chart keeps some quadric axes untouched ("square" axes, where `Σu²` contributes
/// `w_j²`) and may combine the remaining two into an isotropic pair `(w_c, w_d)` contributing
/// `κ w_c w_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// The quadric coordinates themselves.
    Quadric,
    /// `w₀ = z₀, w₁ = z₁, w₂ = (z₂ + i z₃)/√2, w₃ = i (z₂ − i z₃)/√2`;
    /// the quadric becomes `w₀² + w₁² − 2i w₂ w₃`.
    Katok,
    /// `w₀ = u₀, w₁ = (u₁ + i u₂)/√2, w₂ = (u₁ − i u₂)/√2, w₃ = u₃`;
    /// rotations about the third spatial axis act diagonally on `(w₁, w₂)`.
    Equivariant,
}

/// Role of a chart axis inside the quadric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisKind {
    Square,
    Isotropic { partner: usize, kappa: Complex64 },
}

impl Chart {
    pub fn to_chart(&self, z: &ComplexVec4) -> ComplexVec4 {
        let s = FRAC_1_SQRT_2;
        match self {
            Chart::Quadric => *z,
            Chart::Katok => ComplexVec4([z[0], z[1], (z[2] + I * z[3]) * s, (I * z[2] + z[3]) * s]),
            Chart::Equivariant => ComplexVec4([z[0], (z[1] + I * z[2]) * s, (z[1] - I * z[2]) * s, z[3]]),
        }
    }

    pub fn from_chart(&self, w: &ComplexVec4) -> ComplexVec4 {
        let s = FRAC_1_SQRT_2;
        match self {
            Chart::Quadric => *w,
            Chart::Katok => ComplexVec4([w[0], w[1], (w[2] - I * w[3]) * s, (w[3] - I * w[2]) * s]),
            Chart::Equivariant => ComplexVec4([w[0], (w[1] + w[2]) * s, (w[1] - w[2]) * (-I * s), w[3]]),
        }
    }

    pub fn axis_kind(&self, axis: usize) -> AxisKind {
        match (self, axis) {
            (Chart::Katok, 2) => AxisKind::Isotropic { partner: 3, kappa: Complex64::new(0.0, -2.0) },
            (Chart::Katok, 3) => AxisKind::Isotropic { partner: 2, kappa: Complex64::new(0.0, -2.0) },
            (Chart::Equivariant, 1) => AxisKind::Isotropic { partner: 2, kappa: Complex64::new(2.0, 0.0) },
            (Chart::Equivariant, 2) => AxisKind::Isotropic { partner: 1, kappa: Complex64::new(2.0, 0.0) },
            _ => AxisKind::Square,
        }
    }

    /// The quadric written in chart coordinates.
    pub fn quadric(&self, w: &ComplexVec4) -> Complex64 {
        self.from_chart(w).quadric()
    }
}

/// Katok's unitary change of coordinates `z ↦ w`.
pub fn katok_frame_change(z: &ComplexVec4) -> ComplexVec4 {
    Chart::Katok.to_chart(z)
}

/// Chart plus the coordinate giving the open book and the coordinate giving the page
/// Lefschetz fibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoordinateFrame {
    pub chart: Chart,
    pub ob_axis: usize,
    pub lf_axis: usize,
    pub conjugate_ob: bool,
}

impl CoordinateFrame {
    pub fn new(chart: Chart, ob_axis: usize, lf_axis: usize, conjugate_ob: bool) -> Result<Self> {
        if ob_axis > 3 || lf_axis > 3 {
            return Err(Error::InvalidParameter("frame axis out of range"));
        }
        if ob_axis == lf_axis {
            return Err(Error::InvalidParameter("frame axes must be distinct"));
        }
        Ok(CoordinateFrame { chart, ob_axis, lf_axis, conjugate_ob })
    }

    /// Both axes are untouched quadric axes.
    pub fn is_diagonal(&self) -> bool {
        self.chart.axis_kind(self.ob_axis) == AxisKind::Square && self.chart.axis_kind(self.lf_axis) == AxisKind::Square
    }

    /// Open-book coordinate (conjugated when the frame says so) from chart coordinates.
    pub fn ob_coordinate(&self, w: &ComplexVec4) -> Complex64 {
        let v = w[self.ob_axis];
        if self.conjugate_ob {
            v.conj()
        } else {
            v
        }
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta - TAU * (theta / TAU).floor();
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance on the circle `ℝ/2πℤ`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TAU - d)
}

/// Name of a leaf: page angle and Lefschetz base value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafLabel {
    pub theta: f64,
    pub c: Complex64,
}

impl LeafLabel {
    pub fn approx_eq(&self, other: &LeafLabel, tol: f64) -> bool {
        circle_distance(self.theta, other.theta) <= tol && (self.c - other.c).norm() <= tol
    }
}

fn ob_phase_chart(w: &ComplexVec4, f: &CoordinateFrame) -> Result<f64> {
    let ob = f.ob_coordinate(w);
    let modulus = ob.norm();
    if modulus <= BINDING_TOL {
        return Err(Error::OnBinding { modulus });
    }
    Ok(wrap_angle(ob.arg()))
}

/// Page angle of `p`: the argument of the open-book coordinate.
pub fn ob_phase(p: &StiefelPoint, f: &CoordinateFrame) -> Result<f64> {
    ob_phase_chart(&p.in_chart(f.chart), f)
}

/// Leaf through `p`: `(ob_phase, √2 · u_lf)`.
pub fn leaf_label(p: &StiefelPoint, f: &CoordinateFrame) -> Result<LeafLabel> {
    let w = p.in_chart(f.chart);
    Ok(LeafLabel { theta: ob_phase_chart(&w, f)?, c: w[f.lf_axis] * core::f64::consts::SQRT_2 })
}

/// Point of the unit sphere `S³ ⊂ ℂ²`, the model of every spheroid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpheroidPoint {
    pub u: Complex64,
    pub v: Complex64,
}

impl SpheroidPoint {
    pub fn new(u: Complex64, v: Complex64) -> Result<Self> {
        let r = (u.norm_sqr() + v.norm_sqr() - 1.0).abs();
        if !(r <= CONSTRAINT_TOL) {
            return Err(Error::InvalidParameter("spheroid point off the unit sphere"));
        }
        Ok(SpheroidPoint { u, v })
    }

    pub(crate) fn new_unchecked(u: Complex64, v: Complex64) -> Self {
        SpheroidPoint { u, v }
    }

    pub fn distance(&self, other: &SpheroidPoint) -> f64 {
        ((self.u - other.u).norm_sqr() + (self.v - other.v).norm_sqr()).sqrt()
    }
}

/// `(u_ob, u_lf) / ‖(u_ob, u_lf)‖`.
pub fn spheroid_project(p: &StiefelPoint, f: &CoordinateFrame) -> Result<SpheroidPoint> {
    let w = p.in_chart(f.chart);
    let (a, b) = (w[f.ob_axis], w[f.lf_axis]);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if n <= BINDING_TOL {
        return Err(Error::DegenerateProjection);
    }
    Ok(SpheroidPoint::new_unchecked(a / n, b / n))
}

/// Unit complex number `e^{iθ}`.
pub fn cis(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

/// Principal-branch phase difference `arg(b / a)` in `(−π, π]`.
pub fn phase_step(a: Complex64, b: Complex64) -> f64 {
    let d = b.arg() - a.arg();
    if d > PI {
        d - TAU
    } else if d <= -PI {
        d + TAU
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadric_frame(ob: usize, lf: usize) -> CoordinateFrame {
        CoordinateFrame::new(Chart::Quadric, ob, lf, false).unwrap()
    }

    #[test]
    fn make_stiefel_examples() {
        let s = FRAC_1_SQRT_2;
        assert!(make_stiefel(ComplexVec4::new(c(s, 0.0), c(0.0, s), ZERO, ZERO), 1e-10).is_ok());
        assert!(matches!(
            make_stiefel(ComplexVec4::new(c(1.0, 0.0), ZERO, ZERO, ZERO), 1e-10),
            Err(Error::ConstraintViolation { .. })
        ));
        assert!(make_stiefel(ComplexVec4::new(c(0.5, 0.0), c(0.0, 0.5), c(0.5, 0.0), c(0.0, 0.5)), 1e-10).is_ok());
        // Unit norm but Σu² = 1/2.
        assert!(make_stiefel(ComplexVec4::new(c(0.5, 0.0), c(0.0, 0.5), c(s, 0.0), ZERO), 1e-10).is_err());
    }

    #[test]
    fn make_stiefel_projects_small_perturbations() {
        let s = FRAC_1_SQRT_2;
        let v = ComplexVec4::new(c(s + 1e-7, 2e-8), c(-3e-8, s), c(1e-7, 0.0), ZERO);
        let p = make_stiefel(v, 1e-10).unwrap();
        let (q, n) = p.residuals();
        assert!(q <= 1e-12 && n <= 1e-12);
        assert!(make_stiefel(ComplexVec4::ZERO, 1e-10).is_err());
    }

    #[test]
    fn katok_change_examples() {
        let e0 = ComplexVec4::new(c(1.0, 0.0), ZERO, ZERO, ZERO);
        assert_eq!(katok_frame_change(&e0), e0);
        let w = katok_frame_change(&ComplexVec4::new(ZERO, ZERO, c(1.0, 0.0), ZERO));
        let h = SQRT_2 / 2.0;
        assert!((w[2] - c(h, 0.0)).norm() < 1e-15);
        assert!((w[3] - c(0.0, h)).norm() < 1e-15);
        assert!(w[0].norm() == 0.0 && w[1].norm() == 0.0);
    }

    #[test]
    fn charts_round_trip_and_rewrite_quadric() {
        let z = ComplexVec4::new(c(0.3, -0.1), c(0.2, 0.7), c(-0.5, 0.05), c(0.1, 0.4));
        for chart in [Chart::Quadric, Chart::Katok, Chart::Equivariant] {
            let w = chart.to_chart(&z);
            assert!(chart.from_chart(&w).distance(&z) < 1e-15);
            assert!((w.norm() - z.norm()).abs() < 1e-15);
        }
        let w = Chart::Katok.to_chart(&z);
        let katok_shape = w[0] * w[0] + w[1] * w[1] - I * 2.0 * w[2] * w[3];
        assert!((katok_shape - z.quadric()).norm() < 1e-15);
        let w = Chart::Equivariant.to_chart(&z);
        let eq_shape = w[0] * w[0] + w[3] * w[3] + 2.0 * w[1] * w[2];
        assert!((eq_shape - z.quadric()).norm() < 1e-15);
    }

    #[test]
    fn ob_phase_examples() {
        let s = FRAC_1_SQRT_2;
        let f = quadric_frame(0, 1);
        let p = StiefelPoint::new(ComplexVec4::new(c(s, 0.0), c(0.0, s), ZERO, ZERO), 1e-12).unwrap();
        assert_eq!(ob_phase(&p, &f).unwrap(), 0.0);
        let q = StiefelPoint::new(ComplexVec4::new(c(0.0, s), c(-s, 0.0), ZERO, ZERO), 1e-12).unwrap();
        assert!((ob_phase(&q, &f).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let b = StiefelPoint::new(ComplexVec4::new(ZERO, c(0.0, s), ZERO, c(s, 0.0)), 1e-12).unwrap();
        assert!(matches!(ob_phase(&b, &f), Err(Error::OnBinding { .. })));
        let conj = CoordinateFrame::new(Chart::Quadric, 0, 1, true).unwrap();
        assert!((ob_phase(&q, &conj).unwrap() - 3.0 * FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn leaf_label_examples() {
        let s = FRAC_1_SQRT_2;
        let p = StiefelPoint::new(ComplexVec4::new(c(0.5, 0.0), c(0.0, 0.5), c(0.5, 0.0), c(0.0, 0.5)), 1e-12).unwrap();
        let l = leaf_label(&p, &quadric_frame(0, 2)).unwrap();
        assert_eq!(l.theta, 0.0);
        assert!((l.c - c(s, 0.0)).norm() < 1e-15);
        let q = StiefelPoint::new(ComplexVec4::new(c(s, 0.0), c(0.0, s), ZERO, ZERO), 1e-12).unwrap();
        let l = leaf_label(&q, &quadric_frame(0, 1)).unwrap();
        assert!((l.c - c(0.0, 1.0)).norm() < 1e-15);
        let b = StiefelPoint::new(ComplexVec4::new(ZERO, c(0.0, s), ZERO, c(s, 0.0)), 1e-12).unwrap();
        assert!(leaf_label(&b, &quadric_frame(0, 1)).is_err());
    }

    #[test]
    fn spheroid_project_examples() {
        let s = FRAC_1_SQRT_2;
        let q = StiefelPoint::new(ComplexVec4::new(c(s, 0.0), c(0.0, s), ZERO, ZERO), 1e-12).unwrap();
        let sp = spheroid_project(&q, &quadric_frame(0, 1)).unwrap();
        assert!((sp.u - c(s, 0.0)).norm() < 1e-15 && (sp.v - c(0.0, s)).norm() < 1e-15);
        let p = StiefelPoint::new(ComplexVec4::new(c(0.5, 0.0), c(0.0, 0.5), c(0.5, 0.0), c(0.0, 0.5)), 1e-12).unwrap();
        let sp = spheroid_project(&p, &quadric_frame(0, 2)).unwrap();
        assert!((sp.u - c(s, 0.0)).norm() < 1e-15);
        assert!((sp.v - c(s, 0.0)).norm() < 1e-15);
        let d = StiefelPoint::new(ComplexVec4::new(ZERO, c(0.0, s), ZERO, c(s, 0.0)), 1e-12).unwrap();
        assert_eq!(spheroid_project(&d, &quadric_frame(0, 2)), Err(Error::DegenerateProjection));
    }

    #[test]
    fn frame_axes_must_differ() {
        assert!(CoordinateFrame::new(Chart::Quadric, 1, 1, false).is_err());
        assert!(CoordinateFrame::new(Chart::Quadric, 4, 1, false).is_err());
        assert!(CoordinateFrame::new(Chart::Katok, 0, 1, false).unwrap().is_diagonal());
        assert!(!CoordinateFrame::new(Chart::Katok, 0, 2, false).unwrap().is_diagonal());
    }

    #[test]
    fn circle_metric() {
        assert!(circle_distance(0.0, TAU - 1e-9) < 2e-9);
        assert!((circle_distance(0.1, PI + 0.1) - PI).abs() < 1e-15);
        assert_eq!(wrap_angle(-FRAC_PI_2), 3.0 * FRAC_PI_2);
    }
}
