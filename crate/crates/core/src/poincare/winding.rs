use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::phase_step;

/// Values below this modulus count as zeros of the displacement.
pub const ZERO_TOL: f64 = 1e-12;

/// Winding number about 0 of the closed polygon through `values` (a repeated first value at
/// the end is accepted), summing principal-branch phase increments.
pub fn displacement_winding(values: &[Complex64]) -> Result<i64> {
    let mut n = values.len();
    if n >= 2 && (values[n - 1] - values[0]).norm() <= 1e-12 * values[0].norm().max(1.0) {
        n -= 1;
    }
    if n < 3 {
        return Err(Error::InvalidParameter("a loop needs at least three values"));
    }
    if let Some(index) = values[..n].iter().position(|v| !(v.norm() >= ZERO_TOL)) {
        return Err(Error::ZeroOnLoop { index });
    }
    let mut total = 0.0;
    for i in 0..n {
        let step = phase_step(values[i], values[(i + 1) % n]);
        if step.abs() >= FRAC_PI_2 {
            return Err(Error::AdaptiveRefineNeeded { index: i, step });
        }
        total += step;
    }
    Ok((total / TAU).round() as i64)
}

/// Winding number of `f` along a closed parametrized loop, refining any segment whose phase
/// step reaches `π/2` by bisection (at most `max_depth` levels).
///
/// `nodes` are pre-evaluated `(s, f(loop(s)))` pairs with increasing `s` in `[0, period)`.
pub fn loop_winding(
    nodes: &[(f64, Complex64)],
    period: f64,
    point_at: &dyn Fn(f64) -> Complex64,
    f: &dyn Fn(Complex64) -> Result<Complex64>,
    max_depth: usize,
) -> Result<i64> {
    struct Refiner<'a> {
        point_at: &'a dyn Fn(f64) -> Complex64,
        f: &'a dyn Fn(Complex64) -> Result<Complex64>,
        index: usize,
    }
    impl Refiner<'_> {
        fn segment(&self, (s0, d0): (f64, Complex64), (s1, d1): (f64, Complex64), depth: usize) -> Result<f64> {
            if !(d1.norm() >= ZERO_TOL) {
                return Err(Error::ZeroOnLoop { index: self.index });
            }
            let step = phase_step(d0, d1);
            if step.abs() < FRAC_PI_2 {
                return Ok(step);
            }
            if depth == 0 {
                return Err(Error::AdaptiveRefineNeeded { index: self.index, step });
            }
            let sm = 0.5 * (s0 + s1);
            let mid = (sm, (self.f)((self.point_at)(sm))?);
            Ok(self.segment((s0, d0), mid, depth - 1)? + self.segment(mid, (s1, d1), depth - 1)?)
        }
    }
    if nodes.len() < 2 {
        return Err(Error::InvalidParameter("a loop needs at least two nodes"));
    }
    if let Some(index) = nodes.iter().position(|(_, d)| !(d.norm() >= ZERO_TOL)) {
        return Err(Error::ZeroOnLoop { index });
    }
    let mut total = 0.0;
    for i in 0..nodes.len() {
        let next = if i + 1 < nodes.len() { nodes[i + 1] } else { (nodes[0].0 + period, nodes[0].1) };
        total += Refiner { point_at, f, index: i }.segment(nodes[i], next, max_depth)?;
    }
    Ok((total / TAU).round() as i64)
}

/// Points of the circle of radius `r` about `center`, counter-clockwise.
pub fn circle_loop(center: Complex64, r: f64, n: usize) -> Vec<Complex64> {
    (0..n).map(|i| center + Complex64::from_polar(r, TAU * i as f64 / n as f64)).collect()
}
