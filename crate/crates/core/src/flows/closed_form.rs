use core::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{cis, Chart, SpheroidPoint, StiefelPoint};

/// `(√5 − 1)/20`, a small quadratic irrational.
pub const DEFAULT_EPSILON: f64 = 0.061_803_398_874_989_48;

/// Perturbation parameter of the Katok Hamiltonian `H_ε = ‖w‖² + ε(|w₂|² − |w₃|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KatokParams {
    pub epsilon: f64,
}

impl KatokParams {
    /// Accepts `0 ≤ ε < 1`; `ε = 0` is the degenerate (Hopf) case.
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter("epsilon must lie in [0, 1)"));
        }
        Ok(KatokParams { epsilon })
    }

    /// Angular frequencies (in turns per unit time) of `w₀, …, w₃`.
    pub fn frequencies(&self) -> [f64; 4] {
        [1.0, 1.0, 1.0 + self.epsilon, 1.0 - self.epsilon]
    }
}

impl Default for KatokParams {
    fn default() -> Self {
        KatokParams { epsilon: DEFAULT_EPSILON }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpheroidParams {
    pub a: f64,
    pub b: f64,
}

impl SpheroidParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter("spheroid parameters must be positive"));
        }
        Ok(SpheroidParams { a, b })
    }
}

/// Closed-form Reeb flow of `α_ε`: `w_j ↦ e^{2πi f_j t} w_j` with `f = (1, 1, 1+ε, 1−ε)`.
pub fn katok_flow(p: &StiefelPoint, t: f64, k: &KatokParams) -> StiefelPoint {
    let mut w = p.in_chart(Chart::Katok);
    for (wj, f) in w.0.iter_mut().zip(k.frequencies()) {
        *wj *= cis(TAU * f * t);
    }
    StiefelPoint::new_unchecked(Chart::Katok.from_chart(&w))
}

/// `φ_t(u, v) = (e^{2πiat} u, e^{2πibt} v)`.
pub fn spheroid_flow(s: &SpheroidPoint, t: f64, sp: &SpheroidParams) -> SpheroidPoint {
    SpheroidPoint::new_unchecked(s.u * cis(TAU * sp.a * t), s.v * cis(TAU * sp.b * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ComplexVec4, CONSTRAINT_TOL};
    use core::f64::consts::FRAC_1_SQRT_2;
    use num_complex::Complex64;

    const Z: Complex64 = Complex64::new(0.0, 0.0);

    #[test]
    fn katok_identity_and_simple_orbits() {
        let k = KatokParams::default();
        let s = FRAC_1_SQRT_2;
        let w = ComplexVec4::new(Complex64::new(s, 0.0), Complex64::new(0.0, s), Z, Z);
        let p = StiefelPoint::from_chart(Chart::Katok, w, CONSTRAINT_TOL).unwrap();
        assert_eq!(katok_flow(&p, 0.0, &k), p);
        assert!(katok_flow(&p, 1.0, &k).coords().distance(p.coords()) < 1e-14);

        let w2 = ComplexVec4::new(Z, Z, Complex64::new(1.0, 0.0), Z);
        let q = StiefelPoint::from_chart(Chart::Katok, w2, CONSTRAINT_TOL).unwrap();
        let back = katok_flow(&q, 1.0 / (1.0 + k.epsilon), &k);
        assert!(back.coords().distance(q.coords()) < 1e-14);
        assert!(katok_flow(&q, 0.5, &k).coords().distance(q.coords()) > 0.5);
    }

    #[test]
    fn spheroid_examples() {
        let sp = SpheroidParams::new(1.0, 2.0).unwrap();
        let s = SpheroidPoint::new(Z, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(spheroid_flow(&s, 0.0, &sp), s);
        assert!(spheroid_flow(&s, 0.5, &sp).distance(&s) < 1e-15);
        let e = SpheroidPoint::new(Complex64::new(1.0, 0.0), Z).unwrap();
        for b in [0.3, 1.7, 2.0] {
            let sp = SpheroidParams::new(1.0, b).unwrap();
            assert!(spheroid_flow(&e, 1.0, &sp).distance(&e) < 1e-15);
        }
        assert!(SpheroidParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn katok_params_range() {
        assert!(KatokParams::new(1.0).is_err());
        assert!(KatokParams::new(-0.1).is_err());
        assert!(KatokParams::new(0.0).is_ok());
    }
}
