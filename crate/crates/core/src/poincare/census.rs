use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::flows::{katok_flow, KatokParams};
use crate::geometry::{Chart, ComplexVec4, StiefelPoint, CONSTRAINT_TOL};

/// Largest denominator tried when testing frequency ratios for rationality.
pub const MAX_DENOMINATOR: i64 = 1000;
/// Tolerance of a rational frequency ratio.
pub const RATIO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit {
    pub representative: StiefelPoint,
    pub period: f64,
    /// Katok coordinates that are nonzero along the orbit.
    pub support: Vec<usize>,
}

/// Continuum of closed orbits with a common support (a resonance).
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitFamily {
    pub support: Vec<usize>,
    pub period: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub epsilon: f64,
    pub orbits: Vec<PeriodicOrbit>,
    pub families: Vec<OrbitFamily>,
}

impl Census {
    pub fn resonant(&self) -> bool {
        !self.families.is_empty()
    }

    /// Number of simple closed orbits, unless closed orbits come in families.
    pub fn count(&self) -> Option<usize> {
        if self.resonant() {
            None
        } else {
            Some(self.orbits.len())
        }
    }
}

/// Best rational approximation `p/q` with `q ≤ MAX_DENOMINATOR`, if within `RATIO_TOL`.
fn rational(x: f64) -> Option<(i64, i64)> {
    // Continued-fraction convergents.
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i64;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > MAX_DENOMINATOR {
            break;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= RATIO_TOL * x.abs().max(1.0) {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Common period of the frequencies on `support`, if they are pairwise commensurable.
fn common_period(freqs: &[f64; 4], support: &[usize]) -> Option<f64> {
    let f0 = freqs[support[0]];
    let mut l = 1i64;
    for &j in &support[1..] {
        let (_, q) = rational(freqs[j] / f0)?;
        l = l / gcd(l, q) * q;
    }
    Some(l as f64 / f0)
}

/// Symmetric matrix of the quadric `w₀² + w₁² − 2i w₂ w₃` in Katok coordinates.
fn quadric_entry(a: usize, b: usize) -> Complex64 {
    match (a, b) {
        (0, 0) | (1, 1) => Complex64::new(1.0, 0.0),
        (2, 3) | (3, 2) => Complex64::new(0.0, -1.0),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// Closed orbits of the Katok flow with period at most `t_max`.
///
/// Along the flow each Katok coordinate rotates with its own frequency, so a closed orbit is
/// determined by its support `Σ`: the frequencies on `Σ` must be commensurable and the
/// quadric restricted to `Σ` must vanish somewhere with all coordinates in `Σ` nonzero.
/// Supports of size one or two give isolated orbits; larger supports give families.
pub fn periodic_census(k: &KatokParams, t_max: f64) -> Result<Census> {
    let freqs = k.frequencies();
    if !(t_max >= 1.0 / (1.0 - k.epsilon)) {
        return Err(Error::InvalidParameter("census horizon must be at least 1/(1 - epsilon)"));
    }
    let mut census = Census { epsilon: k.epsilon, orbits: Vec::new(), families: Vec::new() };
    for mask in 1u32..16 {
        let support: Vec<usize> = (0..4).filter(|j| mask & (1 << j) != 0).collect();
        let Some(period) = common_period(&freqs, &support) else { continue };
        if period > t_max * (1.0 + 1e-12) {
            continue;
        }
        let vanishes =
            support.iter().all(|&a| support.iter().all(|&b| quadric_entry(a, b) == Complex64::new(0.0, 0.0)));
        match support.len() {
            1 => {
                if vanishes {
                    let mut w = ComplexVec4::ZERO;
                    w[support[0]] = Complex64::new(1.0, 0.0);
                    census.orbits.push(orbit(k, w, period, support)?);
                }
            }
            2 => {
                let (a, b) = (support[0], support[1]);
                for r in binary_roots(quadric_entry(a, a), quadric_entry(a, b), quadric_entry(b, b)) {
                    let wa = 1.0 / (1.0 + r.norm_sqr()).sqrt();
                    let mut w = ComplexVec4::ZERO;
                    w[a] = Complex64::new(wa, 0.0);
                    w[b] = r * wa;
                    census.orbits.push(orbit(k, w, period, support.clone())?);
                }
            }
            _ => census.families.push(OrbitFamily { support, period }),
        }
    }
    census.orbits.sort_by(|x, y| x.period.total_cmp(&y.period));
    Ok(census)
}

/// Nonzero ratios `r = w_b / w_a` solving `p + 2 q r + s r² = 0`.
fn binary_roots(p: Complex64, q: Complex64, s: Complex64) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let roots = if s != zero {
        let disc = (q * q - p * s).sqrt();
        if disc == zero {
            alloc::vec![-q / s]
        } else {
            alloc::vec![(-q + disc) / s, (-q - disc) / s]
        }
    } else if q != zero {
        alloc::vec![-p / (q * 2.0)]
    } else {
        Vec::new()
    };
    roots.into_iter().filter(|r| r.norm() > 1e-14).collect()
}

fn orbit(k: &KatokParams, w: ComplexVec4, period: f64, support: Vec<usize>) -> Result<PeriodicOrbit> {
    let representative = StiefelPoint::from_chart(Chart::Katok, w, CONSTRAINT_TOL)?;
    let back = katok_flow(&representative, period, k);
    if back.coords().distance(representative.coords()) > 1e-9 {
        return Err(Error::InvalidParameter("census orbit fails to close"));
    }
    Ok(PeriodicOrbit { representative, period, support })
}
