use super::scr3bp::{jacobi_constant, PhaseState};
use crate::error::{Error, Result};

fn collinear_force(x: f64, mu: f64) -> f64 {
    let dh = x + mu;
    let dl = x - 1.0 + mu;
    x - (1.0 - mu) * dh / (dh.abs() * dh * dh) - mu * dl / (dl.abs() * dl * dl)
}

/// Collinear equilibrium between the primaries and its energy `H(L₁)`.
///
/// Returns `(x, c)` with the equilibrium at `q = (x, 0, 0)`, `p = (0, x, 0)`.
pub fn lagrange_l1(mu: f64) -> Result<(f64, f64)> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidParameter("L1 needs 0 < mu < 1"));
    }
    let gap = 1e-12;
    let mut lo = -mu + gap;
    let mut hi = 1.0 - mu - gap;
    let (flo, fhi) = (collinear_force(lo, mu), collinear_force(hi, mu));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if collinear_force(mid, mu) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let c = jacobi_constant(&PhaseState::new([x, 0.0, 0.0], [0.0, x, 0.0], mu));
    Ok((x, c))
}
