use alloc::vec::Vec;

use num_complex::Complex64;

use super::crossings::return_map;
use super::Tomography;
use crate::error::Result;
use crate::exec::Executor;
use crate::scenario::Scenario;

/// How enclosed areas are measured in the base disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AreaWeight {
    /// Euclidean area of the label chart.
    Flat,
    /// Area of the pulled-back `dα` on the section.
    Induced,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaReport {
    pub source_area: f64,
    pub image_area: f64,
    pub ratio: f64,
    pub weight: AreaWeight,
}

/// Signed area of a closed polygon (positive when counter-clockwise).
pub fn shoelace_area(poly: &[Complex64]) -> f64 {
    let n = poly.len();
    0.5 * (0..n).map(|i| (poly[i].conj() * poly[(i + 1) % n]).im).sum::<f64>()
}

/// `∫ ρ dA` over a closed polygon: fan triangulation from the vertex centroid with the
/// edge-midpoint rule on every triangle.
pub fn weighted_area(poly: &[Complex64], density: &dyn Fn(Complex64) -> Result<f64>) -> Result<f64> {
    let n = poly.len();
    if n < 3 {
        return Ok(0.0);
    }
    let g = poly.iter().sum::<Complex64>() / n as f64;
    let spokes: Vec<f64> = poly.iter().map(|p| density((g + p) * 0.5)).collect::<Result<_>>()?;
    let mut total = 0.0;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let tri = 0.5 * ((a - g).conj() * (b - g)).im;
        let rim = density((a + b) * 0.5)?;
        total += tri * (spokes[i] + spokes[(i + 1) % n] + rim) / 3.0;
    }
    Ok(total)
}

/// Enclosed area of the image polygon `f_{k,D}(polyline)` divided by that of `polyline`.
pub fn area_ratio<S: Scenario, E: Executor>(
    polyline: &[Complex64],
    k: usize,
    tom: &Tomography,
    sc: &S,
    weight: AreaWeight,
    exec: &E,
) -> Result<AreaReport> {
    let image: Vec<Complex64> =
        exec.map_indexed(polyline.len(), |i| return_map(polyline[i], k, tom, sc)).into_iter().collect::<Result<_>>()?;
    let (source_area, image_area) = match weight {
        AreaWeight::Flat => (shoelace_area(polyline), shoelace_area(&image)),
        AreaWeight::Induced => {
            let rho = |c: Complex64| sc.area_density(c, tom);
            (weighted_area(polyline, &rho)?, weighted_area(&image, &rho)?)
        }
    };
    Ok(AreaReport { source_area, image_area, ratio: image_area / source_area, weight })
}
