use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constraint violation: |Σu²| = {quadric:e}, |‖u‖ − 1| = {norm:e}")]
    ConstraintViolation { quadric: f64, norm: f64 },
    #[error("point lies on the binding (|u_ob| = {modulus:e})")]
    OnBinding { modulus: f64 },
    #[error("degenerate spheroid projection (both coordinates vanish)")]
    DegenerateProjection,
    #[error("state within {distance:e} of a primary (guard {guard:e})")]
    CollisionGuard { distance: f64, guard: f64 },
    #[error("root not bracketed on ({lo}, {hi})")]
    RootNotBracketed { lo: f64, hi: f64 },
    #[error("step size underflow at t = {t}")]
    StepFailure { t: f64 },
    #[error("osculating Kepler energy {energy} is above the floor {floor}")]
    EnergyAboveFloor { energy: f64, floor: f64 },
    #[error("loss of page transversality at t = {t} (margin {margin:e})")]
    TransversalityLoss { t: f64, margin: f64 },
    #[error("integration budget exceeded at t = {t} after {crossings} crossings")]
    IntegrationBudgetExceeded { t: f64, crossings: usize },
    #[error("label |c| = {modulus} outside the tomography disk of radius {radius}")]
    OutOfDomain { modulus: f64, radius: f64 },
    #[error("section equations not solvable (m = {m:e}, |S| = {s:e})")]
    SolvabilityFailure { m: f64, s: f64 },
    #[error("Jacobi level {level} not reachable from this chart point")]
    LevelUnreachable { level: f64 },
    #[error("displacement vanishes on the loop (index {index})")]
    ZeroOnLoop { index: usize },
    #[error("phase step {step} exceeds π/2 on segment {index}")]
    AdaptiveRefineNeeded { index: usize, step: f64 },
    #[error("leaf parametrization degenerates (area {area:e})")]
    DegenerateLeaf { area: f64 },
    #[error("frame not supported here: {0}")]
    UnsupportedFrame(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
