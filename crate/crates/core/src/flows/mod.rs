//! Closed-form Reeb flows, the rotating-frame restricted three-body problem and the
//! Moser chart into the quadric model.

mod closed_form;
mod integrator;
mod lagrange;
mod moser;
mod scr3bp;

pub use closed_form::{katok_flow, spheroid_flow, KatokParams, SpheroidParams, DEFAULT_EPSILON};
pub use integrator::{integrate, integrate_system, IntegratorControl, Stepper, Trajectory};
pub use lagrange::lagrange_l1;
pub use moser::{lift_to_level, moser_chart, moser_chart_inverse, MoserChartParams, Primary};
pub use scr3bp::{jacobi_constant, scr3bp_derivative, PhaseState, Scr3bp, Vec3, DEFAULT_COLLISION_GUARD};
