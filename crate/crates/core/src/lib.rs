//! Numerical laboratory for Reeb dynamics on the Brieskorn/Stiefel model of the
//! unit cotangent bundle of the 3-sphere.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`geometry`]: the quadric model `V = {u ∈ ℂ⁴ : Σ u_j² = 0, |u| = 1}`, the coordinate charts
//!   used to read open-book and Lefschetz coordinates, leaf labels and spheroid projections.
//! * [`flows`]: closed-form Katok and spheroid Reeb flows, the spatial circular restricted
//!   three-body problem in the rotating frame, an adaptive integrator and the Moser chart.
//! * [`scenario`]: the dynamical systems that the return-map machinery runs on.
//! * [`shadow`]: transverse shadow paths, semi-conjugacy residuals and leaf positivity checks.
//! * [`poincare`]: page crossings, tomography sections, return maps, winding certificates,
//!   recurrence search, area ratios and the periodic-orbit census of the Katok flow.
#![no_std]
// `!(x > 0.0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod exec;
pub mod flows;
pub mod geometry;
pub mod poincare;
pub mod scenario;
pub mod shadow;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
