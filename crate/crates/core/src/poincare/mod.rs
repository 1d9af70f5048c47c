//! Page crossings, tomography sections, return maps and their fixed-point certificates.

mod area;
mod census;
mod crossings;
mod recurrence;
mod tomography;
mod winding;

pub use area::{area_ratio, shoelace_area, weighted_area, AreaReport, AreaWeight};
pub use census::{periodic_census, Census, OrbitFamily, PeriodicOrbit};
pub use crossings::{
    page_crossings, return_map, return_sample, CrossingEvent, CrossingRun, ReturnSample, CROSSING_TOL, GRAZING_TOL,
};
pub use recurrence::{
    find_recurrent_points, Diagnostic, GridNode, RecurrenceCertificate, RecurrenceOptions, RecurrenceSearch,
    RefinementStep,
};
pub use tomography::{tomography_section, LeafChart, Tomography};
pub use winding::{circle_loop, displacement_winding, loop_winding, ZERO_TOL};
