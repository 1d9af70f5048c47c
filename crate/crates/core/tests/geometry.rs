mod common;

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use proptest::prelude::*;
use shadowlab_core::geometry::{
    circle_distance, cis, leaf_label, make_stiefel, ob_phase, spheroid_project, wrap_angle, Chart, ComplexVec4,
    CoordinateFrame, StiefelPoint,
};
use shadowlab_core::{Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn point_off_the_quadric_is_rejected() {
    // Σu² = 1/4 − 1/4 + 1/2.
    let v = ComplexVec4::new(c(0.5, 0.0), c(0.0, 0.5), c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0));
    assert!((v.quadric() - c(0.5, 0.0)).norm() < 1e-15);
    assert!(matches!(StiefelPoint::new(v, 1e-10), Err(Error::ConstraintViolation { .. })));
}

#[test]
fn label_and_projection_of_a_sample_point() {
    let p = StiefelPoint::new(ComplexVec4::new(c(0.5, 0.0), c(0.0, 0.5), c(0.5, 0.0), c(0.0, 0.5)), 1e-14).unwrap();
    let f = CoordinateFrame::new(Chart::Quadric, 0, 2, false).unwrap();
    let l = leaf_label(&p, &f).unwrap();
    assert_eq!(l.theta, 0.0);
    assert!((l.c - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    let s = spheroid_project(&p, &f).unwrap();
    assert!((s.u - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15 && (s.v - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
}

#[test]
fn binding_points_have_no_page() {
    let p = StiefelPoint::new(
        ComplexVec4::new(c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)),
        1e-14,
    )
    .unwrap();
    let f = CoordinateFrame::new(Chart::Quadric, 0, 1, false).unwrap();
    assert!(matches!(ob_phase(&p, &f), Err(Error::OnBinding { .. })));
    assert!(matches!(spheroid_project(&p, &f), Err(Error::DegenerateProjection)));
}

#[test]
fn frames_need_distinct_axes() {
    assert!(CoordinateFrame::new(Chart::Katok, 1, 1, false).is_err());
    assert!(CoordinateFrame::new(Chart::Katok, 0, 4, false).is_err());
    assert!(CoordinateFrame::new(Chart::Katok, 0, 1, false).unwrap().is_diagonal());
    assert!(!CoordinateFrame::new(Chart::Katok, 0, 2, false).unwrap().is_diagonal());
}

#[test]
fn conjugated_open_book_reverses_pages() {
    let p = common::random_points(4, 1)[0];
    let f = CoordinateFrame::new(Chart::Quadric, 1, 0, false).unwrap();
    let g = CoordinateFrame { conjugate_ob: true, ..f };
    let (a, b) = (ob_phase(&p, &f).unwrap(), ob_phase(&p, &g).unwrap());
    assert!(circle_distance(a, -b) < 1e-15);
}

proptest! {
    #[test]
    fn charts_are_unitary_and_invertible(seed in 0u64..10_000, which in 0usize..3) {
        let chart = [Chart::Quadric, Chart::Katok, Chart::Equivariant][which];
        let p = common::random_points(seed, 1)[0];
        let w = p.in_chart(chart);
        prop_assert!((w.norm() - 1.0).abs() <= 1e-15 * 4.0);
        prop_assert!(chart.from_chart(&w).distance(p.coords()) <= 1e-15 * 4.0);
        prop_assert!(chart.quadric(&w).norm() <= 1e-14);
    }

    #[test]
    fn projection_repairs_small_perturbations(seed in 0u64..10_000, scale in 1e-9f64..1e-6) {
        let p = common::random_points(seed, 1)[0];
        let noise = common::random_points(seed + 1, 1)[0];
        let v = *p.coords() + *noise.coords() * c(scale, 0.0);
        let q = make_stiefel(v, 1e-10).unwrap();
        prop_assert!(q.coords().distance(p.coords()) <= 4.0 * scale);
    }

    #[test]
    fn circle_action_shifts_labels(seed in 0u64..10_000, phi in 0.0f64..TAU) {
        let p = common::random_points(seed, 1)[0];
        let f = CoordinateFrame::new(Chart::Quadric, 3, 0, false).unwrap();
        let q = StiefelPoint::new(*p.coords() * cis(phi), 1e-12).unwrap();
        let (a, b) = (leaf_label(&p, &f).unwrap(), leaf_label(&q, &f).unwrap());
        prop_assert!(circle_distance(b.theta, a.theta + phi) <= 1e-13);
        prop_assert!((b.c - cis(phi) * a.c).norm() <= 1e-14);
    }

    #[test]
    fn wrapped_angles_stay_in_range(theta in -1e6f64..1e6) {
        let w = wrap_angle(theta);
        prop_assert!((0.0..TAU).contains(&w));
        prop_assert!(circle_distance(w, theta) <= 1e-9);
    }
}
