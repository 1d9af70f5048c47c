mod common;

use std::f64::consts::TAU;

use proptest::prelude::*;
use shadowlab_core::exec::Sequential;
use shadowlab_core::flows::{katok_flow, KatokParams};
use shadowlab_core::geometry::{cis, spheroid_project, Chart, ComplexVec4, CoordinateFrame, LeafLabel, StiefelPoint};
use shadowlab_core::poincare::Tomography;
use shadowlab_core::scenario::{KatokScenario, Scenario};
use shadowlab_core::shadow::{conjugacy_residual, leaf_symplectic_check, shadow_path, ContactForm};
use shadowlab_core::Complex64;

/// `A u` for the real antisymmetric generator `e_a e_bᵀ − e_b e_aᵀ`; tangent to the quadric.
fn rotation_field(u: &ComplexVec4, a: usize, b: usize) -> [Complex64; 4] {
    let mut v = [Complex64::new(0.0, 0.0); 4];
    v[a] = -u[b];
    v[b] = u[a];
    v
}

#[test]
fn reeb_field_normalization() {
    let k = KatokParams::default();
    let h = 1e-6;
    for p in common::random_points(11, 25) {
        let r = (*katok_flow(&p, h, &k).coords() - *katok_flow(&p, -h, &k).coords()).scale(0.5 / h);
        assert!((k.alpha(&p.coords().0, &r.0) - TAU).abs() < 1e-8);
        for (a, b) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            let x = rotation_field(p.coords(), a, b);
            assert!(k.d_alpha(&p.coords().0, &r.0, &x).abs() < 1e-7);
        }
    }
}

#[test]
fn hopf_case_shadows_have_no_residual_on_any_axis() {
    let k = KatokParams::new(0.0).unwrap();
    let starts = common::random_points(12, 30);
    let times: Vec<f64> = (0..100).map(|i| 0.1 * i as f64).collect();
    for axis in 1..=3 {
        let r = conjugacy_residual(&k, axis, &starts, &times, &Sequential).unwrap();
        assert!(r.max_residual <= 1e-13);
        assert_eq!(r.spheroid.b, 1.0);
        assert_eq!(r.sample_count, 3000);
    }
}

#[test]
fn returns_preserve_the_leaf_for_the_resonant_axis() {
    let sc = KatokScenario::standard(KatokParams::default(), 1).unwrap();
    let tom = Tomography::new(0.5, 0.3, 0.6, sc.frame).unwrap();
    let start = sc.section(Complex64::new(0.3, -0.2), &tom).unwrap();
    let path = shadow_path(&sc, &start, 4.0, 0.125).unwrap();
    let first = path.samples[0].1;
    for (t, l) in &path.samples {
        if (t - t.round()).abs() < 1e-12 {
            assert!(l.approx_eq(&first, 1e-12), "t = {t}: {l:?}");
        }
    }
    assert!(path.transversality_loss().is_none());
    assert!(path.min_margin() > 0.0);
}

#[test]
fn leaves_in_every_page_are_symplectic() {
    let k = KatokParams::default();
    let frame = CoordinateFrame::new(Chart::Katok, 0, 1, false).unwrap();
    for j in 0..8 {
        let leaf = LeafLabel { theta: TAU * j as f64 / 8.0, c: Complex64::from_polar(0.15 * (j % 5) as f64, j as f64) };
        let r = leaf_symplectic_check(&k, &frame, &leaf, 60).unwrap();
        assert!(r.min_value > 0.0, "{r:?}");
        assert!(r.max_value.is_finite());
    }
}

proptest! {
    #[test]
    fn conjugacy_is_invariant_under_the_circle_action(seed in 0u64..5000, phi in 0.0f64..TAU, axis in 1usize..4) {
        let k = KatokParams::default();
        let p = common::random_points(seed, 1)[0];
        let q = StiefelPoint::new(*p.coords() * cis(phi), 1e-12).unwrap();
        let times: Vec<f64> = (0..40).map(|i| 0.25 * i as f64).collect();
        let a = conjugacy_residual(&k, axis, &[p], &times, &Sequential).unwrap();
        let b = conjugacy_residual(&k, axis, &[q], &times, &Sequential).unwrap();
        prop_assert!(a.max_residual <= 1e-13 && b.max_residual <= 1e-13);
        let (sp, sq) = (spheroid_project(&p, &a.frame).unwrap(), spheroid_project(&q, &a.frame).unwrap());
        prop_assert!((sq.u - cis(phi) * sp.u).norm() <= 1e-14 && (sq.v - cis(phi) * sp.v).norm() <= 1e-14);
    }
}
