mod common;

use std::f64::consts::TAU;

use proptest::prelude::*;
use shadowlab_core::flows::{
    integrate, jacobi_constant, katok_flow, lagrange_l1, moser_chart, spheroid_flow, IntegratorControl, KatokParams,
    MoserChartParams, PhaseState, SpheroidParams,
};
use shadowlab_core::geometry::{Chart, SpheroidPoint};
use shadowlab_core::Complex64;

/// Root of `γ⁵ − (3−μ)γ⁴ + (3−2μ)γ³ − μγ² + 2μγ − μ` in `(0, 1)` by bisection.
fn l1_gamma(mu: f64) -> f64 {
    let p = |g: f64| g.powi(5) - (3.0 - mu) * g.powi(4) + (3.0 - 2.0 * mu) * g.powi(3) - mu * g * g + 2.0 * mu * g - mu;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(lo) * p(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn l1_matches_quintic() {
    for mu in [1e-5, 1e-3, 0.01, 0.1, 0.3] {
        let (x, _) = lagrange_l1(mu).unwrap();
        let gamma = l1_gamma(mu);
        assert!((x - (1.0 - mu - gamma)).abs() < 1e-12, "mu {mu}: x {x}, gamma {gamma}");
    }
    let (x, _) = lagrange_l1(0.01).unwrap();
    assert!((x - 0.84).abs() < 0.01, "{x}");
}

#[test]
fn l1_hill_asymptotics() {
    for mu in [1e-3, 1e-4, 1e-5] {
        let (x, _) = lagrange_l1(mu).unwrap();
        let gamma = 1.0 - mu - x;
        let hill = (mu / 3.0).cbrt();
        assert!((gamma / hill - 1.0).abs() < 0.1, "mu {mu}: {gamma} vs {hill}");
    }
}

#[test]
fn l1_value_is_a_saddle_of_the_effective_potential() {
    let mu = 0.01;
    let (x, c) = lagrange_l1(mu).unwrap();
    let at = |x: f64, y: f64| jacobi_constant(&PhaseState::new([x, y, 0.0], [-y, x, 0.0], mu));
    // Max along the axis, min across it.
    assert!(at(x + 1e-3, 0.0) < c && at(x - 1e-3, 0.0) < c);
    assert!(at(x, 1e-3) > c);
}

#[test]
fn circular_orbit_after_one_synodic_period() {
    let a: f64 = 0.5;
    let omega = a.powf(-1.5);
    let s = PhaseState::new([a, 0.0, 0.0], [0.0, a * omega, 0.0], 0.0);
    let t_syn = TAU / (omega - 1.0);
    let traj = integrate(&s, t_syn, IntegratorControl::default()).unwrap();
    let end = traj.last();
    let err = (0..3).map(|i| (end.q[i] - s.q[i]).abs().max((end.p[i] - s.p[i]).abs())).fold(0.0, f64::max);
    assert!(err <= 1e-8, "{err:e}");
    // Halfway the orbit sits on the opposite side.
    let half = integrate(&s, 0.5 * t_syn, IntegratorControl::default()).unwrap();
    assert!((half.last().q[0] + a).abs() < 1e-8);
}

#[test]
fn jacobi_drift_over_long_run() {
    let s = PhaseState::new([0.55, 0.1, 0.05], [-0.1, 1.2, 0.1], 0.01);
    let traj = integrate(&s, 100.0, IntegratorControl::default()).unwrap();
    assert!(traj.max_drift <= 1e-7, "{:e}", traj.max_drift);
}

#[test]
fn tighter_tolerance_does_not_increase_drift() {
    let s = PhaseState::new([0.6, 0.0, 0.1], [0.0, 1.1, 0.0], 1e-3);
    let drift = |tol: f64| integrate(&s, 20.0, IntegratorControl::with_tol(tol)).unwrap().max_drift;
    let mut prev = drift(1e-6);
    let mut tol = 1e-6;
    while tol > 2e-10 {
        tol *= 0.5;
        let d = drift(tol);
        assert!(d <= prev, "tol {tol:e}: {d:e} after {prev:e}");
        prev = d;
    }
}

#[test]
fn katok_frequencies_by_finite_differences() {
    let k = KatokParams::default();
    let h = 1e-6;
    for p in common::random_points(3, 20) {
        let a = katok_flow(&p, -h, &k).in_chart(Chart::Katok);
        let b = katok_flow(&p, h, &k).in_chart(Chart::Katok);
        let w = p.in_chart(Chart::Katok);
        for (j, f) in k.frequencies().into_iter().enumerate() {
            if w[j].norm() < 1e-3 {
                continue;
            }
            let rate = (b[j] / a[j]).arg() / (2.0 * h);
            assert!((rate - TAU * f).abs() < 1e-6, "axis {j}: {rate} vs {}", TAU * f);
        }
    }
}

#[test]
fn moser_images_satisfy_constraints() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mp = MoserChartParams::default();
    let mut done = 0;
    while done < 100 {
        let q: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let p: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let s = PhaseState::new(q, p, 0.0);
        let r = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if 0.5 * p.iter().map(|v| v * v).sum::<f64>() - 1.0 / r > -1e-2 {
            continue;
        }
        let (quad, norm) = moser_chart(&s, &mp).unwrap().residuals();
        assert!(quad <= 1e-12 && norm <= 1e-12, "{quad:e} {norm:e}");
        done += 1;
    }
}

#[test]
fn planar_states_map_to_the_binding() {
    let mp = MoserChartParams::default();
    for (q, p) in [([0.3, 0.2, 0.0], [0.1, -0.9, 0.0]), ([-0.7, 0.0, 0.0], [0.0, 0.5, 0.0])] {
        let s = PhaseState::new(q, p, 0.0);
        assert!(s.is_planar());
        let u = moser_chart(&s, &mp).unwrap();
        assert!(u.coords()[3].norm() < 1e-15);
    }
}

proptest! {
    #[test]
    fn katok_group_law(seed in 0u64..1000, t in -5.0f64..5.0, s in -5.0f64..5.0, eps in 0.0f64..0.9) {
        let k = KatokParams::new(eps).unwrap();
        let p = common::random_points(seed, 1)[0];
        let a = katok_flow(&katok_flow(&p, t, &k), s, &k);
        let b = katok_flow(&p, t + s, &k);
        prop_assert!(a.coords().distance(b.coords()) <= 1e-13);
        let (q, n) = b.residuals();
        prop_assert!(q <= 1e-13 && n <= 1e-13);
    }

    #[test]
    fn spheroid_group_law(a in 0.1f64..3.0, b in 0.1f64..3.0, phi in 0.0f64..TAU, t in -5.0f64..5.0, s in -5.0f64..5.0) {
        let sp = SpheroidParams::new(a, b).unwrap();
        let x = SpheroidPoint::new(Complex64::from_polar(0.6, phi), Complex64::from_polar(0.8, -phi)).unwrap();
        let lhs = spheroid_flow(&spheroid_flow(&x, t, &sp), s, &sp);
        prop_assert!(lhs.distance(&spheroid_flow(&x, t + s, &sp)) <= 1e-13);
    }
}
