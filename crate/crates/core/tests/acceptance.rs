//! End-to-end acceptance checks. Each test prints one PASS/FAIL line to stderr
//! (written directly, so it shows even when output capture is on) and then
//! asserts the same condition.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::OnceLock;
use std::time::Instant;

use anchored_peskin::analysis::{
    semigroup_smoothing_test, sin_equivalence_check, smoothing_battery, HolderParams,
};
use anchored_peskin::config::{InitialCondition, SimConfig};
use anchored_peskin::diagnostics::{max_area_drift, max_iso_increase};
use anchored_peskin::equilibria::{area_of_center, center_of_area, equilibrium_arc};
use anchored_peskin::geometry::{grid_param, Filament, Vec2};
use anchored_peskin::remainder::{endpoint_norm, remainder_assemble, remainder_continuous_oracle};
use anchored_peskin::selftest::{interior_triples, kronecker};
use anchored_peskin::spectral::{linear_operator_ld, odd_extend, poisson_line_norms, semigroup_apply};
use anchored_peskin::stokeslet::{stokes_residual_check, stokeslet_halfspace};
use anchored_peskin::timestepper::{integrate, second_order_check, simulate, StepperOptions, Trajectory};

fn report(id: u32, name: &str, passed: bool, detail: String, start: Instant) {
    let line = format!(
        "[{}] criterion {id:02} {name}: {detail} ({:.1} s)",
        if passed { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    let _ = writeln!(std::io::stderr(), "{line}");
    assert!(passed, "{line}");
}

#[test]
fn no_slip_exactness() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let y = Vec2::new(4.0 * kronecker(i, 0) - 2.0, 1e-3 + 3.0 * kronecker(i, 1));
        let f = Vec2::new(4.0 * kronecker(i, 2) - 2.0, 4.0 * kronecker(i, 3) - 2.0);
        for j in 0..100 {
            let x = Vec2::new(-5.0 + 10.0 * kronecker(j, 4), 0.0);
            worst = worst.max(stokeslet_halfspace(&x, &y, &f).unwrap().norm());
        }
    }
    report(1, "no-slip exactness", worst <= 1e-13, format!("max |S+| on wall = {worst:.2e} (tol 1e-13)"), t0);
}

#[test]
fn stokes_residual() {
    let t0 = Instant::now();
    let (mut mom, mut div) = (0.0f64, 0.0f64);
    for (x, y, f) in interior_triples(100) {
        let (m, d) = stokes_residual_check(&x, &y, &f, 1e-4).unwrap();
        mom = mom.max(m);
        div = div.max(d);
    }
    let ok = mom <= 1e-5 && div <= 1e-5;
    report(2, "Stokes residual", ok, format!("momentum {mom:.2e}, divergence {div:.2e} (tol 1e-5)"), t0);
}

#[test]
fn semigroup_spectrum() {
    let t0 = Instant::now();
    let n = 512;
    let m = 2 * n - 2;
    let mut worst: f64 = 0.0;
    for k in 1..=m / 4 {
        let u: Vec<f64> = (0..n).map(|j| (k as f64 * grid_param(j, n)).sin()).collect();
        let (w, _) = odd_extend(&u);
        for t in [0.1, 1.0] {
            let out = semigroup_apply(&w, t).unwrap();
            let decay = (-t * k as f64 / 4.0).exp();
            for (j, v) in out.values.iter().enumerate() {
                let x = 2.0 * PI * j as f64 / m as f64;
                worst = worst.max((v - decay * (k as f64 * x).sin()).abs());
            }
        }
    }
    report(3, "semigroup spectrum", worst <= 1e-13, format!("max error {worst:.2e} for k <= M/4 (tol 1e-13)"), t0);
}

#[test]
fn ld_kernel_facts() {
    let t0 = Instant::now();
    let n = 512;
    let s: Vec<f64> = (0..n).map(|j| grid_param(j, n)).collect();
    let lin: Vec<f64> = s.iter().map(|x| -0.4 + 2.1 * x).collect();
    let mut kernel = linear_operator_ld(&lin).iter().map(|v| v.abs()).fold(0.0, f64::max);
    for u in [
        s.iter().map(|x| x.sin() * (2.0 * x).cos() + x).collect::<Vec<f64>>(),
        s.iter().map(|x| (-(x - 1.0).powi(2)).exp()).collect(),
    ] {
        let out = linear_operator_ld(&u);
        kernel = kernel.max(out[0].abs()).max(out[n - 1].abs());
    }
    let mut modes: f64 = 0.0;
    for k in 1..=8 {
        let u: Vec<f64> = s.iter().map(|x| (k as f64 * x).sin()).collect();
        for (o, ui) in linear_operator_ld(&u).iter().zip(&u) {
            modes = modes.max((o + k as f64 / 4.0 * ui).abs());
        }
    }
    let ok = kernel <= 1e-6 && modes <= 1e-4;
    report(4, "L_D kernel facts", ok, format!("linear/endpoint {kernel:.2e} (tol 1e-6), sin modes {modes:.2e} (tol 1e-4)"), t0);
}

#[test]
fn endpoint_vanishing() {
    let t0 = Instant::now();
    let f = SimConfig::asymmetric(512, 0.01, 10.0).initial_filament().unwrap();
    let r = remainder_assemble(&f).unwrap();
    let e = endpoint_norm(&r);
    report(5, "endpoint vanishing", e <= 1e-6, format!("max anchor |R| = {e:.2e} (tol 1e-6)"), t0);
}

#[test]
fn equilibrium_stationarity() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for c in [-0.5, 0.0, 1.0] {
        let x0 = equilibrium_arc(c, 512).unwrap();
        let x1 = integrate(&x0, 0.01, 100, StepperOptions::default()).unwrap();
        worst = worst.max(x1.max_distance(&x0));
    }
    report(6, "equilibrium stationarity", worst <= 1e-4, format!("max deviation after 100 steps {worst:.2e} (tol 1e-4)"), t0);
}

fn long_run() -> &'static Trajectory {
    static RUN: OnceLock<Trajectory> = OnceLock::new();
    RUN.get_or_init(|| simulate(&SimConfig::asymmetric(512, 0.01, 10.0)).unwrap())
}

#[test]
fn area_conservation_smoke() {
    let t0 = Instant::now();
    let traj = simulate(&SimConfig::asymmetric(256, 0.01, 2.5)).unwrap();
    assert!(traj.halted.is_none());
    let drift = max_area_drift(&traj.records);
    report(7, "area conservation, N=256 T=2.5", drift <= 1e-3, format!("max drift {drift:.2e} (tol 1e-3)"), t0);
}

#[test]
fn area_conservation_and_convergence_full() {
    let t0 = Instant::now();
    let traj = long_run();
    let halted = traj.halted.as_ref().map(|e| e.to_string());
    let drift = max_area_drift(&traj.records);
    let steps = traj.records.len() - 1;
    report(
        7,
        "area conservation, N=512 T=10",
        halted.is_none() && steps == 1000 && drift <= 5e-4,
        format!("{steps} steps, max drift {drift:.2e} (tol 5e-4), halted: {halted:?}"),
        t0,
    );
    let last = traj.records.last().unwrap();
    let rise = max_iso_increase(&traj.records, 50);
    report(
        8,
        "convergence to the predicted arc",
        last.iso_error <= 1e-2 && rise <= 0.0,
        format!(
            "iso error {:.2e} -> {:.2e} (tol 1e-2), largest increase after burn-in {rise:.2e}",
            traj.records[0].iso_error, last.iso_error
        ),
        t0,
    );
}

#[test]
fn integrator_order() {
    let t0 = Instant::now();
    let order = second_order_check(&SimConfig::asymmetric(128, 0.04, 0.5)).unwrap();
    report(9, "integrator order", (order - 2.0).abs() <= 0.3, format!("observed order {order:.3} (want 2 +- 0.3)"), t0);
}

#[test]
fn area_map() {
    let t0 = Instant::now();
    let exact = area_of_center(0.0) == PI / 2.0;
    let mut worst: f64 = 0.0;
    for c in [-2.0, -0.5, 0.3, 1.0, 5.0] {
        worst = worst.max((center_of_area(area_of_center(c)).unwrap() - c).abs());
    }
    report(10, "area map", exact && worst <= 1e-10, format!("Area(0) == pi/2: {exact}, round trip {worst:.2e} (tol 1e-10)"), t0);
}

#[test]
fn poisson_norms() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for t in [0.5, 1.0, 2.0] {
        let (l1, sup) = poisson_line_norms(t).unwrap();
        worst = worst
            .max((l1 - 2.0 / (PI * t)).abs())
            .max((sup - 9.0 / (8.0 * PI * 3f64.sqrt()) / (t * t)).abs());
    }
    report(11, "Poisson norms", worst <= 1e-6, format!("max error {worst:.2e} (tol 1e-6)"), t0);
}

#[test]
fn semigroup_smoothing() {
    let t0 = Instant::now();
    let p = HolderParams::new(0.5, 0.5, 0.25).unwrap();
    let mut failures = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    for (name, u) in smoothing_battery(256) {
        for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let o = semigroup_smoothing_test(&u, &p, t).unwrap();
            worst_ratio = worst_ratio.max(o.lhs / o.rhs_bound);
            if !o.passes {
                failures.push(format!("{name}@t={t}"));
            }
        }
    }
    report(
        12,
        "semigroup smoothing",
        failures.is_empty(),
        format!("100 cases, largest lhs/bound {worst_ratio:.3}, failures {failures:?}"),
        t0,
    );
}

#[test]
fn sin_equivalence() {
    let t0 = Instant::now();
    let r = sin_equivalence_check(1000);
    report(
        13,
        "sin equivalence",
        r.passes,
        format!(
            "ratio range [{:.3e}, {:.3e}], tightest C {:.3} (C = 8pi = {:.3})",
            r.worst_ratio_low,
            r.worst_ratio_high,
            r.tightest_constant,
            8.0 * PI
        ),
        t0,
    );
}

#[test]
fn oracle_agreement() {
    let t0 = Instant::now();
    let f = Filament::from_fn(256, |s| {
        Vec2::new(
            s.cos() + 0.1 * (2.0 * s).sin() * s.sin(),
            s.sin() + 0.15 * s.sin().powi(2) * s.cos() + 0.05 * (3.0 * s).sin(),
        )
    })
    .unwrap();
    let discrete = remainder_assemble(&f).unwrap();
    let oracle = remainder_continuous_oracle(&f, 4).unwrap().total();
    let scale = oracle.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let gap = discrete
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let rel = gap / scale;
    report(14, "oracle agreement", rel <= 1e-3, format!("relative gap {rel:.2e} (tol 1e-3)"), t0);
}

#[test]
fn presets_build() {
    // Guards the preset constructors used above.
    let f = SimConfig::asymmetric(64, 0.01, 1.0)
        .with_ic(InitialCondition::Semicircle)
        .initial_filament()
        .unwrap();
    assert_eq!(f.len(), 64);
}
