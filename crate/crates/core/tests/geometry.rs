use std::f64::consts::PI;

use anchored_peskin::config::{InitialCondition, SimConfig};
use anchored_peskin::equilibria::{area_of_center, equilibrium_arc};
use anchored_peskin::geometry::{
    chord_arc_constant, delta, delta_r, deltar_ratio_bound_check, enclosed_area, grid_param,
    incidence_angles, interior_height, membership, reflect, star_norm, Filament, GeometricBounds,
    Vec2,
};
use anchored_peskin::spectral::derivative_on_interval;
use proptest::prelude::*;

/// Smooth filament built from a few sine modes added to the semicircle.
fn modal_filament(n: usize, coeffs: &[f64]) -> Filament {
    Filament::from_fn(n, |s| {
        let mut p = Vec2::new(s.cos(), s.sin());
        for (i, c) in coeffs.iter().enumerate() {
            let k = (i / 2 + 1) as f64;
            if i % 2 == 0 {
                p.x += c * (k * s).sin();
            } else {
                p.y += c * (k * s).sin();
            }
        }
        p
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflect_is_an_involution(pts in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..50)) {
        let p: Vec<Vec2> = pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
        prop_assert_eq!(reflect(&reflect(&p)), p);
    }

    #[test]
    fn delta_r_adds_twice_the_source_height(coeffs in prop::collection::vec(-0.1..0.1f64, 6), k in 0usize..40, l in 0usize..40) {
        let f = modal_filament(40, &coeffs);
        let d = delta_r(&f, k, l) - delta(&f, k, l);
        prop_assert!(d.x.abs() < 1e-15);
        prop_assert!((d.y - 2.0 * f.nodes()[l].y).abs() < 1e-14);
    }

    #[test]
    fn chord_arc_is_lipschitz_in_c1(a in prop::collection::vec(-0.1..0.1f64, 6), b in prop::collection::vec(-0.1..0.1f64, 6)) {
        let n = 96;
        let f = modal_filament(n, &a);
        let g = modal_filament(n, &b);
        let dist0 = f.max_distance(&g);
        let comp = |h: &Filament, c: usize| -> Vec<f64> { h.nodes().iter().map(|p| p[c]).collect() };
        let mut dist1: f64 = 0.0;
        for c in 0..2 {
            let df = derivative_on_interval(&comp(&f, c));
            let dg = derivative_on_interval(&comp(&g, c));
            for j in 0..n {
                dist1 = dist1.max((df[j] - dg[j]).abs());
            }
        }
        let gap = (chord_arc_constant(&f) - chord_arc_constant(&g)).abs();
        prop_assert!(gap <= 1.01 * (dist0 + 2f64.sqrt() * dist1) + 1e-14);
    }
}

#[test]
fn semicircle_chord_arc_matches_dense_scan() {
    // Chord over parameter gap Δ on the unit circle is 2 sin(Δ/2).
    let scan = (1..=100_000)
        .map(|i| {
            let d = PI * i as f64 / 100_000.0;
            2.0 * (d / 2.0).sin() / d
        })
        .fold(f64::INFINITY, f64::min);
    let v = chord_arc_constant(&Filament::semicircle(257));
    assert!((v - scan).abs() < 1e-12);
    assert!((v - 2.0 / PI).abs() < 1e-14);
}

#[test]
fn semicircle_incidence_matches_dense_scan() {
    let sigma = 0.2;
    let n = 4097;
    let f = Filament::semicircle(n);
    let (t0, tpi) = incidence_angles(&f, sigma).unwrap();
    // Dense scan of the chord angle from (1,0) to e^{is}.
    let scan = (1..=20_000)
        .map(|i| sigma * i as f64 / 20_000.0)
        .map(|s| {
            let c = Vec2::new(s.cos() - 1.0, s.sin());
            (c.y / c.x).atan().abs()
        })
        .fold(f64::INFINITY, f64::min);
    assert!((scan - (PI / 2.0 - 0.1)).abs() < 1e-9);
    assert!((t0 - scan).abs() < 1e-3);
    assert!((tpi - scan).abs() < 1e-3);
}

#[test]
fn vertical_takeoff_has_right_angle() {
    let n = 101;
    let mut nodes: Vec<Vec2> = (0..n)
        .map(|j| {
            let s = grid_param(j, n);
            Vec2::new(s.cos(), s.sin())
        })
        .collect();
    for (j, p) in nodes.iter_mut().enumerate().take(n - 1).skip(1) {
        let s = grid_param(j, n);
        if s <= 0.3 {
            *p = Vec2::new(1.0, s);
        }
    }
    let f = Filament::new(nodes).unwrap();
    let (t0, _) = incidence_angles(&f, 0.2).unwrap();
    assert_eq!(t0, PI / 2.0);
}

#[test]
fn segment_has_zero_incidence() {
    let (t0, tpi) = incidence_angles(&Filament::chord(64), 0.2).unwrap();
    assert_eq!((t0, tpi), (0.0, 0.0));
}

#[test]
fn semicircle_star_norm_is_min_of_functionals() {
    let n = 1025;
    let f = Filament::semicircle(n);
    let b = GeometricBounds::new(50.0, 0.3, 0.2).unwrap();
    let (t0, tpi) = incidence_angles(&f, 0.2).unwrap();
    let expected = chord_arc_constant(&f).min(t0).min(tpi).min(interior_height(&f, 0.2));
    assert_eq!(star_norm(&f, &b).unwrap(), expected);
    // Continuum value min(2/π, π/2 − 0.1, sin(0.1)) up to grid sampling.
    assert!((expected - 0.1f64.sin()).abs() < 5e-3);
}

#[test]
fn arc_with_positive_center_has_positive_star_norm() {
    let f = equilibrium_arc(1.0, 256).unwrap();
    assert!(star_norm(&f, &GeometricBounds::default()).unwrap() > 0.05);
}

#[test]
fn reflected_ratio_checks() {
    let b = GeometricBounds::new(50.0, 0.3, 0.2).unwrap();
    assert!(deltar_ratio_bound_check(&Filament::semicircle(257), &b).1);
    let (ratio, passes) = deltar_ratio_bound_check(&Filament::chord(257), &b);
    assert!(ratio == 0.0 && !passes);
}

#[test]
fn members_satisfy_reflected_bound_and_coercivity() {
    let sigma = 0.2;
    let curves = [
        SimConfig::asymmetric(256, 0.01, 1.0).initial_filament().unwrap(),
        equilibrium_arc(-0.5, 256).unwrap(),
        equilibrium_arc(2.0, 256).unwrap(),
        SimConfig::asymmetric(256, 0.01, 1.0)
            .with_ic(InitialCondition::NotchedArc { h: 1.7, s_w: 0.06, s_d: 1.0 })
            .initial_filament()
            .unwrap(),
    ];
    for f in &curves {
        let probe = GeometricBounds::new(1e4, 1e-3, sigma).unwrap();
        let m = star_norm(f, &probe).unwrap();
        let b = GeometricBounds::new(1e4, m, sigma).unwrap();
        let report = membership(f, &b).unwrap();
        assert!(report.is_member(&b));
        assert!(report.deltar_passes);
        let cst = m * m.sin();
        for (j, p) in f.nodes().iter().enumerate() {
            let s = f.param(j);
            if s <= sigma {
                assert!(p.y >= cst * s - 1e-15, "left coercivity at node {j}");
            }
            if PI - s <= sigma {
                assert!(p.y >= cst * (PI - s) - 1e-15, "right coercivity at node {j}");
            }
        }
    }
}

#[test]
fn polygon_area_converges_quadratically() {
    let exact = area_of_center(1.0);
    let err = |n: usize| (enclosed_area(&equilibrium_arc(1.0, n).unwrap()) - exact).abs();
    let e256 = err(256);
    let e512 = err(512);
    assert!(e512 < 1e-4);
    let rate = (e256 / e512).log2();
    assert!((rate - 2.0).abs() < 0.1, "{rate}");
    assert!((enclosed_area(&Filament::semicircle(512)) - PI / 2.0).abs() < 1e-4);
}

#[test]
fn figure_eight_has_vanishing_chord_arc() {
    let f = Filament::from_fn(601, |s| Vec2::new((3.0 * s).cos(), s.sin())).unwrap();
    assert!(chord_arc_constant(&f) < 1e-12);
}
