use anchored_peskin::geometry::Vec2;
use anchored_peskin::stokeslet::{
    correction_potential_laplacian, fd_stokes_residual, pressure_correction, pressure_halfspace,
    stokeslet_correction, stokeslet_free, stokeslet_halfspace, stokeslet_halfspace_images,
};
use proptest::prelude::*;

fn rotate(v: Vec2, phi: f64) -> Vec2 {
    Vec2::new(phi.cos() * v.x - phi.sin() * v.y, phi.sin() * v.x + phi.cos() * v.y)
}

fn point() -> impl Strategy<Value = Vec2> {
    (-2.0..2.0f64, 0.05..2.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

fn force() -> impl Strategy<Value = Vec2> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn no_slip_on_the_wall(y in point(), f in force(), x1 in -5.0..5.0f64) {
        let u = stokeslet_halfspace(&Vec2::new(x1, 0.0), &y, &f).unwrap();
        prop_assert!(u.norm() <= 1e-13);
    }

    #[test]
    fn closed_form_matches_images(x in point(), y in point(), f in force()) {
        prop_assume!((x - y).norm() > 1e-3 && f.norm() > 1e-3);
        let a = stokeslet_halfspace(&x, &y, &f).unwrap();
        let b = stokeslet_halfspace_images(&x, &y, &f).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(b.norm()).max(1e-300));
    }

    #[test]
    fn linear_in_force(x in point(), y in point(), f in force(), g in force(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        prop_assume!((x - y).norm() > 1e-3);
        let lhs = stokeslet_halfspace(&x, &y, &(a * f + b * g)).unwrap();
        let rhs = a * stokeslet_halfspace(&x, &y, &f).unwrap() + b * stokeslet_halfspace(&x, &y, &g).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        prop_assert_eq!(stokeslet_halfspace(&x, &y, &Vec2::zeros()).unwrap(), Vec2::zeros());
        prop_assert_eq!(pressure_halfspace(&x, &y, &Vec2::zeros()).unwrap(), 0.0);
    }

    #[test]
    fn free_stokeslet_rotates_with_its_data(d in force(), f in force(), phi in 0.0..6.28f64) {
        prop_assume!(d.norm() > 1e-2);
        let y = Vec2::new(0.3, -0.2);
        let u = stokeslet_free(&(y + d), &y, &f).unwrap();
        let ur = stokeslet_free(&(y + rotate(d, phi)), &y, &rotate(f, phi)).unwrap();
        prop_assert!((rotate(u, phi) - ur).norm() <= 1e-13);
    }

    #[test]
    fn potential_is_harmonic(x in point(), y in point(), f in force()) {
        let lap = correction_potential_laplacian(&x, &y, &f, 1e-4).unwrap();
        let scale = 1.0 / (x + Vec2::new(-y.x, y.y)).norm_squared();
        prop_assert!(lap.abs() <= 1e-5 * scale.max(1.0));
    }

    #[test]
    fn correction_field_solves_stokes(x in point(), y in point(), f in force()) {
        prop_assume!(f.norm() > 0.1);
        let (m, d) = fd_stokes_residual(
            |p| stokeslet_correction(p, &y, &f),
            |p| pressure_correction(p, &y, &f),
            &x,
            1e-4,
        ).unwrap();
        prop_assert!(m <= 1e-5 && d <= 1e-5, "{} {}", m, d);
    }
}

#[test]
fn unit_example_of_free_stokeslet() {
    let u = stokeslet_free(&Vec2::new(1.5, 2.0), &Vec2::new(0.5, 2.0), &Vec2::new(1.0, 0.0)).unwrap();
    assert!((u.x - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-16);
    assert!(u.y.abs() < 1e-17);
}
