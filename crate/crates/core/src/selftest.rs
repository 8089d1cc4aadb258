//! Built-in invariant battery run by the `selftest` mode.
//!
//! Sample points come from a deterministic additive recurrence, so the battery
//! uses no random number generator.

use std::f64::consts::PI;

use crate::analysis::sin_equivalence_check;
use crate::config::{build_initial, InitialCondition};
use crate::equilibria::{area_of_center, center_of_area};
use crate::error::Result;
use crate::geometry::{grid_param, Vec2};
use crate::remainder::{endpoint_norm, remainder_assemble};
use crate::spectral::{linear_operator_ld, odd_extend, poisson_line_norms, semigroup_apply};
use crate::stokeslet::{stokes_residual_check, stokeslet_halfspace, stokeslet_halfspace_images};

/// Result of one battery entry.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn at_most(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{:<6} {:<28} value = {:.3e}  tol = {:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tolerance
        )
    }
}

/// Point `i` of a Kronecker sequence in `[0, 1)^d`, coordinate `dim`.
pub fn kronecker(i: usize, dim: usize) -> f64 {
    const STEPS: [f64; 6] = [
        0.414_213_562_373_095_1,
        0.732_050_807_568_877_3,
        0.236_067_977_499_789_7,
        0.645_751_311_064_590_6,
        0.316_624_790_355_399_8,
        0.605_551_275_463_989_3,
    ];
    (0.5 + i as f64 * STEPS[dim % STEPS.len()]).fract()
}

/// Largest `|S⁺|` over wall targets for interior sources.
pub fn no_slip_max(sources: usize, targets: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..sources {
        let y = Vec2::new(4.0 * kronecker(i, 0) - 2.0, 0.01 + 2.0 * kronecker(i, 1));
        let f = Vec2::new(2.0 * kronecker(i, 2) - 1.0, 2.0 * kronecker(i, 3) - 1.0);
        for j in 0..targets {
            let x = Vec2::new(-3.0 + 6.0 * j as f64 / (targets - 1) as f64, 0.0);
            worst = worst.max(stokeslet_halfspace(&x, &y, &f)?.norm());
        }
    }
    Ok(worst)
}

/// Interior target/source/force triples well separated from each other, their images and the wall.
pub fn interior_triples(count: usize) -> Vec<(Vec2, Vec2, Vec2)> {
    let mut out = Vec::with_capacity(count);
    let mut i = 0;
    while out.len() < count {
        let x = Vec2::new(4.0 * kronecker(i, 0) - 2.0, 0.2 + 1.8 * kronecker(i, 1));
        let y = Vec2::new(4.0 * kronecker(i, 2) - 2.0, 0.1 + 1.9 * kronecker(i, 3));
        let f = Vec2::new(2.0 * kronecker(i, 4) - 1.0, 2.0 * kronecker(i, 5) - 1.0);
        i += 1;
        if (x - y).norm() >= 0.3 {
            out.push((x, y, f));
        }
    }
    out
}

/// Worst relative gap between the closed form and the image decomposition.
pub fn two_path_gap(count: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (x, y, f) in interior_triples(count) {
        let a = stokeslet_halfspace(&x, &y, &f)?;
        let b = stokeslet_halfspace_images(&x, &y, &f)?;
        worst = worst.max((a - b).norm() / a.norm().max(b.norm()));
    }
    Ok(worst)
}

/// Worst momentum and divergence residuals at `h = 1e−4`.
pub fn stokes_residual_max(count: usize) -> Result<(f64, f64)> {
    let mut worst = (0.0f64, 0.0f64);
    for (x, y, f) in interior_triples(count) {
        let (m, d) = stokes_residual_check(&x, &y, &f, 1e-4)?;
        worst = (worst.0.max(m), worst.1.max(d));
    }
    Ok(worst)
}

/// Worst deviation of `S_h(t) sin(ks)` from `e^{−tk/4} sin(ks)` for `k ≤ M/4`.
pub fn semigroup_spectrum_error(n: usize, times: &[f64]) -> Result<f64> {
    let m = 2 * n - 2;
    let mut worst: f64 = 0.0;
    for k in 1..=m / 4 {
        let u: Vec<f64> = (0..n).map(|j| (k as f64 * grid_param(j, n)).sin()).collect();
        let (w, _) = odd_extend(&u);
        for &t in times {
            let out = semigroup_apply(&w, t)?;
            let decay = (-t * k as f64 / 4.0).exp();
            for (j, v) in out.values.iter().enumerate() {
                let x = 2.0 * PI * j as f64 / m as f64;
                worst = worst.max((v - decay * (k as f64 * x).sin()).abs());
            }
        }
    }
    Ok(worst)
}

/// Quadrature `L_D` errors: (linear data and endpoints, sine modes `k ≤ 8`).
pub fn ld_kernel_errors(n: usize) -> (f64, f64) {
    let s: Vec<f64> = (0..n).map(|j| grid_param(j, n)).collect();
    let lin: Vec<f64> = s.iter().map(|x| 0.7 - 1.3 * x).collect();
    let mut kernel = linear_operator_ld(&lin).iter().map(|v| v.abs()).fold(0.0, f64::max);
    let smooth: Vec<f64> = s.iter().map(|x| (2.0 * x).cos() + x * x).collect();
    let out = linear_operator_ld(&smooth);
    kernel = kernel.max(out[0].abs()).max(out[n - 1].abs());
    let mut modes: f64 = 0.0;
    for k in 1..=8 {
        let u: Vec<f64> = s.iter().map(|x| (k as f64 * x).sin()).collect();
        let out = linear_operator_ld(&u);
        for (o, ui) in out.iter().zip(&u) {
            modes = modes.max((o + k as f64 / 4.0 * ui).abs());
        }
    }
    (kernel, modes)
}

/// Anchor values of the remainder for the default asymmetric datum.
pub fn endpoint_vanishing(n: usize) -> Result<f64> {
    let f = build_initial(&InitialCondition::default(), n)?;
    Ok(endpoint_norm(&remainder_assemble(&f)?))
}

/// Worst error of the numerical line Poisson norms against their closed forms.
pub fn poisson_norm_error(times: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in times {
        let (l1, sup) = poisson_line_norms(t)?;
        worst = worst
            .max((l1 - 2.0 / (PI * t)).abs())
            .max((sup - 9.0 / (8.0 * PI * 3f64.sqrt() * t * t)).abs());
    }
    Ok(worst)
}

/// Worst round-trip error of the area map on sample centers.
pub fn area_round_trip(centers: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &c in centers {
        worst = worst.max((center_of_area(area_of_center(c))? - c).abs());
    }
    Ok(worst)
}

/// Runs the whole battery.
pub fn run_battery() -> Result<Vec<CheckOutcome>> {
    let (mom, div) = stokes_residual_max(100)?;
    let (kernel, modes) = ld_kernel_errors(512);
    let sin_eq = sin_equivalence_check(1000);
    Ok(vec![
        CheckOutcome::at_most("stokeslet no-slip", no_slip_max(1000, 100)?, 1e-13),
        CheckOutcome::at_most("stokeslet two-path", two_path_gap(100)?, 1e-12),
        CheckOutcome::at_most("stokes momentum residual", mom, 1e-5),
        CheckOutcome::at_most("stokes divergence", div, 1e-5),
        CheckOutcome::at_most(
            "semigroup eigenfunctions",
            semigroup_spectrum_error(512, &[0.1, 1.0])?,
            1e-13,
        ),
        CheckOutcome::at_most("L_D linear kernel", kernel, 1e-6),
        CheckOutcome::at_most("L_D sine modes", modes, 1e-4),
        CheckOutcome::at_most("endpoint vanishing", endpoint_vanishing(512)?, 1e-6),
        CheckOutcome {
            name: "sin equivalence (C = 8pi)",
            value: sin_eq.tightest_constant,
            tolerance: 8.0 * PI,
            passed: sin_eq.passes,
        },
        CheckOutcome::at_most("poisson line norms", poisson_norm_error(&[0.5, 1.0, 2.0])?, 1e-6),
        CheckOutcome::at_most(
            "area map round trip",
            area_round_trip(&[-2.0, -0.5, 0.3, 1.0, 5.0])?,
            1e-10,
        ),
    ])
}
