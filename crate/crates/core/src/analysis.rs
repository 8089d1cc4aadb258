//! Weighted Hölder norms, semigroup smoothing and the sine equivalence check.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{PeskinError, Result};
use crate::geometry::grid_param;
use crate::spectral::{derivative_on_interval, odd_extend, semigroup_apply};

/// Exponents of the weighted Hölder spaces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl HolderParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(0.0 < alpha && alpha < 1.0) || !(0.0..1.0).contains(&beta) {
            return Err(PeskinError::InvalidParameter(format!(
                "need α ∈ (0,1) and β ∈ [0,1), got α = {alpha}, β = {beta}"
            )));
        }
        if !(0.0 < gamma && gamma < 1.0 - alpha) {
            return Err(PeskinError::InvalidParameter(format!(
                "need γ ∈ (0, 1−α), got γ = {gamma}"
            )));
        }
        Ok(Self { alpha, beta, gamma })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HolderVariant {
    /// `‖f‖_∞ + sup sin((s+t)/2)^β |s−t|^{−α} |f(s) − f(t)|`.
    C0MinusBeta,
    /// `‖f‖_∞ + ‖f'‖_∞ + sup sin((s+t)/2)^{−β} |s−t|^{−α} |f'(s) − f'(t)|`.
    C1Beta,
}

fn weighted_seminorm(v: &[f64], alpha: f64, weight_power: f64) -> f64 {
    let n = v.len();
    let h = PI / (n - 1) as f64;
    (0..n)
        .into_par_iter()
        .map(|k| {
            let mut best: f64 = 0.0;
            for l in (k + 1)..n {
                let diff = (v[k] - v[l]).abs();
                if diff == 0.0 {
                    continue;
                }
                let weight = (0.5 * (k + l) as f64 * h).sin().powf(weight_power);
                let q = weight * diff / ((l - k) as f64 * h).powf(alpha);
                best = best.max(q);
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Grid version of the weighted norm, with an exhaustive pair scan.
pub fn weighted_holder_norm(u: &[f64], p: &HolderParams, variant: HolderVariant) -> f64 {
    match variant {
        HolderVariant::C0MinusBeta => sup_abs(u) + weighted_seminorm(u, p.alpha, p.beta),
        HolderVariant::C1Beta => {
            let du = derivative_on_interval(u);
            sup_abs(u) + sup_abs(&du) + weighted_seminorm(&du, p.alpha, -p.beta)
        }
    }
}

/// Outcome of one smoothing comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothingOutcome {
    pub lhs: f64,
    pub rhs_bound: f64,
    pub passes: bool,
}

/// Compares `‖S(t)u₀‖_{C^{1,α}_β}` with `(16/t)‖u₀‖_{C^{0,α}_{−β}}` after removing the linear part.
pub fn semigroup_smoothing_test(u0: &[f64], p: &HolderParams, t: f64) -> Result<SmoothingOutcome> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(PeskinError::InvalidParameter(format!(
            "smoothing time must be positive, got {t}"
        )));
    }
    let (w, _) = odd_extend(u0);
    let w0 = w.restrict();
    let ut = semigroup_apply(&w, t)?.restrict();
    let lhs = weighted_holder_norm(&ut, p, HolderVariant::C1Beta);
    let rhs_bound = 16.0 / t * weighted_holder_norm(&w0, p, HolderVariant::C0MinusBeta);
    Ok(SmoothingOutcome {
        lhs,
        rhs_bound,
        passes: lhs <= rhs_bound,
    })
}

/// Twenty deterministic data on `[0, π]` that vanish at both ends.
pub fn smoothing_battery(n: usize) -> Vec<(String, Vec<f64>)> {
    type Datum = (&'static str, fn(f64) -> f64);
    let data: [Datum; 20] = [
        ("sin(s)", |s| s.sin()),
        ("sin(2s)", |s| (2.0 * s).sin()),
        ("sin(3s)", |s| (3.0 * s).sin()),
        ("sin(4s)", |s| (4.0 * s).sin()),
        ("sin(5s)", |s| (5.0 * s).sin()),
        ("sin(8s)", |s| (8.0 * s).sin()),
        ("sin(16s)", |s| (16.0 * s).sin()),
        ("sin(32s)", |s| (32.0 * s).sin()),
        ("s(pi-s)", |s| s * (PI - s)),
        ("s^2(pi-s)", |s| s * s * (PI - s)),
        ("s(pi-s)^2", |s| s * (PI - s).powi(2)),
        ("s(pi-s)(s-pi/2)", |s| s * (PI - s) * (s - PI / 2.0)),
        ("sin^3(s)", |s| s.sin().powi(3)),
        ("sin(s)+0.5sin(3s)", |s| s.sin() + 0.5 * (3.0 * s).sin()),
        ("bump", |s| (-(s - 1.0).powi(2) / 0.1).exp() * s.sin()),
        ("sin(s)|cos(s)|", |s| s.sin() * s.cos().abs()),
        ("tent", |s| s.min(PI - s)),
        ("sqrt(sin(s))", |s| s.sin().max(0.0).sqrt()),
        ("step", |s| if s < PI / 2.0 { s.sin() } else { 0.5 * s.sin() }),
        ("sin(s)exp(cos(s))", |s| s.sin() * s.cos().exp()),
    ];
    data.iter()
        .map(|(name, f)| {
            let mut u: Vec<f64> = (0..n).map(|j| f(grid_param(j, n))).collect();
            u[0] = 0.0;
            u[n - 1] = 0.0;
            (name.to_string(), u)
        })
        .collect()
}

/// Outcome of the sine equivalence scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinEquivalence {
    /// Smallest `sin((x+y)/2) / (sin x + |x − y|)` on the grid.
    pub worst_ratio_low: f64,
    /// Largest value of the same ratio.
    pub worst_ratio_high: f64,
    /// Smallest constant `C` for which both inequalities hold on the grid.
    pub tightest_constant: f64,
    pub passes: bool,
}

/// Scans `(1/C)(sin x + |x−y|) ≤ sin((x+y)/2) ≤ C(sin x + |x−y|)` with `C = 8π`
/// over a `samples × samples` grid of `[0, π]²`.
pub fn sin_equivalence_check(samples: usize) -> SinEquivalence {
    let c = 8.0 * PI;
    let xs: Vec<f64> = (0..samples).map(|i| grid_param(i, samples)).collect();
    let (lo, hi) = xs
        .par_iter()
        .map(|&x| {
            let mut lo = f64::INFINITY;
            let mut hi: f64 = 0.0;
            for &y in &xs {
                let den = x.sin() + (x - y).abs();
                if den == 0.0 {
                    continue;
                }
                let q = (0.5 * (x + y)).sin() / den;
                lo = lo.min(q);
                hi = hi.max(q);
            }
            (lo, hi)
        })
        .reduce(|| (f64::INFINITY, 0.0), |a, b| (a.0.min(b.0), a.1.max(b.1)));
    SinEquivalence {
        worst_ratio_low: lo,
        worst_ratio_high: hi,
        tightest_constant: (1.0 / lo).max(hi),
        passes: lo >= 1.0 / c && hi <= c,
    }
}
