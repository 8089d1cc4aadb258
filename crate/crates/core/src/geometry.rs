//! Anchored filaments, reflection, and the geometric control functionals.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};
use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{PeskinError, Result};
use crate::spectral::Spectral;

pub type Vec2 = Vector2<f64>;
pub type Mat2 = Matrix2<f64>;

/// Left anchor `X(0)`.
pub const LEFT_ANCHOR: [f64; 2] = [1.0, 0.0];
/// Right anchor `X(π)`.
pub const RIGHT_ANCHOR: [f64; 2] = [-1.0, 0.0];

const ANCHOR_SNAP_TOL: f64 = 1e-12;

/// Exponent of the Hölder surrogate used for membership.
pub const SURROGATE_GAMMA: f64 = 0.5;

/// `R = diag(1, −1)`.
pub fn reflection_matrix() -> Mat2 {
    Mat2::new(1.0, 0.0, 0.0, -1.0)
}

/// Mirror image `(x₁, −x₂)` of a point.
pub fn reflect_point(p: &Vec2) -> Vec2 {
    Vec2::new(p.x, -p.y)
}

/// Mirror image of every point.
pub fn reflect(points: &[Vec2]) -> Vec<Vec2> {
    points.iter().map(reflect_point).collect()
}

/// Grid parameter `s_j = jπ/(N−1)`.
pub fn grid_param(j: usize, n: usize) -> f64 {
    j as f64 * PI / (n - 1) as f64
}

/// Straight chord `ℓ(s) = (1 − 2s/π, 0)` between the anchors.
pub fn chord_point(s: f64) -> Vec2 {
    Vec2::new(1.0 - 2.0 * s / PI, 0.0)
}

/// Trapezoid weights on the inclusive grid.
pub fn trapezoid_weights(n: usize) -> Vec<f64> {
    let h = PI / (n - 1) as f64;
    let mut w = vec![h; n];
    w[0] *= 0.5;
    w[n - 1] *= 0.5;
    w
}

/// A curve sampled at `s_j = jπ/(N−1)` with `X(0) = (1,0)` and `X(π) = (−1,0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Filament {
    nodes: Vec<Vec2>,
}

impl Filament {
    /// Builds a filament, snapping anchors that are within `1e−12` of their target.
    pub fn new(mut nodes: Vec<Vec2>) -> Result<Self> {
        let n = nodes.len();
        if n < 4 {
            return Err(PeskinError::InvalidFilament(format!(
                "need at least 4 nodes, got {n}"
            )));
        }
        if nodes.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(PeskinError::InvalidFilament("non-finite node".into()));
        }
        let left = Vec2::new(LEFT_ANCHOR[0], LEFT_ANCHOR[1]);
        let right = Vec2::new(RIGHT_ANCHOR[0], RIGHT_ANCHOR[1]);
        for (idx, target) in [(0, left), (n - 1, right)] {
            let gap = (nodes[idx] - target).norm();
            if gap > ANCHOR_SNAP_TOL {
                return Err(PeskinError::InvalidFilament(format!(
                    "node {idx} is {gap:.3e} away from its anchor"
                )));
            }
            nodes[idx] = target;
        }
        Ok(Self { nodes })
    }

    /// Samples a parametrized curve on the grid.
    pub fn from_fn<F: Fn(f64) -> Vec2>(n: usize, curve: F) -> Result<Self> {
        Self::new((0..n).map(|j| curve(grid_param(j, n))).collect())
    }

    /// The straight chord `ℓ` itself.
    pub fn chord(n: usize) -> Self {
        Self {
            nodes: (0..n).map(|j| chord_point(grid_param(j, n))).collect(),
        }
    }

    /// The unit semicircle `e^{is}`.
    pub fn semicircle(n: usize) -> Self {
        Self::from_fn(n, |s| Vec2::new(s.cos(), s.sin())).expect("semicircle is anchored")
    }

    pub fn nodes(&self) -> &[Vec2] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Grid spacing `π/(N−1)`.
    pub fn ds(&self) -> f64 {
        PI / (self.nodes.len() - 1) as f64
    }

    pub fn param(&self, j: usize) -> f64 {
        grid_param(j, self.nodes.len())
    }

    /// Deviation `X − ℓ`, which vanishes at both anchors.
    pub fn deviation(&self) -> Vec<Vec2> {
        let n = self.len();
        let mut w: Vec<Vec2> = (0..n)
            .map(|j| self.nodes[j] - chord_point(grid_param(j, n)))
            .collect();
        w[0] = Vec2::zeros();
        w[n - 1] = Vec2::zeros();
        w
    }

    /// Rebuilds a filament from a deviation that vanishes at both ends.
    pub fn from_deviation(w: &[Vec2]) -> Self {
        let n = w.len();
        let mut nodes: Vec<Vec2> = (0..n).map(|j| w[j] + chord_point(grid_param(j, n))).collect();
        nodes[0] = Vec2::new(LEFT_ANCHOR[0], LEFT_ANCHOR[1]);
        nodes[n - 1] = Vec2::new(RIGHT_ANCHOR[0], RIGHT_ANCHOR[1]);
        Self { nodes }
    }

    /// Spectral tangent `D_h X`, including the chord slope `(−2/π, 0)`.
    pub fn tangent(&self) -> Vec<Vec2> {
        let spec = Spectral::for_nodes(self.len());
        let slope = Vec2::new(-2.0 / PI, 0.0);
        spec.apply_vec(&self.deviation(), |k| Complex64::new(0.0, k as f64))
            .into_iter()
            .map(|t| t + slope)
            .collect()
    }

    /// Spectral second derivative `D_h² X`, the Hookean elastic force density.
    pub fn force(&self) -> Vec<Vec2> {
        let spec = Spectral::for_nodes(self.len());
        spec.apply_vec(&self.deviation(), |k| Complex64::new(-((k * k) as f64), 0.0))
    }

    /// Arc length by the trapezoid rule on `|D_h X|`.
    pub fn arc_length(&self) -> f64 {
        self.tangent()
            .iter()
            .zip(trapezoid_weights(self.len()))
            .map(|(t, w)| t.norm() * w)
            .sum()
    }

    /// Maximum distance between nodes of two filaments on the same grid.
    pub fn max_distance(&self, other: &Filament) -> f64 {
        self.nodes
            .iter()
            .zip(&other.nodes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// The `M`, `m`, `σ` triple defining the constraint set.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeometricBounds {
    /// Upper bound on the `C^{1,γ}` surrogate norm.
    pub m_upper: f64,
    /// Lower bound on the star norm.
    pub m_lower: f64,
    /// Boundary-window half-width in radians.
    pub sigma: f64,
}

impl GeometricBounds {
    pub fn new(m_upper: f64, m_lower: f64, sigma: f64) -> Result<Self> {
        let b = Self {
            m_upper,
            m_lower,
            sigma,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.m_lower && self.m_lower < self.m_upper) {
            return Err(PeskinError::InvalidParameter(format!(
                "bounds need 0 < m < M, got m = {}, M = {}",
                self.m_lower, self.m_upper
            )));
        }
        if !(0.0 < self.sigma && self.sigma < PI / 4.0) {
            return Err(PeskinError::InvalidParameter(format!(
                "sigma must lie in (0, π/4), got {}",
                self.sigma
            )));
        }
        if self.m_lower >= PI / 2.0 {
            return Err(PeskinError::InvalidParameter(format!(
                "m must be below π/2, got {}",
                self.m_lower
            )));
        }
        Ok(())
    }

    /// Lower bound `min{2, m sin(m) σ}` on the reflected-difference ratio.
    pub fn deltar_constant(&self) -> f64 {
        (self.m_lower * self.m_lower.sin() * self.sigma).min(2.0)
    }
}

impl Default for GeometricBounds {
    fn default() -> Self {
        Self {
            m_upper: 1000.0,
            m_lower: 0.02,
            sigma: 0.2,
        }
    }
}

/// `X(s_k) − X(s_l)`.
pub fn delta(f: &Filament, k: usize, l: usize) -> Vec2 {
    f.nodes[k] - f.nodes[l]
}

/// `X(s_k) − X^r(s_l) = (X₁(s_k) − X₁(s_l), X₂(s_k) + X₂(s_l))`.
pub fn delta_r(f: &Filament, k: usize, l: usize) -> Vec2 {
    f.nodes[k] - reflect_point(&f.nodes[l])
}

/// Minimum of `|X_k − X_l| / |s_k − s_l|` over all pairs.
pub fn chord_arc_constant(f: &Filament) -> f64 {
    let n = f.len();
    let h = f.ds();
    let nodes = f.nodes();
    (0..n)
        .into_par_iter()
        .map(|k| {
            let mut best = f64::INFINITY;
            for l in (k + 1)..n {
                let q = (nodes[k] - nodes[l]).norm() / ((l - k) as f64 * h);
                best = best.min(q);
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Cutoff `χ_σ(r)`: 1 on `[0, σ]`, linear down to 0 on `[σ, 2σ]`, 0 beyond.
pub fn cutoff(sigma: f64, r: f64) -> f64 {
    if r <= sigma {
        1.0
    } else if r <= 2.0 * sigma {
        2.0 - r / sigma
    } else {
        0.0
    }
}

/// Argument in `(−π/2, π/2]`, with `π/2` for vectors on the vertical axis.
pub fn arg_half_plane(v: &Vec2) -> Result<f64> {
    if v.x == 0.0 {
        if v.y == 0.0 {
            return Err(PeskinError::InvalidParameter(
                "argument of the zero vector".into(),
            ));
        }
        return Ok(PI / 2.0);
    }
    let a = (v.y / v.x).atan();
    Ok(if a <= -PI / 2.0 { PI / 2.0 } else { a })
}

/// Infima of `|θ₀|` over `0 < s ≤ σ` and of `|θ_π|` over `π − σ ≤ s < π`.
pub fn incidence_angles(f: &Filament, sigma: f64) -> Result<(f64, f64)> {
    if !(0.0 < sigma && sigma < PI / 4.0) {
        return Err(PeskinError::InvalidParameter(format!(
            "sigma must lie in (0, π/4), got {sigma}"
        )));
    }
    let n = f.len();
    let nodes = f.nodes();
    let mut theta0 = f64::INFINITY;
    let mut thetapi = f64::INFINITY;
    for j in 1..n - 1 {
        let s = f.param(j);
        if s <= sigma {
            let chord = nodes[j] - nodes[0];
            if chord.norm() == 0.0 {
                return Err(PeskinError::DegenerateChord { from: 0, to: j });
            }
            theta0 = theta0.min((cutoff(sigma, s) * arg_half_plane(&chord)?).abs());
        }
        if s >= PI - sigma {
            let chord = nodes[n - 1] - nodes[j];
            if chord.norm() == 0.0 {
                return Err(PeskinError::DegenerateChord { from: j, to: n - 1 });
            }
            thetapi = thetapi.min((cutoff(sigma, PI - s) * arg_half_plane(&chord)?).abs());
        }
    }
    Ok((theta0, thetapi))
}

/// Infimum of `|X₂|` over `σ/2 ≤ s ≤ π − σ/2`.
pub fn interior_height(f: &Filament, sigma: f64) -> f64 {
    (0..f.len())
        .filter(|&j| {
            let s = f.param(j);
            s >= sigma / 2.0 && s <= PI - sigma / 2.0
        })
        .map(|j| f.nodes[j].y.abs())
        .fold(f64::INFINITY, f64::min)
}

/// Smallest of the chord-arc constant, both incidence infima and the interior height.
pub fn star_norm(f: &Filament, bounds: &GeometricBounds) -> Result<f64> {
    let (t0, tpi) = incidence_angles(f, bounds.sigma)?;
    Ok(chord_arc_constant(f)
        .min(t0)
        .min(tpi)
        .min(interior_height(f, bounds.sigma)))
}

/// Grid surrogate of the `C^{1,γ}` norm with `γ = 1/2`:
/// `max|X| + max|D_h X| + max_{k<l} |D_h X_k − D_h X_l| / |s_k − s_l|^γ`.
pub fn c1_gamma_surrogate(f: &Filament) -> f64 {
    let tangent = f.tangent();
    let h = f.ds();
    let n = f.len();
    let sup_x = f.nodes.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let sup_t = tangent.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let holder = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut best: f64 = 0.0;
            for l in (k + 1)..n {
                let q = (tangent[k] - tangent[l]).norm() / ((l - k) as f64 * h).sqrt();
                best = best.max(q);
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    sup_x + sup_t + holder
}

/// Minimum over interior pairs of `|Δ^r X| / (½ sin((s_k + s_l)/2))` and whether it
/// clears `min{2, m sin(m) σ}`.
pub fn deltar_ratio_bound_check(f: &Filament, bounds: &GeometricBounds) -> (f64, bool) {
    let min_ratio = deltar_min_ratio(f);
    (min_ratio, min_ratio >= bounds.deltar_constant())
}

/// Minimum over interior pairs of `|Δ^r X| / (½ sin((s_k + s_l)/2))`.
pub fn deltar_min_ratio(f: &Filament) -> f64 {
    let n = f.len();
    let h = f.ds();
    let nodes = f.nodes();
    (1..n - 1)
        .into_par_iter()
        .map(|k| {
            let mut best = f64::INFINITY;
            for l in k..n - 1 {
                let d = nodes[k] - reflect_point(&nodes[l]);
                let den = 0.5 * (0.5 * (k + l) as f64 * h).sin();
                best = best.min(d.norm() / den);
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Signed area between the filament and the wall segment, positive above the wall.
pub fn enclosed_area(f: &Filament) -> f64 {
    let p = f.nodes();
    let n = p.len();
    let mut acc = 0.0;
    for j in 0..n {
        let a = p[j];
        let b = p[(j + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    0.5 * acc
}

/// Outcome of a membership test against `(M, m, σ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MembershipReport {
    pub star_norm: f64,
    pub c1_gamma: f64,
    pub deltar_min_ratio: f64,
    pub deltar_passes: bool,
}

impl MembershipReport {
    pub fn is_member(&self, bounds: &GeometricBounds) -> bool {
        self.star_norm >= bounds.m_lower && self.c1_gamma <= bounds.m_upper && self.deltar_passes
    }

    /// Name and value of the first violated condition, if any.
    pub fn violation(&self, bounds: &GeometricBounds) -> Option<(&'static str, f64)> {
        if self.star_norm < bounds.m_lower {
            Some(("star_norm", self.star_norm))
        } else if self.c1_gamma > bounds.m_upper {
            Some(("c1_gamma_surrogate", self.c1_gamma))
        } else if !self.deltar_passes {
            Some(("deltar_ratio", self.deltar_min_ratio))
        } else {
            None
        }
    }
}

/// Evaluates every membership functional.
pub fn membership(f: &Filament, bounds: &GeometricBounds) -> Result<MembershipReport> {
    let star = star_norm(f, bounds)?;
    let c1 = c1_gamma_surrogate(f);
    let (ratio, passes) = deltar_ratio_bound_check(f, bounds);
    Ok(MembershipReport {
        star_norm: star,
        c1_gamma: c1,
        deltar_min_ratio: ratio,
        deltar_passes: passes,
    })
}
