//! Circular-arc equilibria through the anchors.

use std::f64::consts::PI;

use crate::error::{PeskinError, Result};
use crate::geometry::{enclosed_area, grid_param, Filament, Vec2};

/// Circle through `(±1, 0)` with center `(0, c)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcCenter {
    pub c: f64,
}

impl ArcCenter {
    pub fn new(c: f64) -> Self {
        Self { c }
    }

    pub fn radius(&self) -> f64 {
        (self.c * self.c + 1.0).sqrt()
    }

    /// Apex height `r + c`.
    pub fn height(&self) -> f64 {
        self.radius() + self.c
    }

    pub fn area(&self) -> f64 {
        area_of_center(self.c)
    }
}

/// Polar angle of the arc point at parameter `s`.
fn arc_angle(c: f64, s: f64) -> f64 {
    if c > 0.0 {
        let a = (1.0 / c).atan();
        (2.0 - 2.0 / PI * a) * s + a - PI / 2.0
    } else if c == 0.0 {
        s
    } else {
        let a = (1.0 / c).atan();
        -2.0 / PI * a * s + a + PI / 2.0
    }
}

/// Constant-speed parametrization of the arc with center `(0, c)`.
pub fn equilibrium_arc(c: f64, n: usize) -> Result<Filament> {
    if n < 4 {
        return Err(PeskinError::InvalidParameter(format!(
            "equilibrium arc needs at least 4 nodes, got {n}"
        )));
    }
    if !c.is_finite() {
        return Err(PeskinError::InvalidParameter(format!("non-finite center {c}")));
    }
    let r = (c * c + 1.0).sqrt();
    let nodes = (0..n)
        .map(|j| {
            let th = arc_angle(c, grid_param(j, n));
            Vec2::new(r * th.cos(), r * th.sin() + c)
        })
        .collect();
    Filament::new(nodes)
}

/// Area enclosed by the arc and the wall.
pub fn area_of_center(c: f64) -> f64 {
    if c > 0.0 {
        (PI - (1.0 / c).atan()) * (c * c + 1.0) + c
    } else if c == 0.0 {
        PI / 2.0
    } else {
        -(1.0 / c).atan() * (c * c + 1.0) + c
    }
}

/// Inverts [`area_of_center`] by bisection.
pub fn center_of_area(area: f64) -> Result<f64> {
    if !(area > 0.0) || !area.is_finite() {
        return Err(PeskinError::InvalidParameter(format!(
            "area must be positive and finite, got {area}"
        )));
    }
    let mut lo = -1e6;
    let mut hi = 1e6;
    while area_of_center(lo) > area {
        lo *= 2.0;
        if !lo.is_finite() {
            return Err(PeskinError::InvalidParameter(format!("area {area} is too small")));
        }
    }
    while area_of_center(hi) < area {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(PeskinError::InvalidParameter(format!("area {area} is too large")));
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-13 * mid.abs().max(1.0) || mid == lo || mid == hi {
            break;
        }
        if area_of_center(mid) < area {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Center of the sampled arc on `n` nodes whose polygon area equals `area`.
///
/// Starts from the continuum inversion and corrects for the `O(N⁻²)` gap
/// between the polygon area and the exact area by bisection.
pub fn discrete_center_of_area(area: f64, n: usize) -> Result<f64> {
    let c0 = center_of_area(area)?;
    let g = |c: f64| -> Result<f64> { Ok(enclosed_area(&equilibrium_arc(c, n)?) - area) };
    let mut step = 1e-3 * (1.0 + c0.abs());
    let (mut lo, mut hi) = (c0 - step, c0 + step);
    let mut tries = 0;
    while g(lo)? > 0.0 || g(hi)? < 0.0 {
        step *= 4.0;
        lo = c0 - step;
        hi = c0 + step;
        tries += 1;
        if tries > 60 {
            return Err(PeskinError::InvalidParameter(format!(
                "no sampled arc on {n} nodes encloses area {area}"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The sampled arc on the same grid enclosing the same polygon area.
pub fn equilibrium_for(f: &Filament) -> Result<Filament> {
    let c = discrete_center_of_area(enclosed_area(f), f.len())?;
    equilibrium_arc(c, f.len())
}

/// Curvature at interior nodes from the circle through each node and its two neighbours.
pub fn three_point_curvature(f: &Filament) -> Vec<f64> {
    let p = f.nodes();
    (1..p.len() - 1)
        .map(|j| {
            let a = p[j - 1];
            let b = p[j];
            let c = p[j + 1];
            let cross = (b - a).perp(&(c - a));
            2.0 * cross / ((b - a).norm() * (c - b).norm() * (c - a).norm())
        })
        .collect()
}
