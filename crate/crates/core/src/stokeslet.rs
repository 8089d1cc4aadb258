//! Free-space and half-space Stokeslets with viscosity 1.
//!
//! The half-space Green's function is built by images,
//! `S⁺ = S − S^r + S^T`, where `S^r` is the free Stokeslet of the reflected
//! force at the reflected point and `S^T = (0, −Φ) + x₂∇Φ` is generated by the
//! harmonic potential `Φ`. The four-term closed form is evaluated separately
//! so the two paths can be compared.

use std::f64::consts::PI;

use crate::error::{PeskinError, Result};
use crate::geometry::{reflect_point, Vec2};

/// A point force in the closed upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForcePoint {
    pub location: Vec2,
    pub force: Vec2,
}

impl ForcePoint {
    pub fn new(location: Vec2, force: Vec2) -> Result<Self> {
        if location.y < 0.0 {
            return Err(PeskinError::InvalidParameter(format!(
                "force location below the wall: y = {}",
                location.y
            )));
        }
        Ok(Self { location, force })
    }

    pub fn velocity(&self, x: &Vec2) -> Result<Vec2> {
        stokeslet_halfspace(x, &self.location, &self.force)
    }

    pub fn pressure(&self, x: &Vec2) -> Result<f64> {
        pressure_halfspace(x, &self.location, &self.force)
    }
}

fn separation(x: &Vec2, y: &Vec2) -> Result<(Vec2, f64)> {
    let d = x - y;
    let r2 = d.norm_squared();
    if r2 == 0.0 {
        return Err(PeskinError::CoincidentPoints { x: x.x, y: x.y });
    }
    Ok((d, r2))
}

/// `S[f](x,y) = (1/4π)(−log|x−y| f + (f·(x−y))(x−y)/|x−y|²)`.
pub fn stokeslet_free(x: &Vec2, y: &Vec2, f: &Vec2) -> Result<Vec2> {
    let (d, r2) = separation(x, y)?;
    Ok((-0.5 * r2.ln() * f + d * (f.dot(&d) / r2)) / (4.0 * PI))
}

/// `P[f](x,y) = (1/2π) f·(x−y)/|x−y|²`.
pub fn pressure_free(x: &Vec2, y: &Vec2, f: &Vec2) -> Result<f64> {
    let (d, r2) = separation(x, y)?;
    Ok(f.dot(&d) / (2.0 * PI * r2))
}

/// `Φ[f](x,y) = −(f₂/2π) log|x−y^r| − (y₂/2π)(f^r·(x−y^r))/|x−y^r|²`.
pub fn correction_potential(x: &Vec2, y: &Vec2, f: &Vec2) -> Result<f64> {
    let (rho, r2) = separation(x, &reflect_point(y))?;
    let fr = reflect_point(f);
    Ok(-f.y * 0.5 * r2.ln() / (2.0 * PI) - y.y * fr.dot(&rho) / (2.0 * PI * r2))
}

/// Analytic gradient of `Φ` in `x`.
pub fn correction_potential_gradient(x: &Vec2, y: &Vec2, f: &Vec2) -> Result<Vec2> {
    let (rho, r2) = separation(x, &reflect_point(y))?;
    let fr = reflect_point(f);
    let frho = fr.dot(&rho);
    Ok(-f.y * rho / (2.0 * PI * r2) - y.y / (2.0 * PI) * (fr / r2 - 2.0 * frho * rho / (r2 * r2)))
}

/// `S^T = (0, −Φ) + x₂∇Φ`.
pub fn stokeslet_correction(x: &Vec2, y: &Vec2, f: &Vec2) -> Result<Vec2> {
    let phi = correction_potential(x, y, f)?;
    let grad = correction_potential_gradient(x, y, f)?;
    Ok(Vec2::new(0.0, -phi) + x.y * grad)
}

/// `P^T = 2∂_{x₂}Φ`.
pub fn pressure_correction(x: &Vec2, y: &Vec2, f: &Vec2) -> Result<f64> {
    Ok(2.0 * correction_potential_gradient(x, y, f)?.y)
}

/// Half-space Stokeslet via the image decomposition `S − S^r + S^T`.
pub fn stokeslet_halfspace_images(x: &Vec2, y: &Vec2, f: &Vec2) -> Result<Vec2> {
    let yr = reflect_point(y);
    let fr = reflect_point(f);
    Ok(stokeslet_free(x, y, f)? - stokeslet_free(x, &yr, &fr)? + stokeslet_correction(x, y, f)?)
}

/// Four-term closed form of the half-space Stokeslet.
///
/// A source on the wall produces the zero field.
pub fn stokeslet_halfspace(x: &Vec2, y: &Vec2, f: &Vec2) -> Result<Vec2> {
    let (d, r2) = separation(x, y)?;
    if y.y == 0.0 {
        return Ok(Vec2::zeros());
    }
    let (rho, rr2) = separation(x, &reflect_point(y))?;
    let fr = reflect_point(f);
    let log_term = 0.5 * (rr2.ln() - r2.ln());
    let tensor = d * (f.dot(&d) / r2 - fr.dot(&rho) / rr2);
    let wall = -x.y * f.y * rho / (2.0 * PI * rr2)
        - x.y * y.y / (2.0 * PI) * (fr / rr2 - 2.0 * fr.dot(&rho) * rho / (rr2 * rr2));
    Ok((log_term * f + tensor) / (4.0 * PI) + wall)
}

/// Half-space pressure `P − P^r + P^T`.
pub fn pressure_halfspace(x: &Vec2, y: &Vec2, f: &Vec2) -> Result<f64> {
    separation(x, y)?;
    if y.y == 0.0 {
        return Ok(0.0);
    }
    let yr = reflect_point(y);
    let fr = reflect_point(f);
    Ok(pressure_free(x, y, f)? - pressure_free(x, &yr, &fr)? + pressure_correction(x, y, f)?)
}

/// Central-difference Stokes residuals of a velocity/pressure pair.
///
/// Returns the momentum residual `|−Δu + ∇p|` and divergence `∇·u`, each
/// divided by the size of the largest term entering it.
pub fn fd_stokes_residual<U, P>(velocity: U, pressure: P, x: &Vec2, h: f64) -> Result<(f64, f64)>
where
    U: Fn(&Vec2) -> Result<Vec2>,
    P: Fn(&Vec2) -> Result<f64>,
{
    let ex = Vec2::new(h, 0.0);
    let ey = Vec2::new(0.0, h);
    let u0 = velocity(x)?;
    let uxp = velocity(&(x + ex))?;
    let uxm = velocity(&(x - ex))?;
    let uyp = velocity(&(x + ey))?;
    let uym = velocity(&(x - ey))?;
    let lap = (uxp + uxm + uyp + uym - 4.0 * u0) / (h * h);
    let grad_p = Vec2::new(
        (pressure(&(x + ex))? - pressure(&(x - ex))?) / (2.0 * h),
        (pressure(&(x + ey))? - pressure(&(x - ey))?) / (2.0 * h),
    );
    let momentum = (-lap + grad_p).norm() / (lap.norm() + grad_p.norm()).max(f64::MIN_POSITIVE);
    let du1 = (uxp.x - uxm.x) / (2.0 * h);
    let du2 = (uyp.y - uym.y) / (2.0 * h);
    let divergence = (du1 + du2).abs() / (du1.abs() + du2.abs()).max(f64::MIN_POSITIVE);
    Ok((momentum, divergence))
}

/// Finite-difference residuals of the half-space pair `(S⁺, P⁺)` at `x`.
pub fn stokes_residual_check(x: &Vec2, y: &Vec2, f: &Vec2, h: f64) -> Result<(f64, f64)> {
    fd_stokes_residual(
        |p| stokeslet_halfspace(p, y, f),
        |p| pressure_halfspace(p, y, f),
        x,
        h,
    )
}

/// Five-point Laplacian of `Φ` in `x`.
pub fn correction_potential_laplacian(x: &Vec2, y: &Vec2, f: &Vec2, h: f64) -> Result<f64> {
    let ex = Vec2::new(h, 0.0);
    let ey = Vec2::new(0.0, h);
    let phi = |p: Vec2| correction_potential(&p, y, f);
    Ok((phi(x + ex)? + phi(x - ex)? + phi(x + ey)? + phi(x - ey)? - 4.0 * phi(*x)?) / (h * h))
}
