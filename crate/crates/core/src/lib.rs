//! Simulator for an elastic filament anchored at `(±1, 0)` to a no-slip wall
//! in two-dimensional Stokes flow.
//!
//! The filament `X: [0, π] → ℝ²` moves with the fluid velocity generated by
//! its own Hookean force `∂²_s X` through the half-space Stokeslet. The
//! velocity splits into the Dirichlet operator `L_D = −Λ/4` acting on the odd
//! extension of `X − ℓ` and a smoother remainder; time stepping applies the
//! exact semigroup of `L_D` and treats the remainder with an exponential
//! midpoint rule.

pub mod analysis;
pub mod config;
pub mod diagnostics;
pub mod equilibria;
pub mod error;
pub mod geometry;
pub mod output;
pub mod remainder;
pub mod selftest;
pub mod spectral;
pub mod stokeslet;
pub mod timestepper;

pub use error::{PeskinError, Result};
pub use geometry::{Filament, GeometricBounds, Vec2};
