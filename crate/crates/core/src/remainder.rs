//! Interaction kernels and the nonlinear remainder `R(X)`.
//!
//! The velocity of node `k` is `∫ S⁺(X(s_k), X(s')) X''(s') ds'`. Splitting off
//! the kernel `G₀ = (1/4π)[−log(2 sin(|s−s'|/2)) + log(2 sin((s+s')/2))] I`,
//! which reproduces `L_D` exactly on odd data, leaves
//!
//! `R_k = (1/4π) Σ_ℓ w_ℓ (H¹ + H² + H³)_{kℓ} F_ℓ`
//!
//! with trapezoid weights `w_ℓ`, the spectral force `F = D_h² X`, and
//!
//! * `H¹ = −log(|ΔX| / 2 sin(|s_k − s_ℓ|/2)) I + ΔX ⊗ ΔX / |ΔX|²`,
//! * `H² = log(|Δ^r X| / 2 sin((s_k + s_ℓ)/2)) I − (ΔX ⊗ Δ^r X / |Δ^r X|²) R`,
//! * `H³ = −2x₂ (Δ^r X ⊗ e₂) / |Δ^r X|² − 2x₂y₂ [I/|Δ^r X|² − 2 Δ^r X ⊗ Δ^r X / |Δ^r X|⁴] R`,
//!
//! each scaled by `4π` relative to `S⁺`. On the diagonal `H¹` uses the spectral
//! tangent; at the two anchor corners `H² = log|(D_h X)₂| I` and `H³ = 0`.
//! Entries that still evaluate to a non-finite number are set to zero.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{PeskinError, Result};
use crate::geometry::{grid_param, reflect_point, trapezoid_weights, Filament, Mat2, Vec2};
use crate::spectral::Spectral;

/// The three `N × N` blocks of `2 × 2` kernel matrices, stored row-major.
#[derive(Clone, Debug)]
pub struct KernelMatrices {
    pub n: usize,
    pub h1: Vec<Mat2>,
    pub h2: Vec<Mat2>,
    pub h3: Vec<Mat2>,
}

impl KernelMatrices {
    pub fn h1(&self, k: usize, l: usize) -> Mat2 {
        self.h1[k * self.n + l]
    }

    pub fn h2(&self, k: usize, l: usize) -> Mat2 {
        self.h2[k * self.n + l]
    }

    pub fn h3(&self, k: usize, l: usize) -> Mat2 {
        self.h3[k * self.n + l]
    }

    /// `(1/4π) Σ_ℓ w_ℓ (H¹ + H² + H³)_{kℓ} F_ℓ` for a given force density.
    pub fn contract(&self, force: &[Vec2]) -> Vec<Vec2> {
        let n = self.n;
        let w = trapezoid_weights(n);
        (0..n)
            .into_par_iter()
            .map(|k| {
                let mut acc = Vec2::zeros();
                for l in 0..n {
                    let h = self.h1(k, l) + self.h2(k, l) + self.h3(k, l);
                    acc += w[l] * (h * force[l]);
                }
                acc / (4.0 * PI)
            })
            .collect()
    }
}

/// Precomputed geometry shared by every kernel entry of one filament.
struct KernelContext<'a> {
    nodes: &'a [Vec2],
    tangent: Vec<Vec2>,
    /// `2 sin(d h/2)` for `d = |k − ℓ|`.
    sin_minus: Vec<f64>,
    /// `2 sin(q h/2)` for `q = k + ℓ`.
    sin_plus: Vec<f64>,
}

impl<'a> KernelContext<'a> {
    fn new(f: &'a Filament) -> Self {
        let n = f.len();
        let h = f.ds();
        Self {
            nodes: f.nodes(),
            tangent: f.tangent(),
            sin_minus: (0..n).map(|d| 2.0 * (0.5 * d as f64 * h).sin()).collect(),
            sin_plus: (0..2 * n - 1).map(|q| 2.0 * (0.5 * q as f64 * h).sin()).collect(),
        }
    }

    fn entry(&self, k: usize, l: usize) -> Result<[Mat2; 3]> {
        let n = self.nodes.len();
        let xk = self.nodes[k];
        let xl = self.nodes[l];
        let id = Mat2::identity();
        let refl = Mat2::new(1.0, 0.0, 0.0, -1.0);

        let h1 = if k == l {
            let t = self.tangent[k];
            let tn = t.norm_squared();
            -0.5 * tn.ln() * id + t * t.transpose() / tn
        } else {
            let d = xk - xl;
            let dd = d.norm_squared();
            if dd == 0.0 {
                return Err(PeskinError::SelfIntersection { k, l });
            }
            let sm = self.sin_minus[k.abs_diff(l)];
            -0.5 * (dd / (sm * sm)).ln() * id + d * d.transpose() / dd
        };

        let corner = k == l && (k == 0 || k == n - 1);
        let (h2, h3) = if corner {
            let t2 = self.tangent[k].y;
            (0.5 * (t2 * t2).ln() * id, Mat2::zeros())
        } else {
            let d = xk - xl;
            let dr = xk - reflect_point(&xl);
            let rr = dr.norm_squared();
            if rr == 0.0 {
                return Err(PeskinError::DegenerateReflectedPair { k, l });
            }
            let sp = self.sin_plus[k + l];
            let h2 = 0.5 * (rr / (sp * sp)).ln() * id - (d * dr.transpose() / rr) * refl;
            let x2 = xk.y;
            let y2 = xl.y;
            let rank_one = Mat2::new(0.0, dr.x, 0.0, dr.y);
            let h3 = -2.0 * x2 / rr * rank_one
                - 2.0 * x2 * y2 * (id / rr - 2.0 * dr * dr.transpose() / (rr * rr)) * refl;
            (h2, h3)
        };
        Ok([finite_or_zero(h1), finite_or_zero(h2), finite_or_zero(h3)])
    }
}

fn finite_or_zero(m: Mat2) -> Mat2 {
    m.map(|v| if v.is_finite() { v } else { 0.0 })
}

/// Fills `H¹`, `H²`, `H³` for every node pair.
pub fn assemble_kernels(f: &Filament) -> Result<KernelMatrices> {
    let n = f.len();
    let ctx = KernelContext::new(f);
    let rows: Vec<Vec<[Mat2; 3]>> = (0..n)
        .into_par_iter()
        .map(|k| (0..n).map(|l| ctx.entry(k, l)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut out = KernelMatrices {
        n,
        h1: Vec::with_capacity(n * n),
        h2: Vec::with_capacity(n * n),
        h3: Vec::with_capacity(n * n),
    };
    for row in rows {
        for [a, b, c] in row {
            out.h1.push(a);
            out.h2.push(b);
            out.h3.push(c);
        }
    }
    Ok(out)
}

/// Remainder `R(X)` at every node, assembled row by row without storing the kernels.
pub fn remainder_assemble(f: &Filament) -> Result<Vec<Vec2>> {
    remainder_with_force(f, &f.force())
}

/// Remainder for a supplied force density.
pub fn remainder_with_force(f: &Filament, force: &[Vec2]) -> Result<Vec<Vec2>> {
    let n = f.len();
    let ctx = KernelContext::new(f);
    let w = trapezoid_weights(n);
    (0..n)
        .into_par_iter()
        .map(|k| {
            let mut acc = Vec2::zeros();
            for l in 0..n {
                let [a, b, c] = ctx.entry(k, l)?;
                acc += w[l] * ((a + b + c) * force[l]);
            }
            Ok(acc / (4.0 * PI))
        })
        .collect()
}

/// Velocity of the principal part, `L_D X = −Λ/4` applied to the odd extension of `X − ℓ`.
pub fn principal_velocity(f: &Filament) -> Vec<Vec2> {
    Spectral::for_nodes(f.len()).apply_vec(&f.deviation(), |k| {
        Complex64::new(-(k.abs() as f64) / 4.0, 0.0)
    })
}

/// Full velocity `L_D X + R(X)`.
pub fn total_velocity(f: &Filament) -> Result<Vec<Vec2>> {
    let r = remainder_assemble(f)?;
    Ok(principal_velocity(f)
        .into_iter()
        .zip(r)
        .map(|(a, b)| a + b)
        .collect())
}

/// Spectral interpolation of a filament onto a grid `refine` times finer.
pub fn upsample(f: &Filament, refine: usize) -> Filament {
    assert!(refine >= 1);
    let n = f.len();
    let m = 2 * n - 2;
    let mf = refine * m;
    let nf = mf / 2 + 1;
    let coarse = Spectral::for_len(m);
    let fine = Spectral::for_len(mf);
    let w = f.deviation();
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for j in 0..n {
        buf[j] = Complex64::new(w[j].x, w[j].y);
    }
    for j in n..m {
        buf[j] = -Complex64::new(w[m - j].x, w[m - j].y);
    }
    coarse.fft_forward(&mut buf);
    let mut big = vec![Complex64::new(0.0, 0.0); mf];
    for (j, v) in buf.iter().enumerate() {
        if j == m / 2 {
            continue;
        }
        let k = coarse.wavenumber(j);
        big[k.rem_euclid(mf as i64) as usize] = *v;
    }
    fine.fft_inverse(&mut big);
    let scale = 1.0 / m as f64;
    let wf: Vec<Vec2> = big[..nf]
        .iter()
        .map(|c| Vec2::new(c.re * scale, c.im * scale))
        .collect();
    Filament::from_deviation(&wf)
}

/// Continuous remainder pieces `R₁`, `R₂`, `R₃` downsampled to the original nodes.
#[derive(Clone, Debug)]
pub struct OracleParts {
    pub r1: Vec<Vec2>,
    pub r2: Vec<Vec2>,
    pub r3: Vec<Vec2>,
}

impl OracleParts {
    pub fn total(&self) -> Vec<Vec2> {
        (0..self.r1.len())
            .map(|k| self.r1[k] + self.r2[k] + self.r3[k])
            .collect()
    }
}

fn finite_vec(v: Vec2) -> Vec2 {
    if v.x.is_finite() && v.y.is_finite() {
        v
    } else {
        Vec2::zeros()
    }
}

/// Direct quadrature of the integrated-by-parts remainder `R₁ + R₂ + R₃`.
///
/// The curve is interpolated spectrally onto a grid `refine` times finer, the
/// tangent there comes from the spectral derivative, and every integrand is
/// written with the tangent difference `v = X'(s) − X'(s')` so that it stays
/// bounded on the diagonal. The diagonal node is omitted, the trapezoid rule
/// covers the rest, and every `refine`-th fine node is returned.
pub fn remainder_continuous_oracle(f: &Filament, refine: usize) -> Result<OracleParts> {
    let fine = upsample(f, refine);
    let nf = fine.len();
    let x = fine.nodes();
    let t = fine.tangent();
    let w = trapezoid_weights(nf);
    let refl = |v: Vec2| reflect_point(&v);
    let c4 = 1.0 / (4.0 * PI);
    let c2 = 1.0 / (2.0 * PI);
    let c1 = 1.0 / PI;

    let rows: Vec<[Vec2; 3]> = (0..nf)
        .step_by(refine)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| {
            let sk = grid_param(k, nf);
            let xk = x[k];
            let x2 = xk.y;
            let mut a1 = Vec2::zeros();
            let mut a2 = Vec2::zeros();
            let mut a3 = Vec2::zeros();
            for l in 0..nf {
                if l == k {
                    continue;
                }
                let sl = grid_param(l, nf);
                let xl = x[l];
                let y2 = xl.y;
                let tl = t[l];
                let trl = refl(tl);
                let dx = xk - xl;
                let dr = xk - refl(xl);
                let v = t[k] - tl;
                let vr = refl(v);
                let dd = dx.norm_squared();
                let rr = dr.norm_squared();

                let cot_m = 1.0 / (0.5 * (sk - sl)).tan();
                let cot_p = 1.0 / (0.5 * (sk + sl)).tan();
                let r1 = c4
                    * ((dx.dot(&tl) / dd - 0.5 * cot_m) * v - (dr.dot(&trl) / rr + 0.5 * cot_p) * v);

                let r2 = -c4 * (tl * (dx.dot(&v) / dd) - tl * (dr.dot(&vr) / rr))
                    - c4 * (dx * (tl.dot(&v) / dd) - dx * (trl.dot(&vr) / rr))
                    + c2 * (dx * (dx.dot(&v) * tl.dot(&dx) / (dd * dd))
                        - dx * (dr.dot(&vr) * trl.dot(&dr) / (rr * rr)));

                let r3 = c2 * x2 * (v.y / rr) * trl
                    - c1 * x2 * (v.y * trl.dot(&dr) / (rr * rr)) * dr
                    - c2 * x2 * (tl.y / (rr * rr)) * (rr * vr - 2.0 * dr * dr.dot(&vr))
                    - c1 * x2 * (y2 * trl.dot(&dr) / (rr * rr)) * vr
                    - c1 * x2 * (y2 * dr.dot(&vr) / (rr * rr)) * trl
                    - c1 * x2 * (y2 * trl.dot(&vr) / (rr * rr)) * dr
                    + 4.0 * c1 * x2 * (y2 * dr.dot(&vr) * trl.dot(&dr) / (rr * rr * rr)) * dr;

                a1 += w[l] * finite_vec(r1);
                a2 += w[l] * finite_vec(r2);
                a3 += w[l] * finite_vec(r3);
            }
            [a1, a2, a3]
        })
        .collect();
    if rows.iter().flatten().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
        return Err(PeskinError::InvalidFilament(
            "oracle quadrature produced a non-finite value".into(),
        ));
    }
    Ok(OracleParts {
        r1: rows.iter().map(|r| r[0]).collect(),
        r2: rows.iter().map(|r| r[1]).collect(),
        r3: rows.iter().map(|r| r[2]).collect(),
    })
}

/// Largest anchor value of a remainder field.
pub fn endpoint_norm(r: &[Vec2]) -> f64 {
    r[0].norm().max(r[r.len() - 1].norm())
}
