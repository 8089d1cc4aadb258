//! Odd reflection, Fourier multipliers on the doubled grid and the Dirichlet
//! operator `L_D`.
//!
//! A field sampled at `N` nodes `s_j = jπ/(N−1)` is extended oddly to
//! `M = 2N − 2` points of the circle. Forward transforms are unnormalized and
//! inverse transforms carry the factor `1/M`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{PeskinError, Result};
use crate::geometry::Vec2;

/// Samples of a `2π`-periodic field on `M = 2N − 2` equispaced points.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicField {
    pub values: Vec<f64>,
}

impl PeriodicField {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of nodes on `[0, π]` that the field covers.
    pub fn n_nodes(&self) -> usize {
        self.values.len() / 2 + 1
    }

    /// Values on `[0, π]`.
    pub fn restrict(&self) -> Vec<f64> {
        self.values[..self.n_nodes()].to_vec()
    }

    /// True when `values[j] = −values[M−j]` and the field vanishes at `0` and `π`.
    pub fn is_odd(&self, tol: f64) -> bool {
        let m = self.len();
        let n = self.n_nodes();
        if self.values[0].abs() > tol || self.values[n - 1].abs() > tol {
            return false;
        }
        (1..m).all(|j| (self.values[j] + self.values[m - j]).abs() <= tol)
    }
}

/// Endpoint data of the linear interpolant `ℓ(s) = u(0) + (u(π) − u(0)) s/π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearPart {
    pub u0: f64,
    pub upi: f64,
}

impl LinearPart {
    pub fn eval(&self, s: f64) -> f64 {
        self.u0 + (self.upi - self.u0) * s / PI
    }

    pub fn slope(&self) -> f64 {
        (self.upi - self.u0) / PI
    }

    fn at_node(&self, j: usize, n: usize) -> f64 {
        self.u0 + (self.upi - self.u0) * j as f64 / (n - 1) as f64
    }
}

/// Subtracts the discrete linear part and reflects the rest oddly onto `M = 2N − 2` points.
pub fn odd_extend(u: &[f64]) -> (PeriodicField, LinearPart) {
    let n = u.len();
    assert!(n >= 3, "odd_extend needs at least 3 samples");
    let lin = LinearPart {
        u0: u[0],
        upi: u[n - 1],
    };
    let mut w: Vec<f64> = (0..n).map(|j| u[j] - lin.at_node(j, n)).collect();
    w[0] = 0.0;
    w[n - 1] = 0.0;
    (odd_reflect(&w), lin)
}

/// Reflects samples that already vanish at both ends.
pub fn odd_reflect(w: &[f64]) -> PeriodicField {
    let n = w.len();
    let m = 2 * n - 2;
    let mut values = vec![0.0; m];
    values[..n].copy_from_slice(w);
    for j in n..m {
        values[j] = -w[m - j];
    }
    PeriodicField { values }
}

/// Inverse of [`odd_extend`]: restricts to `[0, π]` and adds the linear part back.
pub fn restore(w: &PeriodicField, lin: &LinearPart) -> Vec<f64> {
    let n = w.n_nodes();
    (0..n).map(|j| w.values[j] + lin.at_node(j, n)).collect()
}

/// Cached FFT plans for one doubled-grid size.
pub struct Spectral {
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("m", &self.m).finish()
    }
}

static PLANS: OnceLock<Mutex<HashMap<usize, Arc<Spectral>>>> = OnceLock::new();

impl Spectral {
    /// Plans for `M` points, built once per process and shared.
    pub fn for_len(m: usize) -> Arc<Spectral> {
        assert!(m >= 4 && m % 2 == 0, "doubled grid size must be even");
        let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
        map.entry(m)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                Arc::new(Spectral {
                    m,
                    forward: planner.plan_fft_forward(m),
                    inverse: planner.plan_fft_inverse(m),
                })
            })
            .clone()
    }

    /// Plans for the doubled grid of `n` nodes on `[0, π]`.
    pub fn for_nodes(n: usize) -> Arc<Spectral> {
        Self::for_len(2 * n - 2)
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed integer wavenumber of DFT slot `j`.
    pub fn wavenumber(&self, j: usize) -> i64 {
        if j <= self.m / 2 {
            j as i64
        } else {
            j as i64 - self.m as i64
        }
    }

    /// Unnormalized forward DFT in place.
    pub fn fft_forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Unnormalized inverse DFT in place.
    pub fn fft_inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }

    /// Applies a Fourier multiplier `symbol(k)` with the Nyquist mode zeroed.
    ///
    /// The buffer is complex so two real fields can be carried at once in the
    /// real and imaginary parts; every symbol used here satisfies
    /// `symbol(−k) = conj(symbol(k))`, which keeps the two parts independent.
    pub fn apply_complex<F>(&self, buf: &mut [Complex64], symbol: F)
    where
        F: Fn(i64) -> Complex64,
    {
        assert_eq!(buf.len(), self.m);
        self.forward.process(buf);
        let scale = 1.0 / self.m as f64;
        for (j, v) in buf.iter_mut().enumerate() {
            if j == self.m / 2 {
                *v = Complex64::new(0.0, 0.0);
            } else {
                *v *= symbol(self.wavenumber(j)) * scale;
            }
        }
        self.inverse.process(buf);
    }

    pub fn apply<F>(&self, w: &PeriodicField, symbol: F) -> PeriodicField
    where
        F: Fn(i64) -> Complex64,
    {
        let mut buf: Vec<Complex64> = w.values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.apply_complex(&mut buf, symbol);
        PeriodicField {
            values: buf.iter().map(|c| c.re).collect(),
        }
    }

    pub fn derivative(&self, w: &PeriodicField) -> PeriodicField {
        self.apply(w, |k| Complex64::new(0.0, k as f64))
    }

    pub fn semigroup(&self, w: &PeriodicField, t: f64) -> Result<PeriodicField> {
        check_time(t)?;
        Ok(self.apply(w, |k| Complex64::new((-t * k.abs() as f64 / 4.0).exp(), 0.0)))
    }

    /// Applies a symbol to a pair of odd fields on `[0, π]` packed as 2-vectors
    /// and returns the restriction to `[0, π]`.
    pub fn apply_vec<F>(&self, w: &[Vec2], symbol: F) -> Vec<Vec2>
    where
        F: Fn(i64) -> Complex64,
    {
        let n = w.len();
        assert_eq!(2 * n - 2, self.m);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        for j in 0..n {
            buf[j] = Complex64::new(w[j].x, w[j].y);
        }
        for j in n..self.m {
            let v = w[self.m - j];
            buf[j] = Complex64::new(-v.x, -v.y);
        }
        self.apply_complex(&mut buf, symbol);
        buf[..n].iter().map(|c| Vec2::new(c.re, c.im)).collect()
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(PeskinError::InvalidParameter(format!(
            "semigroup time must be finite and non-negative, got {t}"
        )));
    }
    Ok(())
}

/// Spectral derivative `ik` with the Nyquist mode zeroed.
pub fn spectral_derivative(w: &PeriodicField) -> PeriodicField {
    Spectral::for_len(w.len()).derivative(w)
}

/// Semigroup `e^{−t|k|/4}` with the Nyquist mode zeroed.
pub fn semigroup_apply(w: &PeriodicField, t: f64) -> Result<PeriodicField> {
    Spectral::for_len(w.len()).semigroup(w, t)
}

/// Applies the spectral generator `−|k|/4` to samples on `[0, π]` after removing the linear part.
pub fn spectral_ld(u: &[f64]) -> Vec<f64> {
    let (w, _) = odd_extend(u);
    Spectral::for_len(w.len())
        .apply(&w, |k| Complex64::new(-(k.abs() as f64) / 4.0, 0.0))
        .restrict()
}

/// Spectral derivative of scalar samples on `[0, π]`, linear slope included.
pub fn derivative_on_interval(u: &[f64]) -> Vec<f64> {
    let (w, lin) = odd_extend(u);
    let slope = lin.slope();
    spectral_derivative(&w)
        .restrict()
        .into_iter()
        .map(|d| d + slope)
        .collect()
}

/// Direct principal-value quadrature of
/// `L_D[u](s) = −(1/8π) P.V.∫₀^π [cot((s−s')/2) + cot((s+s')/2)] u'(s') ds'`.
///
/// The two cotangent kernels together are the full-circle Hilbert kernel
/// applied to the even extension of `u'`. The punctured trapezoid rule on the
/// circle is completed by the local term `−2h u''(s)` from the excluded node,
/// which makes the rule exact on trigonometric polynomials below the Nyquist
/// mode. `u'` and `u''` come from the spectral derivative.
pub fn linear_operator_ld(u: &[f64]) -> Vec<f64> {
    let n = u.len();
    let h = PI / (n - 1) as f64;
    let (w, lin) = odd_extend(u);
    let spec = Spectral::for_len(w.len());
    let dw = spec.derivative(&w);
    let d2w = spec.derivative(&dw);
    let du: Vec<f64> = dw.values[..n].iter().map(|v| v + lin.slope()).collect();
    let s = |j: usize| j as f64 * h;
    (0..n)
        .map(|k| {
            let mut acc = 0.0;
            for (j, duj) in du.iter().enumerate() {
                if j != k {
                    acc += duj / ((s(k) - s(j)) / 2.0).tan();
                }
            }
            for (i, dui) in du.iter().enumerate().take(n - 1).skip(1) {
                acc += dui / ((s(k) + s(i)) / 2.0).tan();
            }
            acc -= 2.0 * d2w.values[k];
            -h * acc / (8.0 * PI)
        })
        .collect()
}

/// Composite Simpson rule on `[a, b]` with an even number of panels.
pub(crate) fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    acc * h / 3.0
}

/// `∂_x` of the line Poisson kernel `P_t(x) = t/(π(t² + x²))`.
pub fn poisson_line_kernel_dx(t: f64, x: f64) -> f64 {
    -2.0 * t * x / (PI * (t * t + x * x).powi(2))
}

/// Numerical `L¹` norm and supremum of `∂_x P_t` on the real line.
///
/// The `L¹` integral uses `x = t·tan θ`, which maps the half-line to
/// `[0, π/2)` with a smooth integrand. The supremum is a grid scan refined by
/// golden-section search.
pub fn poisson_line_norms(t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(PeskinError::InvalidParameter(format!(
            "Poisson kernel time must be positive, got {t}"
        )));
    }
    let integrand = |theta: f64| {
        if theta >= PI / 2.0 {
            return 0.0;
        }
        let c = theta.cos();
        let x = t * theta.tan();
        poisson_line_kernel_dx(t, x).abs() * t / (c * c)
    };
    let l1 = 2.0 * simpson(integrand, 0.0, PI / 2.0, 4000);

    let g = |x: f64| poisson_line_kernel_dx(t, x).abs();
    let xmax = 10.0 * t;
    let samples = 100_000;
    let dx = xmax / samples as f64;
    let mut best = 0;
    for i in 1..=samples {
        if g(i as f64 * dx) > g(best as f64 * dx) {
            best = i;
        }
    }
    let (mut a, mut b) = ((best.max(1) - 1) as f64 * dx, (best + 1) as f64 * dx);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if g(c) > g(d) {
            b = d;
        } else {
            a = c;
        }
    }
    Ok((l1, g(0.5 * (a + b))))
}
