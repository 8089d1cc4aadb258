//! Run configuration and initial-condition presets.
//!
//! Configurations are TOML files with the sections `grid`, `time`, `ic`,
//! `bounds`, `tolerances`, `output` and, for the equilibrium mode,
//! `equilibrium`:
//!
//! ```toml
//! [grid]
//! n_nodes = 512
//!
//! [time]
//! dt = 0.01
//! t_final = 10.0
//!
//! [ic]
//! preset = "asymmetric"
//! a = 0.5
//!
//! [output]
//! snapshot_every = 100
//! ```

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::equilibria::equilibrium_arc;
use crate::error::{PeskinError, Result};
use crate::geometry::{Filament, GeometricBounds, Vec2};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_nodes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub dt: f64,
    pub t_final: f64,
}

fn default_a() -> f64 {
    0.5
}
fn default_d() -> f64 {
    0.4 * PI
}
fn default_w() -> f64 {
    0.12 * PI
}
fn default_h() -> f64 {
    1.7
}
fn default_s_w() -> f64 {
    0.06
}

/// Initial-condition presets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    /// `X = cos s`, `Y = sin s − a exp(−(s−d)²/(2w²)) sin² s`.
    Asymmetric {
        #[serde(default = "default_a")]
        a: f64,
        #[serde(default = "default_d")]
        d: f64,
        #[serde(default = "default_w")]
        w: f64,
    },
    /// Obtuse arc of apex height `h` with a Gaussian notch of depth `s_d` and width `s_w`
    /// at the apex, floored at `0.05 sin s`.
    NotchedArc {
        #[serde(default = "default_h")]
        h: f64,
        #[serde(default = "default_s_w")]
        s_w: f64,
        s_d: f64,
    },
    Semicircle,
    Equilibrium { c: f64 },
    /// Samples read from a text file of `s,X1,X2` or `X1,X2` rows.
    Custom { path: PathBuf },
}

impl Default for InitialCondition {
    fn default() -> Self {
        Self::Asymmetric {
            a: default_a(),
            d: default_d(),
            w: default_w(),
        }
    }
}

/// Named tolerances used by runs and checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative area drift allowed per unit time.
    pub area_drift_rate: f64,
    /// Largest remainder value allowed at the anchors.
    pub endpoint: f64,
    /// Final isoperimetric error for a converged run.
    pub iso: f64,
    /// Max-norm distance from an equilibrium arc over a short run.
    pub stationarity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            area_drift_rate: 1e-4,
            endpoint: 1e-6,
            iso: 1e-2,
            stationarity: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub snapshot_every: usize,
    pub geometry_check_every: usize,
    /// Steps skipped before the isoperimetric error is expected to decrease.
    pub burn_in: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            snapshot_every: 100,
            geometry_check_every: 1,
            burn_in: 50,
        }
    }
}

/// Target of the equilibrium mode: an area or a center height.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriumRequest {
    pub area: Option<f64>,
    pub center: Option<f64>,
}

/// Complete description of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub grid: GridConfig,
    pub time: TimeConfig,
    #[serde(default)]
    pub ic: InitialCondition,
    #[serde(default)]
    pub bounds: GeometricBounds,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equilibrium: Option<EquilibriumRequest>,
}

impl SimConfig {
    /// Asymmetric-bump run on `n` nodes.
    pub fn asymmetric(n: usize, dt: f64, t_final: f64) -> Self {
        Self {
            grid: GridConfig { n_nodes: n },
            time: TimeConfig { dt, t_final },
            ic: InitialCondition::default(),
            bounds: GeometricBounds::default(),
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
            equilibrium: None,
        }
    }

    pub fn with_ic(mut self, ic: InitialCondition) -> Self {
        self.ic = ic;
        self
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| PeskinError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a TOML file; a relative custom-sample path is taken relative to the file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PeskinError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        if let InitialCondition::Custom { path: sample } = &mut cfg.ic {
            if sample.is_relative() {
                if let Some(dir) = path.parent() {
                    *sample = dir.join(&*sample);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(PeskinError::Config(msg));
        if self.grid.n_nodes < 4 {
            return bad(format!("grid.n_nodes must be at least 4, got {}", self.grid.n_nodes));
        }
        if !(self.time.dt > 0.0) || !self.time.dt.is_finite() {
            return bad(format!("time.dt must be positive, got {}", self.time.dt));
        }
        if !(self.time.t_final >= self.time.dt) || !self.time.t_final.is_finite() {
            return bad(format!(
                "time.t_final must be at least dt, got {}",
                self.time.t_final
            ));
        }
        if self.output.snapshot_every == 0 || self.output.geometry_check_every == 0 {
            return bad("output cadences must be positive".into());
        }
        self.bounds
            .validate()
            .map_err(|e| PeskinError::Config(e.to_string()))?;
        match &self.ic {
            InitialCondition::Asymmetric { w, .. } if !(*w > 0.0) => {
                bad(format!("ic.w must be positive, got {w}"))
            }
            InitialCondition::NotchedArc { h, s_w, .. } if !(*h > 0.0) || !(*s_w > 0.0) => {
                bad(format!("ic.h and ic.s_w must be positive, got {h}, {s_w}"))
            }
            _ => Ok(()),
        }
    }

    /// Number of time steps covering `t_final`.
    pub fn n_steps(&self) -> usize {
        ((self.time.t_final / self.time.dt) - 1e-9).ceil().max(1.0) as usize
    }

    pub fn initial_filament(&self) -> Result<Filament> {
        build_initial(&self.ic, self.grid.n_nodes)
    }
}

/// Samples an initial condition on `n` nodes.
pub fn build_initial(ic: &InitialCondition, n: usize) -> Result<Filament> {
    match ic {
        InitialCondition::Asymmetric { a, d, w } => Filament::from_fn(n, |s| {
            let bump = a * (-(s - d).powi(2) / (2.0 * w * w)).exp() * s.sin().powi(2);
            Vec2::new(s.cos(), s.sin() - bump)
        }),
        InitialCondition::NotchedArc { h, s_w, s_d } => notched_arc(n, *h, *s_w, *s_d),
        InitialCondition::Semicircle => Ok(Filament::semicircle(n)),
        InitialCondition::Equilibrium { c } => equilibrium_arc(*c, n),
        InitialCondition::Custom { path } => {
            let f = read_samples(path)?;
            if f.len() != n {
                return Err(PeskinError::Config(format!(
                    "{} holds {} nodes but grid.n_nodes = {n}",
                    path.display(),
                    f.len()
                )));
            }
            Ok(f)
        }
    }
}

fn notched_arc(n: usize, h: f64, s_w: f64, s_d: f64) -> Result<Filament> {
    let c = (h * h - 1.0) / (2.0 * h);
    let rc = (1.0 + c * c).sqrt();
    let phi0 = (-c).atan();
    let phi1 = PI - phi0;
    let nodes = (0..n)
        .map(|j| {
            let t = j as f64 / (n - 1) as f64;
            let s = PI * t;
            let phi = phi0 + (phi1 - phi0) * t;
            let dp = (-((s - PI / 2.0) / s_w).powi(2)).exp() * s.sin();
            let y_arc = c + rc * phi.sin() - s_d * dp;
            Vec2::new(rc * phi.cos(), y_arc.max(0.05 * s.sin()))
        })
        .collect();
    Filament::new(nodes)
}

/// Reads node samples from `s,X1,X2` or `X1,X2` rows; `#` lines and a header are skipped.
pub fn read_samples(path: &Path) -> Result<Filament> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PeskinError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut nodes = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|v| v.parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if nodes.is_empty() => continue,
            Err(e) => {
                return Err(PeskinError::Config(format!(
                    "{}:{}: {e}",
                    path.display(),
                    lineno + 1
                )))
            }
        };
        let p = match values.as_slice() {
            [x, y] | [_, x, y] => Vec2::new(*x, *y),
            _ => {
                return Err(PeskinError::Config(format!(
                    "{}:{}: expected 2 or 3 columns",
                    path.display(),
                    lineno + 1
                )))
            }
        };
        nodes.push(p);
    }
    Filament::new(nodes).map_err(|e| PeskinError::Config(e.to_string()))
}
