//! Exponential midpoint time stepping and the simulation driver.
//!
//! With `w = X − ℓ` extended oddly and `S(t) = e^{−t|k|/4}`,
//!
//! ```text
//! X_{n+1/2} = ℓ + S(Δt/2) w_n + (Δt/2) S(Δt/2) R(X_n)
//! X_{n+1}   = ℓ + S(Δt) w_n + Δt S(Δt/2) R(X_{n+1/2})
//! ```

use rustfft::num_complex::Complex64;

use crate::config::SimConfig;
use crate::diagnostics::{record_with_remainder, DiagnosticsRecord};
use crate::error::{PeskinError, Result};
use crate::geometry::{enclosed_area, membership, Filament, GeometricBounds, Vec2};
use crate::remainder::remainder_assemble;
use crate::spectral::Spectral;

/// How the nonlinear remainder enters the step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RemainderMode {
    #[default]
    Full,
    /// Remainder replaced by zero, leaving the exact linear flow.
    Zero,
}

/// Stage structure of the step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Stage {
    #[default]
    Midpoint,
    /// Single stage `X_{n+1} = ℓ + S(Δt)(w_n + Δt R(X_n))`, first order.
    Euler,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepperOptions {
    pub remainder: RemainderMode,
    pub stage: Stage,
}

/// One recorded point of a trajectory.
#[derive(Clone, Debug)]
pub struct TrajectoryState {
    pub filament: Filament,
    pub step: usize,
    pub time: f64,
    pub initial_area: f64,
    pub diagnostics: DiagnosticsRecord,
}

impl TrajectoryState {
    /// Step-0 state of a filament.
    pub fn initial(filament: Filament) -> Result<Self> {
        let area = enclosed_area(&filament);
        let r = remainder_assemble(&filament)?;
        let diagnostics = record_with_remainder(&filament, 0, 0.0, area, &r)?;
        Ok(Self {
            filament,
            step: 0,
            time: 0.0,
            initial_area: area,
            diagnostics,
        })
    }
}

/// Stepper for a fixed grid size.
#[derive(Clone, Debug)]
pub struct Stepper {
    options: StepperOptions,
}

fn zero_ends(mut r: Vec<Vec2>) -> Vec<Vec2> {
    // Odd extension of the remainder after removing its endpoint linear part,
    // which is at rounding level.
    let n = r.len();
    let (a, b) = (r[0], r[n - 1]);
    for (j, v) in r.iter_mut().enumerate() {
        let t = j as f64 / (n - 1) as f64;
        *v -= a * (1.0 - t) + b * t;
    }
    r[0] = Vec2::zeros();
    r[n - 1] = Vec2::zeros();
    r
}

fn semigroup_symbol(t: f64) -> impl Fn(i64) -> Complex64 {
    move |k| Complex64::new((-t * k.abs() as f64 / 4.0).exp(), 0.0)
}

impl Stepper {
    pub fn new(options: StepperOptions) -> Self {
        Self { options }
    }

    pub fn remainder(&self, f: &Filament) -> Result<Vec<Vec2>> {
        match self.options.remainder {
            RemainderMode::Full => remainder_assemble(f),
            RemainderMode::Zero => Ok(vec![Vec2::zeros(); f.len()]),
        }
    }

    /// Advances `x` by `dt`, given the remainder `r0 = R(x)`.
    pub fn advance(&self, x: &Filament, r0: &[Vec2], dt: f64) -> Result<Filament> {
        if !(dt > 0.0) {
            return Err(PeskinError::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let spec = Spectral::for_nodes(x.len());
        let w = x.deviation();
        let r0 = zero_ends(r0.to_vec());
        match self.options.stage {
            Stage::Euler => {
                let src: Vec<Vec2> = w.iter().zip(&r0).map(|(a, b)| a + dt * b).collect();
                Ok(Filament::from_deviation(&spec.apply_vec(&src, semigroup_symbol(dt))))
            }
            Stage::Midpoint => {
                let src: Vec<Vec2> = w.iter().zip(&r0).map(|(a, b)| a + 0.5 * dt * b).collect();
                let half = Filament::from_deviation(&spec.apply_vec(&src, semigroup_symbol(0.5 * dt)));
                let rh = zero_ends(self.remainder(&half)?);
                let lin = spec.apply_vec(&w, semigroup_symbol(dt));
                let forced = spec.apply_vec(&rh, semigroup_symbol(0.5 * dt));
                let next: Vec<Vec2> = lin.iter().zip(&forced).map(|(a, b)| a + dt * b).collect();
                Ok(Filament::from_deviation(&next))
            }
        }
    }
}

/// One step of the default scheme from `state`, with diagnostics of the new state.
pub fn step(state: &TrajectoryState, cfg: &SimConfig) -> Result<TrajectoryState> {
    let stepper = Stepper::new(StepperOptions::default());
    let r0 = stepper.remainder(&state.filament)?;
    let (next, _) = step_with(&stepper, state, &r0, cfg.time.dt)?;
    Ok(next)
}

/// Advances a state and returns the new state with its remainder.
fn step_with(
    stepper: &Stepper,
    state: &TrajectoryState,
    r0: &[Vec2],
    dt: f64,
) -> Result<(TrajectoryState, Vec<Vec2>)> {
    let filament = stepper.advance(&state.filament, r0, dt)?;
    let step = state.step + 1;
    let time = step as f64 * dt;
    let r1 = stepper.remainder(&filament)?;
    let diagnostics = record_with_remainder(&filament, step, time, state.initial_area, &r1)?;
    Ok((
        TrajectoryState {
            filament,
            step,
            time,
            initial_area: state.initial_area,
            diagnostics,
        },
        r1,
    ))
}

/// Output of a simulation.
#[derive(Debug)]
pub struct Trajectory {
    /// States at step 0, every `snapshot_every` steps, and the last step reached.
    pub snapshots: Vec<TrajectoryState>,
    /// Diagnostics of every step, starting with step 0.
    pub records: Vec<DiagnosticsRecord>,
    /// Set when the run stopped early.
    pub halted: Option<PeskinError>,
}

impl Trajectory {
    pub fn final_state(&self) -> &TrajectoryState {
        self.snapshots.last().expect("trajectory holds the initial state")
    }
}

fn check_geometry(f: &Filament, bounds: &GeometricBounds, step: usize) -> Result<()> {
    let report = membership(f, bounds)?;
    if let Some((name, value)) = report.violation(bounds) {
        return Err(PeskinError::GeometryViolation {
            step,
            invariant: name.to_string(),
            value,
        });
    }
    Ok(())
}

fn as_violation(err: PeskinError, step: usize) -> PeskinError {
    match err {
        PeskinError::SelfIntersection { .. } => PeskinError::GeometryViolation {
            step,
            invariant: "self_intersection".into(),
            value: 0.0,
        },
        PeskinError::DegenerateReflectedPair { .. } => PeskinError::GeometryViolation {
            step,
            invariant: "deltar_ratio".into(),
            value: 0.0,
        },
        other => other,
    }
}

/// Runs `cfg` with the default scheme.
pub fn simulate(cfg: &SimConfig) -> Result<Trajectory> {
    simulate_with(cfg, StepperOptions::default())
}

/// Runs `cfg` with the given stepper options.
///
/// Invalid configurations and initial states fail outright; a geometry
/// violation during the run ends it early with the partial trajectory.
pub fn simulate_with(cfg: &SimConfig, options: StepperOptions) -> Result<Trajectory> {
    cfg.validate()?;
    let stepper = Stepper::new(options);
    let x0 = cfg.initial_filament()?;
    check_geometry(&x0, &cfg.bounds, 0)?;
    let initial_area = enclosed_area(&x0);
    let mut r = stepper.remainder(&x0).map_err(|e| as_violation(e, 0))?;
    let diagnostics = record_with_remainder(&x0, 0, 0.0, initial_area, &r)?;
    let mut state = TrajectoryState {
        filament: x0,
        step: 0,
        time: 0.0,
        initial_area,
        diagnostics,
    };
    let mut records = vec![state.diagnostics];
    let mut snapshots = vec![state.clone()];
    let mut halted = None;
    let n_steps = cfg.n_steps();
    for n in 1..=n_steps {
        let outcome = step_with(&stepper, &state, &r, cfg.time.dt).and_then(|(next, r1)| {
            if n % cfg.output.geometry_check_every == 0 || n == n_steps {
                check_geometry(&next.filament, &cfg.bounds, n)?;
            }
            Ok((next, r1))
        });
        match outcome {
            Ok((next, r1)) => {
                state = next;
                r = r1;
                records.push(state.diagnostics);
                if n % cfg.output.snapshot_every == 0 || n == n_steps {
                    snapshots.push(state.clone());
                }
            }
            Err(e) => {
                halted = Some(as_violation(e, n));
                if snapshots.last().map(|s| s.step) != Some(state.step) {
                    snapshots.push(state.clone());
                }
                break;
            }
        }
    }
    Ok(Trajectory {
        snapshots,
        records,
        halted,
    })
}

/// Final filament after `steps` steps of size `dt`, without diagnostics.
pub fn integrate(x0: &Filament, dt: f64, steps: usize, options: StepperOptions) -> Result<Filament> {
    let stepper = Stepper::new(options);
    let mut x = x0.clone();
    for _ in 0..steps {
        let r = stepper.remainder(&x)?;
        x = stepper.advance(&x, &r, dt)?;
    }
    Ok(x)
}

/// Observed temporal order from runs with `Δt`, `Δt/2`, `Δt/4` to `t_final`.
///
/// `Δt` is shrunk to `t_final/n₀` with `n₀ = ⌈t_final/Δt⌉` so every run lands
/// on `t_final` exactly. The order is `log₂(|X_{Δt} − X_{Δt/2}| / |X_{Δt/2} − X_{Δt/4}|)`.
pub fn second_order_check(cfg: &SimConfig) -> Result<f64> {
    second_order_check_with(cfg, StepperOptions::default())
}

pub fn second_order_check_with(cfg: &SimConfig, options: StepperOptions) -> Result<f64> {
    cfg.validate()?;
    let x0 = cfg.initial_filament()?;
    let n0 = cfg.n_steps();
    let dt = cfg.time.t_final / n0 as f64;
    let coarse = integrate(&x0, dt, n0, options)?;
    let mid = integrate(&x0, dt / 2.0, 2 * n0, options)?;
    let fine = integrate(&x0, dt / 4.0, 4 * n0, options)?;
    Ok((coarse.max_distance(&mid) / mid.max_distance(&fine)).log2())
}
