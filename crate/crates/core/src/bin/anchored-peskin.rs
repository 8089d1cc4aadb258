use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use anchored_peskin::config::SimConfig;
use anchored_peskin::diagnostics::max_area_drift;
use anchored_peskin::equilibria::{area_of_center, center_of_area, equilibrium_arc, ArcCenter};
use anchored_peskin::geometry::enclosed_area;
use anchored_peskin::output::{write_diagnostics, write_trajectory, RunManifest};
use anchored_peskin::selftest::run_battery;
use anchored_peskin::timestepper::{second_order_check, simulate};
use anchored_peskin::PeskinError;

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_GEOMETRY: u8 = 3;
const EXIT_SELFTEST: u8 = 4;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Simulate,
    Selftest,
    Convergence,
    Equilibrium,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::Selftest => "selftest",
            Mode::Convergence => "convergence",
            Mode::Equilibrium => "equilibrium",
        }
    }
}

/// Anchored elastic filament in half-plane Stokes flow.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Cli {
    #[arg(long, value_enum)]
    mode: Mode,
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Overrides output.snapshot_every.
    #[arg(long)]
    snapshot_every: Option<usize>,
    /// Records that the run must not use random numbers; no code path does.
    #[arg(long)]
    seedless: bool,
}

fn exit_code(err: &PeskinError) -> u8 {
    match err {
        PeskinError::Config(_) | PeskinError::InvalidParameter(_) => EXIT_CONFIG,
        PeskinError::GeometryViolation { .. }
        | PeskinError::SelfIntersection { .. }
        | PeskinError::DegenerateReflectedPair { .. } => EXIT_GEOMETRY,
        PeskinError::InvalidFilament(_) => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}

fn load_config(cli: &Cli) -> Result<Option<SimConfig>, PeskinError> {
    let Some(path) = &cli.config else {
        return Ok(None);
    };
    let mut cfg = SimConfig::from_file(path)?;
    if let Some(every) = cli.snapshot_every {
        if every == 0 {
            return Err(PeskinError::Config("--snapshot-every must be positive".into()));
        }
        cfg.output.snapshot_every = every;
    }
    Ok(Some(cfg))
}

fn require(cfg: Option<SimConfig>, mode: Mode) -> Result<SimConfig, PeskinError> {
    cfg.ok_or_else(|| PeskinError::Config(format!("--mode {} needs --config", mode.name())))
}

fn run_simulate(cfg: &SimConfig, out_dir: &Path) -> Result<u8, PeskinError> {
    let traj = simulate(cfg)?;
    write_diagnostics(&out_dir.join("diagnostics.csv"), &traj.records)?;
    write_trajectory(&out_dir.join("trajectory.txt"), &traj.snapshots)?;
    let last = traj.records.last().expect("initial record");
    println!(
        "steps = {}  t = {:.4}  max area drift = {:.3e}  iso error = {:.3e}",
        last.step,
        last.time,
        max_area_drift(&traj.records),
        last.iso_error
    );
    match traj.halted {
        Some(err) => {
            eprintln!("halted: {err}");
            Ok(exit_code(&err))
        }
        None => Ok(0),
    }
}

fn run_selftest() -> Result<u8, PeskinError> {
    let outcomes = run_battery()?;
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
    Ok(if failed == 0 { 0 } else { EXIT_SELFTEST })
}

fn run_convergence(cfg: &SimConfig, out_dir: &Path) -> Result<u8, PeskinError> {
    let order = second_order_check(cfg)?;
    println!(
        "temporal order (dt = {}, T = {}, N = {}): {:.3}",
        cfg.time.dt, cfg.time.t_final, cfg.grid.n_nodes, order
    );
    let c = 1.0;
    let exact = area_of_center(c);
    let mut rows = vec!["n_nodes,area,area_error,rate".to_string()];
    let mut prev: Option<f64> = None;
    println!("area of equilibrium arc c = {c} under refinement:");
    for n in [64, 128, 256, 512, 1024] {
        let err = (enclosed_area(&equilibrium_arc(c, n)?) - exact).abs();
        let rate = prev.map(|p| (p / err).log2()).unwrap_or(f64::NAN);
        println!("  N = {n:5}  error = {err:.3e}  rate = {rate:.3}");
        rows.push(format!("{n},{:.16e},{err:.16e},{rate:.16e}", exact));
        prev = Some(err);
    }
    rows.push(format!("# temporal_order,{order:.16e}"));
    std::fs::write(out_dir.join("convergence.csv"), rows.join("\n") + "\n")?;
    Ok(0)
}

fn run_equilibrium(cfg: &SimConfig) -> Result<u8, PeskinError> {
    let req = cfg.equilibrium.clone().unwrap_or_default();
    let c = match (req.area, req.center) {
        (Some(a), None) => center_of_area(a)?,
        (None, Some(c)) => c,
        _ => {
            return Err(PeskinError::Config(
                "[equilibrium] needs exactly one of `area` or `center`".into(),
            ))
        }
    };
    let arc = ArcCenter::new(c);
    println!("c = {:.16e}", c);
    println!("r = {:.16e}", arc.radius());
    println!("h = {:.16e}", arc.height());
    println!("area = {:.16e}", arc.area());
    Ok(0)
}

fn run(cli: &Cli, manifest: &mut RunManifest) -> Result<u8, PeskinError> {
    let cfg = load_config(cli)?;
    manifest.config = cfg.clone();
    let needs_output = matches!(cli.mode, Mode::Simulate | Mode::Convergence);
    if needs_output {
        std::fs::create_dir_all(&cli.out_dir)?;
    }
    match cli.mode {
        Mode::Simulate => run_simulate(&require(cfg, cli.mode)?, &cli.out_dir),
        Mode::Selftest => run_selftest(),
        Mode::Convergence => {
            let cfg = match cfg {
                Some(c) => c,
                None => SimConfig::asymmetric(128, 0.04, 0.5),
            };
            run_convergence(&cfg, &cli.out_dir)
        }
        Mode::Equilibrium => run_equilibrium(&require(cfg, cli.mode)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut manifest = RunManifest::new(cli.mode.name(), None, cli.seedless);
    let code = match run(&cli, &mut manifest) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    };
    manifest.finish(if code == 0 { "ok" } else { "failed" });
    if matches!(cli.mode, Mode::Simulate | Mode::Convergence) && cli.out_dir.is_dir() {
        if let Err(err) = manifest.write(&cli.out_dir.join("manifest.json")) {
            eprintln!("error: cannot write manifest: {err}");
        }
    }
    ExitCode::from(code)
}
