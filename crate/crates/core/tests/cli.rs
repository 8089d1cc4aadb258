use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_anchored-peskin");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL: &str = r#"
[grid]
n_nodes = 64

[time]
dt = 0.02
t_final = 0.2

[output]
snapshot_every = 5
"#;

#[test]
fn simulate_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SMALL);
    let out = dir.path().join("out");
    let o = run(&["--mode", "simulate", "--config", &cfg, "--out-dir", out.to_str().unwrap(), "--seedless"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let diag = std::fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    let lines: Vec<&str> = diag.lines().collect();
    assert!(lines[0].starts_with("step,time,area"));
    assert_eq!(lines.len(), 1 + 11);

    let traj = std::fs::read_to_string(out.join("trajectory.txt")).unwrap();
    let blocks: Vec<&str> = traj.split("\n\n").collect();
    assert_eq!(blocks.len(), 3);
    for b in &blocks {
        let mut rows = b.lines();
        assert!(rows.next().unwrap().starts_with("# t="));
        assert_eq!(rows.filter(|r| r.split(',').count() == 3).count(), 64);
    }

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "ok");
    assert_eq!(manifest["seedless"], true);
    assert_eq!(manifest["config"]["grid"]["n_nodes"], 64);
}

#[test]
fn snapshot_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SMALL);
    let out = dir.path().join("out");
    let o = run(&["--mode", "simulate", "--config", &cfg, "--out-dir", out.to_str().unwrap(), "--snapshot-every", "2"]);
    assert!(o.status.success());
    let traj = std::fs::read_to_string(out.join("trajectory.txt")).unwrap();
    assert_eq!(traj.matches("# t=").count(), 6);
}

#[test]
fn equilibrium_of_half_disc_area_is_semicircle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "eq.toml",
        &format!("{SMALL}\n[equilibrium]\narea = {}\n", std::f64::consts::FRAC_PI_2),
    );
    let o = run(&["--mode", "equilibrium", "--config", &cfg]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let c: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("c = "))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(c.abs() < 1e-12, "{c}");
}

#[test]
fn bad_config_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "[grid]\nn_nodes = 64\n[time]\ndt = -1.0\nt_final = 1.0\n");
    let o = run(&["--mode", "simulate", "--config", &cfg, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["--mode", "simulate"]);
    assert_eq!(o.status.code(), Some(2));
    let typo = write(dir.path(), "typo.toml", &format!("{SMALL}\n[extra]\nx = 1\n"));
    let o = run(&["--mode", "simulate", "--config", &typo, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn geometry_violation_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "tight.toml",
        &format!("{SMALL}\n[bounds]\nm_upper = 1000.0\nm_lower = 0.9\nsigma = 0.2\n"),
    );
    let o = run(&["--mode", "simulate", "--config", &cfg, "--out-dir", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn selftest_passes() {
    let o = run(&["--mode", "selftest"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("11 of 11 checks passed"));
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["asymmetric.toml", "equilibrium.toml"] {
        anchored_peskin::config::SimConfig::from_file(&root.join(name)).unwrap();
    }
}
