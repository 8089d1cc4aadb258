//! Output files: diagnostics CSV, trajectory snapshots and the run manifest.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::SimConfig;
use crate::diagnostics::{DiagnosticsRecord, CSV_HEADER};
use crate::error::Result;
use crate::timestepper::TrajectoryState;

pub fn write_diagnostics(path: &Path, records: &[DiagnosticsRecord]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    out.flush()?;
    Ok(())
}

/// One `# t=<time>` block of `s,X1,X2` rows per snapshot, blocks separated by a blank line.
pub fn write_trajectory(path: &Path, snapshots: &[TrajectoryState]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for (i, state) in snapshots.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        writeln!(out, "# t={:.16e}", state.time)?;
        for (j, p) in state.filament.nodes().iter().enumerate() {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", state.filament.param(j), p.x, p.y)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Seconds since the Unix epoch.
pub fn wall_clock() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Provenance written next to every output set.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub mode: String,
    pub config: Option<SimConfig>,
    pub version: String,
    pub platform: String,
    pub seedless: bool,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub status: String,
}

impl RunManifest {
    pub fn new(mode: &str, config: Option<SimConfig>, seedless: bool) -> Self {
        Self {
            mode: mode.to_string(),
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            platform: format!("{}-{}", std::env::consts::ARCH, std::env::consts::OS),
            seedless,
            started_unix: wall_clock(),
            finished_unix: 0.0,
            status: "running".into(),
        }
    }

    pub fn finish(&mut self, status: &str) {
        self.finished_unix = wall_clock();
        self.status = status.to_string();
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::Other, e))?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}
