//! Per-step observables.

use serde::Serialize;

use crate::equilibria::equilibrium_for;
use crate::error::Result;
use crate::geometry::{chord_arc_constant, enclosed_area, Filament, Vec2};
use crate::remainder::{endpoint_norm, remainder_assemble};

/// Column names of the diagnostics CSV file.
pub const CSV_HEADER: &str =
    "step,time,area,area_rel_error,iso_error,chord_arc,min_height,remainder_endpoint_norm";

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub time: f64,
    pub area: f64,
    pub area_rel_error: f64,
    pub iso_error: f64,
    pub chord_arc: f64,
    pub min_height: f64,
    pub remainder_endpoint_norm: f64,
}

impl DiagnosticsRecord {
    /// One CSV row with 17 significant digits per real value.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.step,
            self.time,
            self.area,
            self.area_rel_error,
            self.iso_error,
            self.chord_arc,
            self.min_height,
            self.remainder_endpoint_norm
        )
    }
}

/// `|L(X)/L(E) − 1|` where `E` is the equal-area arc and `L` the spectral arc length.
pub fn isoperimetric_error(f: &Filament) -> Result<f64> {
    let arc = equilibrium_for(f)?;
    Ok((f.arc_length() / arc.arc_length() - 1.0).abs())
}

/// Smallest height over the interior nodes.
pub fn min_interior_height(f: &Filament) -> f64 {
    let p = f.nodes();
    p[1..p.len() - 1].iter().map(|q| q.y).fold(f64::INFINITY, f64::min)
}

/// Diagnostics of a state whose remainder has already been evaluated.
pub fn record_with_remainder(
    f: &Filament,
    step: usize,
    time: f64,
    initial_area: f64,
    remainder: &[Vec2],
) -> Result<DiagnosticsRecord> {
    let area = enclosed_area(f);
    Ok(DiagnosticsRecord {
        step,
        time,
        area,
        area_rel_error: (area - initial_area).abs() / initial_area.abs(),
        iso_error: isoperimetric_error(f)?,
        chord_arc: chord_arc_constant(f),
        min_height: min_interior_height(f),
        remainder_endpoint_norm: endpoint_norm(remainder),
    })
}

/// Diagnostics of a state.
pub fn record(f: &Filament, step: usize, time: f64, initial_area: f64) -> Result<DiagnosticsRecord> {
    let r = remainder_assemble(f)?;
    record_with_remainder(f, step, time, initial_area, &r)
}

/// Largest `area_rel_error` in a series.
pub fn max_area_drift(records: &[DiagnosticsRecord]) -> f64 {
    records.iter().map(|r| r.area_rel_error).fold(0.0, f64::max)
}

/// Largest step-to-step increase of the isoperimetric error after `burn_in` steps.
///
/// A non-positive value means the series is monotone non-increasing there.
pub fn max_iso_increase(records: &[DiagnosticsRecord], burn_in: usize) -> f64 {
    records
        .windows(2)
        .filter(|w| w[0].step >= burn_in)
        .map(|w| w[1].iso_error - w[0].iso_error)
        .fold(f64::NEG_INFINITY, f64::max)
}
