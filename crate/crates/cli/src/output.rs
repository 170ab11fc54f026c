//! CSV and manifest writers. All numeric CSV fields carry 17 significant
//! digits, enough for the printed value to parse back to the exact f64.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use westervelt::{ConvergenceRow, EnergyLedger, IntegratorComparison, Trajectory};

/// 17 significant digits: round-trip exact for f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `snapshots.csv`: node coordinate column, then the pressure at each
/// snapshot time; the header row carries the snapshot times.
pub fn write_snapshots_csv(path: &Path, trajectory: &Trajectory) -> io::Result<()> {
    let mut out = io::BufWriter::new(fs::File::create(path)?);
    write!(out, "x")?;
    for &(time, _) in &trajectory.snapshots {
        write!(out, ",{}", format_float(time))?;
    }
    writeln!(out)?;
    for (i, &x) in trajectory.mesh.nodes().iter().enumerate() {
        write!(out, "{}", format_float(x))?;
        for &(_, idx) in &trajectory.snapshots {
            write!(out, ",{}", format_float(trajectory.states[idx].p[i]))?;
        }
        writeln!(out)?;
    }
    out.flush()
}

/// `energy.csv`: per-step time, discrete energy, accumulated dissipation.
pub fn write_energy_csv(path: &Path, ledger: &EnergyLedger) -> io::Result<()> {
    let mut out = io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "t,E_h,dissipation_cumulative")?;
    let mut cumulative = 0.0;
    for (n, (&t, &e)) in ledger.times.iter().zip(&ledger.energies).enumerate() {
        if n > 0 {
            cumulative += ledger.dissipation_increments[n - 1];
        }
        writeln!(
            out,
            "{},{},{}",
            format_float(t),
            format_float(e),
            format_float(cumulative)
        )?;
    }
    out.flush()
}

/// `convergence.csv`: refinement level rows; eoc is blank on the first row.
pub fn write_convergence_csv(path: &Path, rows: &[ConvergenceRow]) -> io::Result<()> {
    let mut out = io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "h_tau,err,eoc")?;
    for row in rows {
        let eoc = row.eoc.map(format_float).unwrap_or_default();
        writeln!(
            out,
            "{},{},{eoc}",
            format_float(row.h_tau),
            format_float(row.error)
        )?;
    }
    out.flush()
}

/// `compare.csv`: one row per integrator.
pub fn write_compare_csv(path: &Path, results: &[IntegratorComparison]) -> io::Result<()> {
    let mut out = io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "integrator,max_drift,balance_residual,final_energy")?;
    for row in results {
        writeln!(
            out,
            "{},{},{},{}",
            row.integrator,
            format_float(row.max_drift),
            format_float(row.balance_residual),
            format_float(row.final_energy)
        )?;
    }
    out.flush()
}

/// `manifest.json`: the resolved configuration (replayable as a config
/// file), run metadata, and the outputs written next to the manifest.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub artifact_version: &'static str,
    pub command: &'static str,
    pub config: BTreeMap<String, String>,
    pub duration_seconds: f64,
    pub status: String,
    pub outputs: Vec<String>,
}

pub fn write_manifest(path: &Path, manifest: &Manifest) -> io::Result<()> {
    let json = serde_json::to_string_pretty(manifest)?;
    fs::write(path, json + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn format_is_17_significant_digits() {
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(0.0625), "6.2500000000000000e-2");
    }

    proptest! {
        /// Printed CSV fields parse back to the exact same f64.
        #[test]
        fn float_format_round_trips(x in proptest::num::f64::ANY) {
            prop_assume!(x.is_finite());
            let text = format_float(x);
            let back: f64 = text.parse().unwrap();
            prop_assert!(back == x || (back == 0.0 && x == 0.0), "{x} -> {text} -> {back}");
        }
    }
}
