//! Command-line front end for the Westervelt solver.
//!
//! Exit codes: 0 completed, 1 configuration or usage error (no files
//! written), 2 degenerate run, 3 Newton failure. Failed runs still write
//! their partial outputs and manifest.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use westervelt::{
    compare_integrators, convergence_study, run_simulation, Error, TerminationStatus,
};

use output::Manifest;

#[derive(Parser)]
#[command(
    name = "westervelt",
    version,
    about = "Energy-conserving finite element solver for the 1D Westervelt equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation; writes snapshots.csv, energy.csv, manifest.json
    Simulate(RunArgs),
    /// Space-time refinement study; writes convergence.csv, manifest.json
    Convergence(RunArgs),
    /// Run every integrator on the same data; writes compare.csv, manifest.json
    Compare(RunArgs),
}

#[derive(Args)]
pub struct RunArgs {
    /// Config file with `key = value` lines (# comments allowed)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Domain interval "a,b"
    #[arg(long)]
    pub domain: Option<String>,
    /// Number of mesh elements
    #[arg(long)]
    pub elements: Option<usize>,
    /// Polynomial degree k of the element space
    #[arg(long = "degree-k")]
    pub degree_k: Option<usize>,
    /// Polynomial order q of the time discretization
    #[arg(long = "order-q")]
    pub order_q: Option<usize>,
    /// Time step
    #[arg(long)]
    pub tau: Option<f64>,
    /// Final time
    #[arg(long = "t-final")]
    pub t_final: Option<f64>,
    /// Viscous damping coefficient
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Nonlinearity coefficient
    #[arg(long)]
    pub beta: Option<f64>,
    /// Initial data "PSI0,P0", e.g. "zero,gaussian(0.2)"
    #[arg(long)]
    pub initial: Option<String>,
    /// cpg | implicit_midpoint | lobatto_iiia2
    #[arg(long)]
    pub integrator: Option<String>,
    /// Snapshot times, e.g. "1,4,8"
    #[arg(long)]
    pub snapshots: Option<String>,
    /// Refinement levels of a convergence study
    #[arg(long)]
    pub levels: Option<usize>,
    /// Output directory
    #[arg(long = "out-dir", default_value = "out")]
    pub out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Convergence(args) => cmd_convergence(&args),
        Command::Compare(args) => cmd_compare(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn cmd_simulate(args: &RunArgs) -> Result<u8, String> {
    let started = Instant::now();
    let resolved = config::resolve(args)?;
    let trajectory = run_simulation(&resolved.simulation).map_err(|e| e.to_string())?;

    let dir = prepare_out_dir(&args.out_dir)?;
    write_file(&dir, "snapshots.csv", |p| {
        output::write_snapshots_csv(p, &trajectory)
    })?;
    write_file(&dir, "energy.csv", |p| {
        output::write_energy_csv(p, &trajectory.ledger)
    })?;
    let manifest = Manifest {
        artifact_version: env!("CARGO_PKG_VERSION"),
        command: "simulate",
        config: resolved.echo,
        duration_seconds: started.elapsed().as_secs_f64(),
        status: trajectory.status.as_str().into(),
        outputs: vec!["snapshots.csv".into(), "energy.csv".into()],
    };
    write_file(&dir, "manifest.json", |p| {
        output::write_manifest(p, &manifest)
    })?;

    match trajectory.status {
        TerminationStatus::Completed => Ok(0),
        TerminationStatus::Degenerate { margin } => {
            eprintln!(
                "run degenerated at t = {} (margin {margin:e}); partial outputs written",
                trajectory.final_state().time
            );
            Ok(2)
        }
        TerminationStatus::NewtonFailed { residual } => {
            eprintln!(
                "Newton failed at t = {} (residual {residual:e}); partial outputs written",
                trajectory.final_state().time
            );
            Ok(3)
        }
    }
}

fn cmd_convergence(args: &RunArgs) -> Result<u8, String> {
    let started = Instant::now();
    let mut resolved = config::resolve(args)?;
    let rows = match convergence_study(&resolved.simulation, resolved.levels) {
        Ok(rows) => rows,
        Err(err) => return exit_code_for(err),
    };

    let dir = prepare_out_dir(&args.out_dir)?;
    write_file(&dir, "convergence.csv", |p| {
        output::write_convergence_csv(p, &rows)
    })?;
    resolved
        .echo
        .insert("levels".into(), resolved.levels.to_string());
    let manifest = Manifest {
        artifact_version: env!("CARGO_PKG_VERSION"),
        command: "convergence",
        config: resolved.echo,
        duration_seconds: started.elapsed().as_secs_f64(),
        status: "completed".into(),
        outputs: vec!["convergence.csv".into()],
    };
    write_file(&dir, "manifest.json", |p| {
        output::write_manifest(p, &manifest)
    })?;
    Ok(0)
}

fn cmd_compare(args: &RunArgs) -> Result<u8, String> {
    let started = Instant::now();
    let resolved = config::resolve(args)?;
    let results = match compare_integrators(&resolved.simulation) {
        Ok(results) => results,
        Err(err) => return exit_code_for(err),
    };

    let dir = prepare_out_dir(&args.out_dir)?;
    write_file(&dir, "compare.csv", |p| {
        output::write_compare_csv(p, &results)
    })?;
    let manifest = Manifest {
        artifact_version: env!("CARGO_PKG_VERSION"),
        command: "compare",
        config: resolved.echo,
        duration_seconds: started.elapsed().as_secs_f64(),
        status: "completed".into(),
        outputs: vec!["compare.csv".into()],
    };
    write_file(&dir, "manifest.json", |p| {
        output::write_manifest(p, &manifest)
    })?;
    Ok(0)
}

/// Maps solver failures inside a study or comparison to the exit codes used
/// for single runs; configuration problems stay errors (exit 1).
fn exit_code_for(err: Error) -> Result<u8, String> {
    match err {
        Error::Degenerate { .. } => {
            eprintln!("error: {err}");
            Ok(2)
        }
        Error::NewtonDiverged { .. } | Error::SingularMatrix => {
            eprintln!("error: {err}");
            Ok(3)
        }
        other => Err(other.to_string()),
    }
}

fn prepare_out_dir(dir: &Path) -> Result<PathBuf, String> {
    std::fs::create_dir_all(dir)
        .map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))?;
    Ok(dir.to_path_buf())
}

fn write_file(
    dir: &Path,
    name: &str,
    writer: impl FnOnce(&Path) -> std::io::Result<()>,
) -> Result<(), String> {
    let path = dir.join(name);
    writer(&path).map_err(|e| format!("cannot write {}: {e}", path.display()))
}
