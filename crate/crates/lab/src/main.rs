use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use unitdist_lab::commands::{self, *};
use unitdist_lab::config::Experiment;
use unitdist_lab::{emit, Failure, LabError, Result};

/// Exact experiments on unit distances in R^3.
#[derive(Parser)]
#[command(name = "udlab", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a point or circle family.
    Gen(GenArgs),
    /// Count unit pairs.
    Count(CountArgs),
    /// Point-circle incidences and rich points.
    Incidence(IncidenceArgs),
    /// Seeded checks of the sphere duality in R^6.
    DualCheck(DualCheckArgs),
    /// Lift circles to R^4 and classify lens pairs.
    Lift(LiftArgs),
    /// Cut circles into pseudo-segments.
    Cut(CutArgs),
    /// Solve the exponent program at one alpha, or scan.
    Optimize(OptimizeArgs),
    /// Scan the exponent program over alpha.
    Scan(ScanArgs),
    /// Fit a log-log slope to a scaling series.
    Slope(SlopeArgs),
    /// Run an experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| LabError::Usage(format!("LAB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| LabError::Usage(e.to_string()))
}

fn run(cmd: Cmd) -> Result<Vec<Failure>> {
    init_threads()?;
    let outcome = match cmd {
        Cmd::Gen(a) => commands::gen(&a)?,
        Cmd::Count(a) => commands::count(&a)?,
        Cmd::Incidence(a) => commands::incidence(&a)?,
        Cmd::DualCheck(a) => commands::dual_check(&a)?,
        Cmd::Lift(a) => commands::lift(&a)?,
        Cmd::Cut(a) => commands::cut(&a)?,
        Cmd::Optimize(a) => commands::optimize(&a)?,
        Cmd::Scan(a) => commands::scan(&a)?,
        Cmd::Slope(a) => commands::slope(&a)?,
        Cmd::Run { config } => return Experiment::load(&config)?.run(),
    };
    emit(&outcome)?;
    Ok(outcome.failures)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(f) if f.is_empty() => ExitCode::SUCCESS,
        Ok(f) => {
            for x in &f {
                eprintln!("{}", json!({ "failure": x }));
            }
            ExitCode::from(1)
        }
        Err(e) => {
            let pointer = match &e {
                LabError::Config { pointer, .. } | LabError::Input { pointer, .. } => Some(pointer.clone()),
                _ => None,
            };
            eprintln!("{}", json!({ "error": e.kind(), "pointer": pointer, "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
