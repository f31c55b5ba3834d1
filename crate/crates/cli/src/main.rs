//! `wolfes`: closed-form spectra, verification suites and audit reports.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or configuration error.

mod commands;
mod config;
mod output;
mod state;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{parse_sweep, Format, Overrides, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "wolfes",
    version,
    about = "Spectra and verification for the four-particle Wolfes model"
)]
struct Cli {
    #[command(flatten)]
    flags: GlobalFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalFlags {
    /// Oscillator frequency ω > 0 [default: 1]
    #[arg(long, global = true)]
    omega: Option<f64>,
    /// Three-body coupling g₁² ≥ 0 [default: 3]
    #[arg(long, global = true)]
    g1sq: Option<f64>,
    /// Highest total quanta N listed or checked [default: 6]
    #[arg(long, global = true)]
    max_quanta: Option<u32>,
    /// 1D grid unknowns [default: 2001]; nodes per axis for `verify 3d` [default: 61]
    #[arg(long, global = true)]
    grid_points: Option<usize>,
    /// 1D domain half-width or length at ω = 1; box edge for `verify 3d`
    #[arg(long, global = true)]
    domain_extent: Option<f64>,
    /// Energy tolerance [default: 1e-4, or 5e-3 for the 3D suite]
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Mirror sectors counted per level, 1 or 2 [default: 1]
    #[arg(long, global = true)]
    sector_mult: Option<u32>,
    /// Report format [default: json]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// `key = value` config file; the state file is kept beside it
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Comma-separated g₁² values for `resolve` [default: 0,1,3,7.5]
    #[arg(long, global = true, value_parser = parse_sweep_arg)]
    sweep: Option<SweepArg>,
}

/// Wrapper so clap treats the list as one value.
#[derive(Debug, Clone)]
struct SweepArg(Vec<f64>);

fn parse_sweep_arg(text: &str) -> Result<SweepArg, String> {
    parse_sweep(text).map(SweepArg)
}

impl GlobalFlags {
    fn overrides(&self) -> Overrides {
        Overrides {
            omega: self.omega,
            g1_squared: self.g1sq,
            max_quanta: self.max_quanta,
            grid_points: self.grid_points,
            domain_extent: self.domain_extent,
            tol: self.tol,
            sector_multiplicity: self.sector_mult,
            format: self.format,
            out: self.out.clone(),
            sweep: self.sweep.as_ref().map(|s| s.0.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Jacobi,
    Spherical,
    #[value(name = "3d")]
    ThreeD,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form spectrum table
    Spectrum,
    /// Run verification suites; exit 1 if any check fails
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Coupling derivative of the energy, three ways
    HfCheck,
    /// Determine the oscillator offset and radial rule and record them
    Resolve,
    /// Findings report on the restated literature claims; always exits 0
    Audit,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("WOLFES_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "WOLFES_THREADS must be a nonnegative integer, got `{raw}`"
        ))
    })?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let cfg = RunConfig::build(cli.flags.overrides(), cli.flags.config.as_deref())?;
    match cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::Verify { suite } => commands::verify(&cfg, suite),
        Command::HfCheck => commands::hf_check(&cfg),
        Command::Resolve => commands::resolve(&cfg),
        Command::Audit => commands::audit(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    // a panic is an internal failure, never a distinct exit status
    let outcome = std::panic::catch_unwind(|| run(cli))
        .unwrap_or_else(|_| Err(CliError::Failure(String::new())));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message().is_empty() {
                eprintln!("wolfes: {}", e.message());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
