//! `toyqft`: run toy quantum field scenarios and print reports.
//!
//! Exit codes: 0 on success, 1 when an algebra verification fails, 2 on
//! malformed input.

mod commands;
mod report;
mod scenario;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;
use toyqft::ToyError;

use report::{emit_report, Format, Report, VerifyReport};
use scenario::{InputError, Kind, Scenario};

#[derive(Parser)]
#[command(
    name = "toyqft",
    version,
    about = "Toy quantum field spectra and scattering tables"
)]
struct Cli {
    /// Output format; overrides the scenario's `format` (default: table)
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Identity tolerance for `verify`, eigenvalue grouping tolerance for `spectrum`
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension and basis of a truncated Fock space
    Dims {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Check the ladder-operator algebra (seed from TOYQFT_SEED)
    Verify {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Eigenvalues and multiplicities of a field or interaction
    Spectrum {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Transition probabilities of the toy scattering operator
    Scatter {
        #[arg(long)]
        scenario: PathBuf,
        /// Keep only out states with the in state's total energy-momentum
        #[arg(long)]
        enforce_conservation: bool,
        /// Scale the Hamiltonian by g before exponentiating (extension)
        #[arg(long)]
        coupling: Option<f64>,
    },
    /// Mass-hyperboloid points and spatial volume
    Lattice {
        #[arg(long)]
        mass: u32,
        /// Largest energy p0 to enumerate
        #[arg(long, visible_alias = "r")]
        max_energy: u32,
        /// Time slice whose spatial volume is reported
        #[arg(long)]
        x0: Option<u32>,
    },
}

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Compute(#[from] ToyError),
}

fn load(path: &Path, expected: Kind) -> Result<Scenario, Failure> {
    let sc = scenario::load(path)?;
    if sc.kind != expected {
        return Err(InputError::new(
            "kind",
            format!(
                "expected `{}`, scenario has `{}`",
                expected.name(),
                sc.kind.name()
            ),
        )
        .into());
    }
    Ok(sc)
}

fn seed() -> Result<u64, Failure> {
    match std::env::var("TOYQFT_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| {
            InputError::new(
                "TOYQFT_SEED",
                format!("expected an unsigned integer, got {v:?}"),
            )
            .into()
        }),
        Err(_) => Ok(verify::DEFAULT_SEED),
    }
}

/// Runs the command; the flag says whether a verification failed.
fn run(cli: &Cli) -> Result<(Report, Option<Format>, bool), Failure> {
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(InputError::new("--tol", format!("must be positive, got {t}")).into());
        }
    }
    Ok(match &cli.command {
        Command::Dims { scenario } => {
            let sc = load(scenario, Kind::Dims)?;
            (commands::dims(&sc)?, sc.format, false)
        }
        Command::Verify { scenario } => {
            let sc = load(scenario, Kind::VerifyAlgebra)?;
            let report = commands::verify(&sc, cli.tol, seed()?)?;
            let failed = !report.passed;
            (Report::Verify(report), sc.format, failed)
        }
        Command::Spectrum { scenario } => {
            let sc = load(scenario, Kind::Spectrum)?;
            (commands::spectrum(&sc, cli.tol)?, sc.format, false)
        }
        Command::Scatter {
            scenario,
            enforce_conservation,
            coupling,
        } => {
            let sc = load(scenario, Kind::Scatter)?;
            (
                commands::scatter(&sc, *enforce_conservation, *coupling)?,
                sc.format,
                false,
            )
        }
        Command::Lattice {
            mass,
            max_energy,
            x0,
        } => (commands::lattice(*mass, *max_energy, *x0), None, false),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, scenario_format, failed)) => {
            let format = cli.format.or(scenario_format).unwrap_or(Format::Table);
            let bytes = emit_report(&report, format);
            let mut out = std::io::stdout().lock();
            if out.write_all(&bytes).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
