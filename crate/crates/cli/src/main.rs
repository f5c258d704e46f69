//! `spdc` — command-line front end for counterpropagating twin-photon
//! calculations: phase matching, joint spectra, coherence, temporal
//! correlation and Schmidt-number sweeps.
//!
//! Exit status: 0 on success, 1 on numerical failure, 2 on bad input.

mod commands;
#[cfg(test)]
mod contract;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{GridArgs, MethodArg, SweepArgs};

#[derive(Debug, Parser)]
#[command(name = "spdc", version, about = "Counterpropagating SPDC: spectra, coherence, entanglement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the phase-matching condition and report all time scales.
    Phasematch {
        #[arg(long)]
        scenario: PathBuf,
        /// Write phasematch.csv (and the η map) into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
        /// Pump wavelengths for the η map, `start:stop:count` in nm.
        #[arg(long, value_parser = parse_range)]
        sweep_lambda_p_nm: Option<Samples>,
        /// Poling periods for the η map, `start:stop:count` in nm.
        #[arg(long, value_parser = parse_range)]
        sweep_poling_nm: Option<Samples>,
    },
    /// Joint spectral amplitude on the automatic (or overridden) grid.
    Jsa(GridArgs),
    /// Marginal first-order coherence functions and spectra.
    Coherence(GridArgs),
    /// Temporal correlation of the twin photons.
    Temporal {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Fft)]
        method: MethodArg,
    },
    /// Schmidt number over a logarithmic range of pump durations.
    SchmidtSweep(SweepArgs),
}

/// Evenly spaced values given on the command line as `start:stop:count`.
#[derive(Debug, Clone, PartialEq)]
struct Samples(Vec<f64>);

fn parse_range(text: &str) -> Result<Samples, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("expected start:stop:count, got `{text}`"));
    };
    let a: f64 = a.trim().parse().map_err(|e| format!("start: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("stop: {e}"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("count: {e}"))?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(format!("invalid range `{text}`"));
    }
    if n == 1 {
        return Ok(Samples(vec![a]));
    }
    Ok(Samples((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()))
}

fn run(cli: &Cli) -> Result<(), error::CliError> {
    match &cli.command {
        Command::Phasematch {
            scenario,
            out,
            force,
            sweep_lambda_p_nm,
            sweep_poling_nm,
        } => commands::phasematch(
            scenario,
            out.as_deref(),
            *force,
            sweep_lambda_p_nm.as_ref().map(|s| s.0.as_slice()),
            sweep_poling_nm.as_ref().map(|s| s.0.as_slice()),
        ),
        Command::Jsa(args) => commands::jsa(args),
        Command::Coherence(args) => commands::coherence(args),
        Command::Temporal { grid, method } => commands::temporal(grid, *method),
        Command::SchmidtSweep(args) => commands::schmidt_sweep(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spdc: {e}");
            e.exit_code()
        }
    }
}
