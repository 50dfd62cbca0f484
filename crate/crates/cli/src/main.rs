//! Command-line verification harness.
//!
//! Subcommands run the library's verification suites on one domain and
//! write their reports under `--out`:
//!
//! * `kernel`   — localized-kernel decay constants per degree (JSON) and
//!   decay profiles (CSV), with a sweep-stability gate;
//! * `cubature` — positive cubature rules (CSV), weight-ratio reports
//!   (JSON), and Christoffel profiles (CSV);
//! * `frame`    — a needlet frame description (JSON), per-level node/weight
//!   files (CSV), and a Parseval report with a tightness gate;
//! * `approx`   — near-best convergence tables (CSV);
//! * `all`      — all of the above.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical infeasibility,
//! 4 a threshold gate failed. Output is deterministic for a fixed seed:
//! JSON keys are sorted and floats use the shortest round-trip form.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use config::CommonArgs;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lockern", version, about = "Localized polynomial kernel verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Localized-kernel decay reports over a degree sweep.
    Kernel(CommonArgs),
    /// Positive cubature rules and Christoffel profiles.
    Cubature(CommonArgs),
    /// Needlet-type tight frame construction and Parseval certificate.
    Frame(CommonArgs),
    /// Near-best approximation convergence tables.
    Approx(CommonArgs),
    /// Run every suite with one configuration.
    All(CommonArgs),
}

/// 0 ok, 2 config, 3 infeasible, 4 threshold.
pub(crate) enum Outcome {
    Ok,
    Threshold(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, runs): (&CommonArgs, Vec<commands::Suite>) = match &cli.command {
        Command::Kernel(a) => (a, vec![commands::Suite::Kernel]),
        Command::Cubature(a) => (a, vec![commands::Suite::Cubature]),
        Command::Frame(a) => (a, vec![commands::Suite::Frame]),
        Command::Approx(a) => (a, vec![commands::Suite::Approx]),
        Command::All(a) => (
            a,
            vec![
                commands::Suite::Kernel,
                commands::Suite::Cubature,
                commands::Suite::Frame,
                commands::Suite::Approx,
            ],
        ),
    };
    let setup = match config::Setup::from_args(args) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("configuration error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut threshold_failures = Vec::new();
    for suite in runs {
        match commands::run(suite, &setup) {
            Ok(Outcome::Ok) => {}
            Ok(Outcome::Threshold(msg)) => {
                eprintln!("threshold gate failed: {msg}");
                threshold_failures.push(msg);
            }
            Err(e) => {
                return match e {
                    lockern::Error::Infeasible { .. } | lockern::Error::Resolution(_) => {
                        eprintln!("numerical infeasibility: {e}");
                        ExitCode::from(3)
                    }
                    lockern::Error::InvalidParameter(_) | lockern::Error::Unsupported(_) => {
                        eprintln!("configuration error: {e}");
                        ExitCode::from(2)
                    }
                    other => {
                        eprintln!("error: {other}");
                        ExitCode::from(3)
                    }
                };
            }
        }
    }
    if threshold_failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    }
}
