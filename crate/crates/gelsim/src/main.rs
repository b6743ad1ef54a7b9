// SPDX-License-Identifier: MIT OR Apache-2.0

//! `gelsim` — command-line front end for the gel swelling toolkit.
//!
//! Six subcommands cover the analysis surface of the one-dimensional
//! swelling model (a saturated polymer/solvent mixture on a moving domain,
//! solved in mass-Lagrangian coordinates):
//!
//! - `curves`    tabulate the stress function G and its derivative,
//! - `roots`     critical volume fractions and equilibrium roots,
//! - `map`       hyperbolicity/boundary-condition margins over (φ, u),
//! - `simulate`  one first-order finite-volume run from a JSON config,
//! - `scaling`   C¹-doubling lifetimes across perturbation amplitudes,
//! - `trace`     characteristic paths through a recorded run.
//!
//! Contract: exit code 0 on success with artifacts + `manifest.json` in
//! `--out`; nonzero on failure with a one-line machine-readable JSON error
//! on stderr. Identical inputs produce byte-identical artifacts — the tool
//! uses no randomness, no timestamps, and pins float formatting (the
//! `--seedless` flag is accepted for interface stability and is a no-op,
//! since there is no seed to suppress).

mod commands;
mod errors;
mod manifest;
mod table;

use clap::{Parser, Subcommand};
use commands::Ctx;
use errors::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "gelsim",
    version,
    about = "Gel swelling toolkit: constitutive curves, hyperbolicity maps, \
             simulations, lifetime studies, characteristic traces"
)]
struct Cli {
    /// Parameter set: path to a JSON file, or a built-in name
    /// ("polymer", "polysaccharide").
    #[arg(long, global = true, default_value = "polymer")]
    params: String,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Accepted for interface stability; the toolkit uses no randomness,
    /// so this is always in effect.
    #[arg(long, global = true)]
    seedless: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the stress function G and its derivative over a
    /// volume-fraction range.
    Curves {
        /// Lower end of the volume-fraction range.
        #[arg(long, default_value_t = 0.01)]
        phi_min: f64,
        /// Upper end of the volume-fraction range.
        #[arg(long, default_value_t = 0.99)]
        phi_max: f64,
        /// Number of rows (inclusive endpoints).
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// Report critical volume fractions (sign changes of G') and
    /// admissible equilibrium roots.
    Roots {
        /// Lower end of the scanned volume-fraction range.
        #[arg(long, default_value_t = 0.01)]
        phi_min: f64,
        /// Upper end of the scanned volume-fraction range.
        #[arg(long, default_value_t = 0.99)]
        phi_max: f64,
        /// Scan resolution used to bracket sign changes.
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// Grid of hyperbolicity and boundary-condition margins over (phi, u).
    Map {
        /// Lower end of the volume-fraction range.
        #[arg(long, default_value_t = 0.05)]
        phi_min: f64,
        /// Upper end of the volume-fraction range.
        #[arg(long, default_value_t = 0.98)]
        phi_max: f64,
        /// Volume-fraction samples.
        #[arg(long, default_value_t = 64)]
        n_phi: usize,
        /// Lower end of the velocity range.
        #[arg(long, default_value_t = -0.5)]
        u_min: f64,
        /// Upper end of the velocity range.
        #[arg(long, default_value_t = 0.5)]
        u_max: f64,
        /// Velocity samples.
        #[arg(long, default_value_t = 41)]
        n_u: usize,
    },
    /// Run one initial-boundary-value simulation from a JSON config.
    Simulate {
        /// Simulation config (JSON).
        #[arg(long)]
        config: PathBuf,
    },
    /// Lifetime study: C1-doubling exit times across a list of amplitudes.
    Scaling {
        /// Study config (JSON): amplitude list plus a simulation template.
        #[arg(long)]
        config: PathBuf,
    },
    /// Trace characteristic paths through a recorded run.
    Trace {
        /// Trace config (JSON): a simulation plus anchor points.
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Ctx::new(&cli.params, &cli.out)?;
    match cli.command {
        Command::Curves {
            phi_min,
            phi_max,
            n,
        } => commands::curves(&ctx, phi_min, phi_max, n),
        Command::Roots {
            phi_min,
            phi_max,
            n,
        } => commands::roots(&ctx, phi_min, phi_max, n),
        Command::Map {
            phi_min,
            phi_max,
            n_phi,
            u_min,
            u_max,
            n_u,
        } => commands::map(&ctx, phi_min, phi_max, n_phi, u_min, u_max, n_u),
        Command::Simulate { config } => commands::simulate(&ctx, &config),
        Command::Scaling { config } => commands::scaling(&ctx, &config),
        Command::Trace { config } => commands::trace(&ctx, &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            // Bad invocation: keep the contract of machine-readable errors
            // on stderr even before a command is chosen.
            let rendered = e.render().to_string();
            let msg = serde_json::json!({
                "error": { "kind": "usage", "message": rendered }
            });
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
        Err(e) => {
            // --help / --version go to stdout with exit code 0.
            print!("{}", e.render());
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = serde_json::json!({
                "error": { "kind": e.kind(), "message": e.to_string() }
            });
            eprintln!("{msg}");
            ExitCode::FAILURE
        }
    }
}
