// SPDX-License-Identifier: MIT OR Apache-2.0

//! Failure taxonomy of the command-line front end.
//!
//! Every failure path funnels into [`CliError`], which the binary renders as
//! a single machine-readable JSON object on stderr:
//!
//! ```text
//! {"error":{"kind":"<stable identifier>","message":"<human diagnostic>"}}
//! ```
//!
//! The `kind` strings are a stable interface for scripting around the tool;
//! the `message` text is for humans and may change. JSON parse failures keep
//! serde's line/column diagnostics in the message so a malformed config can
//! be located without re-running under a debugger.

use gelsim_core::characteristics::{CharacteristicsError, TraceError};
use gelsim_core::constitutive::ConstitutiveError;
use gelsim_core::free_boundary::FreeBoundaryError;
use gelsim_core::hyperbolicity::HyperbolicityError;
use gelsim_core::solver::SolverError;
use thiserror::Error;

/// Any failure the binary can exit with.
#[derive(Debug, Error)]
pub enum CliError {
    /// Reading an input file failed (missing, unreadable, …).
    #[error("cannot read {path}: {source}")]
    ReadInput {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Creating or writing an output artifact failed.
    #[error("cannot write {path}: {source}")]
    WriteOutput {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A parameter file did not parse as a parameter set.
    #[error("parameter file {path} is invalid: {source}")]
    ParamsParse {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    /// A command config file did not parse as the expected shape.
    #[error("config file {path} is invalid: {source}")]
    ConfigParse {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    /// `--params` named neither an existing file nor a built-in set.
    #[error(
        "unknown parameter set {name:?}: expected a JSON file path or one of \
         the built-ins \"polymer\", \"polysaccharide\""
    )]
    UnknownParams { name: String },

    /// A scan or tabulation range was empty, reversed, or out of domain.
    #[error("invalid range: {what}")]
    Range { what: String },

    #[error(transparent)]
    Constitutive(#[from] ConstitutiveError),

    #[error(transparent)]
    Hyperbolicity(#[from] HyperbolicityError),

    #[error(transparent)]
    Solver(#[from] SolverError),

    #[error(transparent)]
    Characteristics(#[from] CharacteristicsError),

    #[error(transparent)]
    Trace(#[from] TraceError),

    #[error(transparent)]
    FreeBoundary(#[from] FreeBoundaryError),
}

impl CliError {
    /// Stable identifier for scripting; the human message may change, these
    /// may not.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::ReadInput { .. } => "read-input",
            CliError::WriteOutput { .. } => "write-output",
            CliError::ParamsParse { .. } => "params-parse",
            CliError::ConfigParse { .. } => "config-parse",
            CliError::UnknownParams { .. } => "unknown-params",
            CliError::Range { .. } => "range",
            CliError::Constitutive(_) => "constitutive",
            CliError::Hyperbolicity(_) => "hyperbolicity",
            CliError::Solver(_) => "solver",
            CliError::Characteristics(_) => "characteristics",
            CliError::Trace(_) => "trace",
            CliError::FreeBoundary(_) => "free-boundary",
        }
    }
}
