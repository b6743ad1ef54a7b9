// SPDX-License-Identifier: MIT OR Apache-2.0

//! Run manifests: one per output directory, recording what produced it.
//!
//! The manifest ties an artifact directory back to its inputs: the command,
//! the config file (when the command takes one), the parameter-set
//! identifier, the tool version, and a SHA-256 content hash over the raw
//! input bytes. Two directories with equal manifests were produced by
//! byte-identical inputs and the same tool version, so their CSVs must be
//! byte-identical too — that is the determinism contract the integration
//! tests enforce by rerunning commands and diffing.

use crate::errors::CliError;
use crate::table;
use gelsim_core::solver::TerminationReason;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

/// Provenance record for one run directory.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    /// Subcommand name (`curves`, `roots`, `map`, `simulate`, `scaling`,
    /// `trace`).
    pub command: String,
    /// Config file path as given on the command line; absent for commands
    /// configured entirely by flags.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_path: Option<String>,
    /// Parameter-set identifier: the file stem for file-based sets, the
    /// built-in name otherwise.
    pub params_id: String,
    /// Output directory as given on the command line.
    pub out_dir: String,
    /// Version of the binary that produced the artifacts.
    pub tool_version: String,
    /// `sha256:<hex>` over all input bytes (length-prefixed parts, so part
    /// boundaries cannot alias).
    pub content_hash: String,
    /// How the simulation ended; only `simulate` records one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub termination: Option<TerminationReason>,
}

/// Hash of the run inputs. Each part is length-prefixed before hashing so
/// that `("ab", "c")` and `("a", "bc")` cannot collide.
pub fn content_hash(parts: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part);
    }
    format!("sha256:{:x}", hasher.finalize())
}

impl RunManifest {
    /// Writes `manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        table::write_json(&dir.join("manifest.json"), self)
    }
}
