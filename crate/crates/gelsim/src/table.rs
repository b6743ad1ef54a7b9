// SPDX-License-Identifier: MIT OR Apache-2.0

//! Bit-stable CSV and JSON emission.
//!
//! Reruns on identical inputs must produce byte-identical artifacts, so all
//! formatting choices are pinned down here:
//!
//! - floats print with Rust's shortest round-trip `Display` (never more than
//!   17 significant digits, and the decimal string parses back to the exact
//!   same bit pattern), so goldens survive platform changes;
//! - line endings are `\n` regardless of platform;
//! - JSON is pretty-printed with a fixed field order (struct order) and a
//!   trailing newline.

use crate::errors::CliError;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Writes a CSV file: one header line, then the prepared rows.
pub fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<(), CliError> {
    let as_str = path.display().to_string();
    let wrap = |source: std::io::Error| CliError::WriteOutput {
        path: as_str.clone(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(wrap)?);
    writeln!(out, "{header}").map_err(wrap)?;
    for row in rows {
        writeln!(out, "{row}").map_err(wrap)?;
    }
    out.flush().map_err(wrap)
}

/// Writes a pretty-printed JSON document with a trailing newline.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let as_str = path.display().to_string();
    let wrap = |source: std::io::Error| CliError::WriteOutput {
        path: as_str.clone(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(wrap)?);
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::WriteOutput {
        path: as_str.clone(),
        source: std::io::Error::other(e),
    })?;
    writeln!(out).map_err(wrap)?;
    out.flush().map_err(wrap)
}

/// Formats an optional float, empty for `None` (CSV convention for fields
/// that are undefined at a grid point, e.g. the Lopatinskii ratio outside
/// the hyperbolic region).
pub fn opt_f64(v: Option<f64>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => String::new(),
    }
}
