// SPDX-License-Identifier: MIT OR Apache-2.0

//! Implementations of the six subcommands.
//!
//! Every command follows the same shape: load inputs, delegate the actual
//! mathematics to `gelsim-core`, then emit CSV/JSON artifacts plus a
//! [`RunManifest`](crate::manifest::RunManifest) into the output directory.
//! Nothing numerical happens here — the front end owns only argument
//! validation, file layout, and bit-stable formatting.
//!
//! Artifact layout per command:
//!
//! | command    | artifacts                                              |
//! |------------|--------------------------------------------------------|
//! | `curves`   | `curves.csv` (`phi,G,dG`)                               |
//! | `roots`    | `roots.json` (`phi_critical`, `phi_star` arrays)        |
//! | `map`      | `map.csv` (`phi,u,hyp_margin,nc_margin,ukl_gamma`)      |
//! | `simulate` | `snapshots.csv`, `diagnostics.csv`, `interfaces.csv`    |
//! | `scaling`  | `lifetime.csv` (`eps,T_exit,reason`), `fit.json`        |
//! | `trace`    | `trace_<k>.csv` (`tau,xi,family`), one per anchor       |
//!
//! plus `manifest.json` in every case.

use crate::errors::CliError;
use crate::manifest::{self, RunManifest};
use crate::table;
use gelsim_core::characteristics::{self, SpeedField};
use gelsim_core::constitutive;
use gelsim_core::hyperbolicity;
use gelsim_core::params::ParameterSet;
use gelsim_core::solver::{self, SimConfig};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

/// Everything the global flags determine: the parameter set (with its
/// identity and raw bytes for hashing) and the output directory.
pub struct Ctx {
    pub params: ParameterSet,
    pub params_id: String,
    pub params_bytes: Vec<u8>,
    pub out: PathBuf,
    pub out_as_given: String,
}

impl Ctx {
    /// Resolves `--params` and `--out`. A value naming an existing file is
    /// read as a parameter JSON; otherwise it must be a built-in name. The
    /// hash bytes for a built-in are its canonical JSON serialization, so
    /// the manifest hash is well-defined either way.
    pub fn new(params_arg: &str, out: &Path) -> Result<Self, CliError> {
        let path = Path::new(params_arg);
        let (params, params_id, params_bytes) = if path.is_file() {
            let bytes = fs::read(path).map_err(|source| CliError::ReadInput {
                path: params_arg.to_string(),
                source,
            })?;
            let params: ParameterSet =
                serde_json::from_slice(&bytes).map_err(|source| CliError::ParamsParse {
                    path: params_arg.to_string(),
                    source,
                })?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| params_arg.to_string());
            (params, id, bytes)
        } else {
            let params = match params_arg {
                "polymer" => ParameterSet::polymer(),
                "polysaccharide" => ParameterSet::polysaccharide(),
                other => {
                    return Err(CliError::UnknownParams {
                        name: other.to_string(),
                    });
                }
            };
            let bytes = serde_json::to_vec(&params).expect("parameter sets serialize");
            (params, params_arg.to_string(), bytes)
        };
        fs::create_dir_all(out).map_err(|source| CliError::WriteOutput {
            path: out.display().to_string(),
            source,
        })?;
        Ok(Ctx {
            params,
            params_id,
            params_bytes,
            out: out.to_path_buf(),
            out_as_given: out.display().to_string(),
        })
    }

    fn manifest(&self, command: &str, config: Option<(&str, &[u8])>) -> RunManifest {
        let mut parts: Vec<&[u8]> = vec![&self.params_bytes];
        if let Some((_, bytes)) = config {
            parts.push(bytes);
        }
        RunManifest {
            command: command.to_string(),
            config_path: config.map(|(p, _)| p.to_string()),
            params_id: self.params_id.clone(),
            out_dir: self.out_as_given.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            content_hash: manifest::content_hash(&parts),
            termination: None,
        }
    }

    fn read_config(&self, path: &Path) -> Result<Vec<u8>, CliError> {
        fs::read(path).map_err(|source| CliError::ReadInput {
            path: path.display().to_string(),
            source,
        })
    }
}

fn grid(lo: f64, hi: f64, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::Range {
            what: format!("{what} must satisfy min < max with finite bounds, got [{lo}, {hi}]"),
        });
    }
    if n < 2 {
        return Err(CliError::Range {
            what: format!("{what} needs at least 2 samples, got {n}"),
        });
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect())
}

/// `curves`: tabulates the stress function G and its derivative G′ over a
/// volume-fraction range.
pub fn curves(ctx: &Ctx, phi_min: f64, phi_max: f64, n: usize) -> Result<(), CliError> {
    let phis = grid(phi_min, phi_max, n, "volume-fraction range")?;
    let mut rows = Vec::with_capacity(n);
    for phi in phis {
        let g = constitutive::g(&ctx.params, phi)?;
        let dg = constitutive::dg(&ctx.params, phi)?;
        rows.push(format!("{phi},{g},{dg}"));
    }
    table::write_csv(&ctx.out.join("curves.csv"), "phi,G,dG", &rows)?;
    ctx.manifest("curves", None).write(&ctx.out)
}

#[derive(Debug, Serialize)]
struct RootsReport {
    /// Volume fractions where G′ changes sign (loss of hyperbolicity at
    /// rest).
    phi_critical: Vec<f64>,
    /// Admissible equilibrium volume fractions (zeros of the saturation
    /// residual with G′ < 0 there).
    phi_star: Vec<f64>,
}

/// `roots`: reports sign changes of G′ and admissible equilibrium roots.
pub fn roots(ctx: &Ctx, phi_min: f64, phi_max: f64, n: usize) -> Result<(), CliError> {
    if !(phi_min.is_finite() && phi_max.is_finite() && phi_min < phi_max) {
        return Err(CliError::Range {
            what: format!(
                "volume-fraction range must satisfy min < max, got [{phi_min}, {phi_max}]"
            ),
        });
    }
    let phi_critical = hyperbolicity::find_phi_critical(&ctx.params, phi_min, phi_max, n)?;
    // A parameter set can lack an equilibrium in range (the saturation
    // residual never changes sign). For a report command that is a finding,
    // not a failure: emit an empty array.
    let phi_star = match hyperbolicity::solve_phi_star(&ctx.params, phi_min, phi_max, n) {
        Ok(roots) => roots
            .into_iter()
            .filter(|r| r.admissible)
            .map(|r| r.phi_star)
            .collect(),
        Err(hyperbolicity::HyperbolicityError::NoRoot { .. }) => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    table::write_json(
        &ctx.out.join("roots.json"),
        &RootsReport {
            phi_critical,
            phi_star,
        },
    )?;
    ctx.manifest("roots", None).write(&ctx.out)
}

/// `map`: grid of hyperbolicity margin, non-characteristic margin, and
/// Lopatinskii ratio over a (φ, u) rectangle.
#[allow(clippy::too_many_arguments)]
pub fn map(
    ctx: &Ctx,
    phi_min: f64,
    phi_max: f64,
    n_phi: usize,
    u_min: f64,
    u_max: f64,
    n_u: usize,
) -> Result<(), CliError> {
    grid(phi_min, phi_max, n_phi, "volume-fraction range")?;
    grid(u_min, u_max, n_u, "velocity range")?;
    let rows =
        hyperbolicity::scan_region(&ctx.params, (phi_min, phi_max), (u_min, u_max), n_phi, n_u)?;
    let lines: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{}",
                r.phi,
                r.u,
                r.hyp_margin,
                r.nc_margin,
                table::opt_f64(r.ukl_gamma)
            )
        })
        .collect();
    table::write_csv(
        &ctx.out.join("map.csv"),
        "phi,u,hyp_margin,nc_margin,ukl_gamma",
        &lines,
    )?;
    ctx.manifest("map", None).write(&ctx.out)
}

/// `simulate`: one initial-boundary-value run from a JSON config; emits
/// snapshots, per-step diagnostics, the interface track, and a manifest
/// recording how the run terminated.
pub fn simulate(ctx: &Ctx, config_path: &Path) -> Result<(), CliError> {
    let bytes = ctx.read_config(config_path)?;
    let config: SimConfig =
        serde_json::from_slice(&bytes).map_err(|source| CliError::ConfigParse {
            path: config_path.display().to_string(),
            source,
        })?;
    let record = solver::run(&ctx.params, &config)?;

    let mut snap_rows = Vec::new();
    for snap in &record.snapshots {
        for j in 0..snap.n {
            snap_rows.push(format!(
                "{},{},{},{}",
                snap.t, snap.y[j], snap.psi[j], snap.u[j]
            ));
        }
    }
    table::write_csv(&ctx.out.join("snapshots.csv"), "t,y,psi,u", &snap_rows)?;

    let diag_rows: Vec<String> = record
        .diagnostics
        .iter()
        .map(|d| {
            format!(
                "{},{},{},{},{},{},{}",
                d.t, d.mass, d.energy, d.sup_eta, d.sup_u, d.sup_eta_x, d.sup_u_x
            )
        })
        .collect();
    table::write_csv(
        &ctx.out.join("diagnostics.csv"),
        "t,mass,energy,sup_eta,sup_u,sup_eta_x,sup_u_x",
        &diag_rows,
    )?;

    let track = &record.interfaces;
    let iface_rows: Vec<String> = (0..track.len())
        .map(|k| {
            format!(
                "{},{},{},{}",
                track.times[k], track.s1[k], track.s2[k], track.domain_length_defect[k]
            )
        })
        .collect();
    table::write_csv(
        &ctx.out.join("interfaces.csv"),
        "t,S1,S2,domain_length_check",
        &iface_rows,
    )?;

    let mut m = ctx.manifest(
        "simulate",
        Some((&config_path.display().to_string(), &bytes)),
    );
    m.termination = Some(record.termination);
    m.write(&ctx.out)
}

/// Config for `scaling`: the amplitude list and the simulation template the
/// study clones per amplitude (its profile and C¹ ceiling are overridden by
/// the study itself).
#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ScalingConfig {
    eps_list: Vec<f64>,
    template: SimConfig,
}

/// `scaling`: C¹-doubling lifetime per amplitude, with the least-squares
/// fit of exit time against |log ε|.
pub fn scaling(ctx: &Ctx, config_path: &Path) -> Result<(), CliError> {
    let bytes = ctx.read_config(config_path)?;
    let config: ScalingConfig =
        serde_json::from_slice(&bytes).map_err(|source| CliError::ConfigParse {
            path: config_path.display().to_string(),
            source,
        })?;
    let study = characteristics::lifetime_study(&ctx.params, &config.template, &config.eps_list)?;

    let rows: Vec<String> = study
        .rows
        .iter()
        .map(|r| format!("{},{},{}", r.eps, r.t_exit, r.reason))
        .collect();
    table::write_csv(&ctx.out.join("lifetime.csv"), "eps,T_exit,reason", &rows)?;

    // `fit.json` always exists; it holds `null` when the study has fewer
    // than two rows or a degenerate spread, so consumers can distinguish
    // "no fit possible" from "forgot to run the fit".
    let fit = study.fit.map(|f| {
        serde_json::json!({
            "slope": f.slope,
            "intercept": f.intercept,
            "correlation": f.correlation,
        })
    });
    table::write_json(&ctx.out.join("fit.json"), &fit)?;

    ctx.manifest(
        "scaling",
        Some((&config_path.display().to_string(), &bytes)),
    )
    .write(&ctx.out)
}

/// One requested characteristic anchor.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnchorSpec {
    family: u8,
    t: f64,
    y: f64,
}

/// Config for `trace`: the run to record and the anchors to trace back
/// through it.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceConfig {
    sim: SimConfig,
    anchors: Vec<AnchorSpec>,
}

/// `trace`: records a run, then traces each anchored characteristic
/// backward to t = 0 (switching family at each wall reflection) and emits
/// one path CSV per anchor.
pub fn trace(ctx: &Ctx, config_path: &Path) -> Result<(), CliError> {
    let bytes = ctx.read_config(config_path)?;
    let config: TraceConfig =
        serde_json::from_slice(&bytes).map_err(|source| CliError::ConfigParse {
            path: config_path.display().to_string(),
            source,
        })?;
    let record = solver::run(&ctx.params, &config.sim)?;
    let field = SpeedField::new(&ctx.params, &record)?;
    for (k, anchor) in config.anchors.iter().enumerate() {
        let traced =
            characteristics::trace_characteristic(&field, anchor.family, anchor.t, anchor.y)?;
        let rows: Vec<String> = traced
            .path
            .iter()
            .map(|p| format!("{},{},{}", p.tau, p.xi, p.family))
            .collect();
        table::write_csv(
            &ctx.out.join(format!("trace_{k}.csv")),
            "tau,xi,family",
            &rows,
        )?;
    }
    ctx.manifest("trace", Some((&config_path.display().to_string(), &bytes)))
        .write(&ctx.out)
}
