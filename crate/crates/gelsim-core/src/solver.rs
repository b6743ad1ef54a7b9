// SPDX-License-Identifier: MIT OR Apache-2.0

//! Finite-volume solver for the mass-Lagrangian swelling system.
//!
//! The conservative system on the fixed domain y ∈ (0, 1) is
//!
//! ```text
//!     ψ_t + f₁(ψ, u)_y = 0,        f₁ = −(1 − 1/ψ) u,
//!     u_t + f₂(ψ, u)_y = s₂,       f₂ = −u²/(2ψ²) − F(ψ),
//!                                  s₂ = −β u ψ²/(ψ − 1),
//! ```
//!
//! with Dirichlet data ψ = ψ* at both walls (the gel meets pure solvent at
//! the swelling equilibrium) and u unconstrained there (the boundary matrix
//! has rank one).
//!
//! # Discretization
//!
//! - Uniform cells of width Δy = 1/n, states at cell centers.
//! - First-order Godunov-type fluxes: HLL (default) with wave-speed bounds
//!   from the exact eigenvalues of both neighbor states, or local
//!   Lax–Friedrichs.
//! - Dirichlet walls via ghost cells: ψ_ghost = 2ψ* − ψ_interior (so the
//!   face average is ψ* to first order) and u_ghost = u_interior.
//!   At equilibrium ψ_ghost = 2ψ* − ψ* = ψ* **exactly** in f64 (Sterbenz:
//!   the subtraction 2ψ* − ψ* is representable), every face sees identical
//!   states, all face fluxes are bitwise equal and telescope to zero, and
//!   the source vanishes with u = 0 — the scheme preserves the equilibrium
//!   bitwise, not just to truncation order.
//! - Unsplit explicit source update; each step enforces the stiffness guard
//!   β ψ*²/(ψ*−1) · dt < [`tolerances::DRAG_STIFFNESS_LIMIT`].
//! - CFL time step dt = cfl · Δy / max|λ| over all cells and ghosts.
//!
//! # Termination
//!
//! A run ends in one of the structured [`TerminationReason`]s: reaching
//! tEnd, loss of cellwise hyperbolicity (the physical breakdown this model
//! is built to detect), the sup-C¹ diagnostic exceeding its ceiling
//! (default 10³ × the initial C¹ norm; configurable absolutely), a
//! non-finite state, or the state escaping the constitutive domain.
//! These are recorded outcomes, not errors; `run` fails only on setup
//! problems (bad config, incompatible initial data, no equilibrium).

use crate::constitutive::{self, ConstitutiveError, FluxTable};
use crate::free_boundary::InterfaceTrack;
use crate::hyperbolicity::{self, HyperbolicityError};
use crate::interp::{InterpError, Pchip};
use crate::params::ParameterSet;
use crate::tolerances;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Numerical flux choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Harten–Lax–van-Leer two-wave flux with exact eigenvalue bounds.
    #[serde(rename = "HLL")]
    Hll,
    /// Local Lax–Friedrichs (Rusanov) flux.
    #[serde(rename = "LLF", alias = "local-Lax-Friedrichs")]
    LocalLaxFriedrichs,
}

/// Initial data: either the built-in smooth cosine bump or tabulated
/// profiles resampled onto the grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Profile {
    /// ψ⁰ = ψ* + ε_η (1 − cos 2πy)/2, u⁰ = ε_u (1 − cos 2πy)/2 — satisfies
    /// both compatibility conditions identically.
    #[serde(rename_all = "camelCase")]
    Cosine { eps_eta: f64, eps_u: f64 },
    /// Point values on a strictly increasing grid spanning [0, 1];
    /// checked for boundary compatibility, then resampled to cell centers
    /// by monotone cubic interpolation.
    Tabulated {
        y: Vec<f64>,
        psi: Vec<f64>,
        u: Vec<f64>,
    },
}

/// Simulation configuration (JSON field names as written).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SimConfig {
    /// Number of cells (≥ 16).
    pub n: usize,
    /// CFL number in (0, 1).
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Final time.
    pub t_end: f64,
    /// Snapshot cadence: record the state every this many steps (≥ 1);
    /// the initial and final states are always recorded.
    pub output_every: usize,
    /// Numerical flux (default HLL).
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    /// Initial data.
    pub profile: Profile,
    /// Equilibrium override. When absent, the admissible root of the
    /// saturation condition is solved for on (0.01, 0.99).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_star: Option<f64>,
    /// Absolute ceiling for the sup-C¹ diagnostic; when absent the ceiling
    /// is 10³ × the initial C¹ norm (no ceiling for equilibrium data whose
    /// initial norm is zero).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1_ceiling: Option<f64>,
}

fn default_cfl() -> f64 {
    tolerances::DEFAULT_CFL
}

fn default_scheme() -> Scheme {
    Scheme::Hll
}

impl SimConfig {
    /// Validates the numerical-parameter ranges.
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.n < 16 {
            return Err(SolverError::Config(format!(
                "n = {} (need n >= 16)",
                self.n
            )));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(SolverError::Config(format!(
                "cfl = {} (need 0 < cfl < 1)",
                self.cfl
            )));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(SolverError::Config(format!(
                "tEnd = {} (need finite tEnd > 0)",
                self.t_end
            )));
        }
        if self.output_every == 0 {
            return Err(SolverError::Config("outputEvery = 0 (need >= 1)".into()));
        }
        if let Some(c) = self.c1_ceiling {
            if !(c > 0.0) {
                return Err(SolverError::Config(format!("c1Ceiling = {c} (need > 0)")));
            }
        }
        Ok(())
    }
}

/// Discrete state: ψ and u at the n cell centers y_i = (i + ½)/n.
#[derive(Debug, Clone)]
pub struct StateField {
    pub n: usize,
    pub y: Vec<f64>,
    pub psi: Vec<f64>,
    pub u: Vec<f64>,
    pub t: f64,
}

/// Per-step scalar diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct StepDiagnostics {
    pub t: f64,
    /// Total polymer mass Σ φᵢ ψᵢ Δy (≡ 1 up to rounding).
    pub mass: f64,
    /// Total energy (kinetic + shifted elastic + mixing), physical-domain
    /// midpoint quadrature.
    pub energy: f64,
    /// max |ψᵢ − ψ*|.
    pub sup_eta: f64,
    /// max |uᵢ|.
    pub sup_u: f64,
    /// max |∂_y ψ| (central differences; one-sided at the walls).
    pub sup_eta_x: f64,
    /// max |∂_y u|.
    pub sup_u_x: f64,
}

impl StepDiagnostics {
    /// The operational C¹ norm: max of the four sup norms.
    pub fn c1_norm(&self) -> f64 {
        self.sup_eta
            .max(self.sup_u)
            .max(self.sup_eta_x)
            .max(self.sup_u_x)
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
#[serde(tag = "reason", rename_all = "camelCase")]
pub enum TerminationReason {
    /// Integrated to tEnd.
    #[serde(rename = "reachedTEnd")]
    ReachedTEnd,
    /// A cell (ghosts: −1 left, n right) lost u² + G′ < 0.
    HyperbolicityLost { t: f64, cell: i64, margin: f64 },
    /// The sup-C¹ diagnostic crossed its ceiling; `t` is the sub-step
    /// crossing time (linear interpolation between diagnostic samples).
    C1CeilingExceeded { t: f64, value: f64, ceiling: f64 },
    /// NaN or ±∞ appeared in the state.
    NonFinite { t: f64, cell: i64 },
    /// The state left the constitutive clamp domain while still hyperbolic.
    DomainEscaped { t: f64, cell: i64 },
}

/// Complete output of a run.
#[derive(Debug, Clone)]
pub struct SimulationRecord {
    /// Equilibrium used for boundary data and the flux potential.
    pub psi_star: f64,
    /// Grid spacing Δy = 1/n.
    pub dy: f64,
    /// States at the recorded times (strictly increasing; first = initial,
    /// last = final).
    pub snapshots: Vec<StateField>,
    /// One entry per accepted step, plus the initial state.
    pub diagnostics: Vec<StepDiagnostics>,
    /// Free-interface positions integrated alongside the bulk solve.
    pub interfaces: InterfaceTrack,
    pub termination: TerminationReason,
    /// Sub-step-resolved time at which the C¹ ceiling was crossed (set only
    /// for [`TerminationReason::C1CeilingExceeded`]).
    pub c1_exit_time: Option<f64>,
}

/// Solver failure (setup problems; in-run breakdowns become
/// [`TerminationReason`]s instead).
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("configuration invalid: {0}")]
    Config(String),
    /// Tabulated initial data violates a compatibility condition; the
    /// condition is named so the offending line of data is identifiable.
    #[error(
        "initial data incompatible: {condition} at the {boundary} boundary \
         (residual {residual:.3e}, tolerance {tolerance:.3e})"
    )]
    IncompatibleData {
        condition: &'static str,
        boundary: &'static str,
        residual: f64,
        tolerance: f64,
    },
    #[error(
        "state not hyperbolic at cell {cell}, t = {t}: margin = {margin:.6e} (psi = {psi}, u = {u})"
    )]
    NotHyperbolic {
        t: f64,
        cell: i64,
        margin: f64,
        psi: f64,
        u: f64,
    },
    #[error("non-finite state at cell {cell}, t = {t}")]
    NonFinite { t: f64, cell: i64 },
    #[error("state left the constitutive domain at cell {cell}, t = {t}: {source}")]
    DomainEscape {
        t: f64,
        cell: i64,
        source: ConstitutiveError,
    },
    #[error(
        "drag source too stiff for the explicit update: beta psi*^2/(psi*-1) dt \
         = {value:.3e} exceeds {limit}"
    )]
    DragStiffness { value: f64, limit: f64 },
    #[error(transparent)]
    Hyperbolicity(#[from] HyperbolicityError),
    #[error(transparent)]
    Constitutive(#[from] ConstitutiveError),
    #[error(transparent)]
    Interp(#[from] InterpError),
}

/// Parameters + equilibrium + memoized flux potential: everything a step
/// needs.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: ParameterSet,
    pub psi_star: f64,
    flux_table: FluxTable,
}

impl Model {
    /// Builds the model for a given equilibrium ψ*.
    pub fn new(params: &ParameterSet, psi_star: f64) -> Result<Self, SolverError> {
        if !(psi_star > 1.0) {
            return Err(SolverError::Config(format!(
                "psi_star = {psi_star} (need > 1)"
            )));
        }
        let flux_table = FluxTable::new(params, psi_star)?;
        Ok(Model {
            params: params.clone(),
            psi_star,
            flux_table,
        })
    }

    /// Builds the model by solving the saturation condition on (0.01, 0.99)
    /// and taking the first admissible equilibrium.
    pub fn from_params(params: &ParameterSet) -> Result<Self, SolverError> {
        let roots = hyperbolicity::solve_phi_star(params, 0.01, 0.99, 1000)?;
        let root = roots.iter().find(|r| r.admissible).ok_or_else(|| {
            SolverError::Config(
                "saturation condition has roots but none admissible (G' >= 0 at all of them)"
                    .into(),
            )
        })?;
        Model::new(params, root.psi_star)
    }

    /// Physical flux (f₁, f₂) = (−(1−1/ψ)u, −u²/(2ψ²) − F(ψ)).
    pub fn flux(&self, psi: f64, u: f64) -> Result<[f64; 2], ConstitutiveError> {
        let f_pot = self.flux_table.eval(psi)?;
        Ok([-(1.0 - 1.0 / psi) * u, -u * u / (2.0 * psi * psi) - f_pot])
    }

    /// Drag source (0, −β u ψ²/(ψ−1)).
    pub fn source(&self, psi: f64, u: f64) -> [f64; 2] {
        [0.0, -self.params.beta_drag * u * psi * psi / (psi - 1.0)]
    }

    /// Memoized flux potential F(ψ).
    pub fn flux_potential(&self, psi: f64) -> Result<f64, ConstitutiveError> {
        self.flux_table.eval(psi)
    }
}

/// Builds the initial state for a configuration.
pub fn init(model: &Model, config: &SimConfig) -> Result<StateField, SolverError> {
    config.validate()?;
    let n = config.n;
    let dy = 1.0 / n as f64;
    let y: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * dy).collect();
    let psi_star = model.psi_star;
    let (psi, u) = match &config.profile {
        Profile::Cosine { eps_eta, eps_u } => {
            let bump = |yi: f64| (1.0 - (2.0 * std::f64::consts::PI * yi).cos()) * 0.5;
            let psi: Vec<f64> = y.iter().map(|&yi| psi_star + eps_eta * bump(yi)).collect();
            let u: Vec<f64> = y.iter().map(|&yi| eps_u * bump(yi)).collect();
            (psi, u)
        }
        Profile::Tabulated {
            y: yt,
            psi: pt,
            u: ut,
        } => resample_tabulated(model, yt, pt, ut, &y)?,
    };
    let state = StateField {
        n,
        y,
        psi,
        u,
        t: 0.0,
    };
    validate_state(model, &state)?;
    Ok(state)
}

/// Compatibility checks + monotone-cubic resampling of tabulated profiles.
fn resample_tabulated(
    model: &Model,
    yt: &[f64],
    pt: &[f64],
    ut: &[f64],
    centers: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), SolverError> {
    if yt.len() != pt.len() || yt.len() != ut.len() {
        return Err(SolverError::Config(format!(
            "tabulated profile arrays differ in length: y {}, psi {}, u {}",
            yt.len(),
            pt.len(),
            ut.len()
        )));
    }
    if yt.len() < 4 {
        return Err(SolverError::Config(format!(
            "tabulated profile needs >= 4 points, got {}",
            yt.len()
        )));
    }
    let m = yt.len();
    if yt[0].abs() > 1e-12 || (yt[m - 1] - 1.0).abs() > 1e-12 {
        return Err(SolverError::Config(format!(
            "tabulated grid must span [0, 1], got [{}, {}]",
            yt[0],
            yt[m - 1]
        )));
    }
    let psi_star = model.psi_star;
    // Zeroth-order compatibility: the perturbation vanishes at the walls
    // (the Dirichlet data ψ* is attained continuously).
    for (idx, boundary) in [(0usize, "left"), (m - 1, "right")] {
        let residual = (pt[idx] - psi_star).abs();
        if residual > tolerances::PROFILE_BOUNDARY_ABS {
            return Err(SolverError::IncompatibleData {
                condition: "boundary value psi = psi*",
                boundary,
                residual,
                tolerance: tolerances::PROFILE_BOUNDARY_ABS,
            });
        }
    }
    // First-order compatibility: ∂_t ψ = 0 at the walls at t = 0, i.e.
    // −u ψ_y/ψ*² + ((1−ψ*)/ψ*) u_y = 0 with one-sided differences.
    let one_sided = |q: &[f64], left: bool| -> f64 {
        if left {
            (q[1] - q[0]) / (yt[1] - yt[0])
        } else {
            (q[m - 1] - q[m - 2]) / (yt[m - 1] - yt[m - 2])
        }
    };
    for (left, boundary, uval) in [(true, "left", ut[0]), (false, "right", ut[m - 1])] {
        let eta_x = one_sided(pt, left);
        let u_x = one_sided(ut, left);
        let residual =
            (-uval * eta_x / (psi_star * psi_star) + (1.0 - psi_star) / psi_star * u_x).abs();
        if residual > tolerances::COMPATIBILITY_RESIDUAL_ABS {
            return Err(SolverError::IncompatibleData {
                condition: "first-order compatibility (-u psi_y/psi*^2 + ((1-psi*)/psi*) u_y = 0)",
                boundary,
                residual,
                tolerance: tolerances::COMPATIBILITY_RESIDUAL_ABS,
            });
        }
    }
    let psi_interp = Pchip::new(yt, pt)?;
    let u_interp = Pchip::new(yt, ut)?;
    Ok((
        centers.iter().map(|&yc| psi_interp.eval(yc)).collect(),
        centers.iter().map(|&yc| u_interp.eval(yc)).collect(),
    ))
}

/// Validates finiteness, the ψ > 1 floor, and cellwise hyperbolicity.
pub fn validate_state(model: &Model, state: &StateField) -> Result<(), SolverError> {
    let p = &model.params;
    for i in 0..state.n {
        let (psi, u) = (state.psi[i], state.u[i]);
        if !psi.is_finite() || !u.is_finite() {
            return Err(SolverError::NonFinite {
                t: state.t,
                cell: i as i64,
            });
        }
        if psi <= 1.0 + tolerances::STATE_PSI_MIN_EXCESS {
            return Err(SolverError::NotHyperbolic {
                t: state.t,
                cell: i as i64,
                margin: f64::NEG_INFINITY,
                psi,
                u,
            });
        }
        let dg = constitutive::dg(p, 1.0 / psi).map_err(|e| SolverError::DomainEscape {
            t: state.t,
            cell: i as i64,
            source: e,
        })?;
        let margin = -(u * u + dg);
        if !(margin > 0.0) {
            return Err(SolverError::NotHyperbolic {
                t: state.t,
                cell: i as i64,
                margin,
                psi,
                u,
            });
        }
    }
    Ok(())
}

/// One accepted step: the advanced state, the dt actually taken, and the
/// numerical fluxes through the two wall faces (for conservation audits).
#[derive(Debug, Clone)]
pub struct StepResult {
    pub state: StateField,
    pub dt: f64,
    /// Numerical flux through the left wall face (y = 0).
    pub flux_left: [f64; 2],
    /// Numerical flux through the right wall face (y = 1).
    pub flux_right: [f64; 2],
}

/// CFL time step for the current state: cfl · Δy / max|λ| over cells and
/// ghosts.
pub fn cfl_dt(model: &Model, state: &StateField, cfl: f64) -> Result<f64, SolverError> {
    let speeds = wave_speeds(model, state)?;
    let max_abs = speeds
        .iter()
        .map(|&(l1, l2)| l1.abs().max(l2.abs()))
        .fold(0.0_f64, f64::max);
    let dy = 1.0 / state.n as f64;
    Ok(cfl * dy / max_abs)
}

/// Eigenvalues (λ₁, λ₂) for ghost, cells…, ghost (length n + 2).
fn wave_speeds(model: &Model, state: &StateField) -> Result<Vec<(f64, f64)>, SolverError> {
    let p = &model.params;
    let n = state.n;
    let mut speeds = Vec::with_capacity(n + 2);
    for k in 0..n + 2 {
        let (psi, u, cell) = ghost_extended(model, state, k);
        let e = hyperbolicity::eigensystem(p, psi, u).map_err(|e| match e {
            HyperbolicityError::NotHyperbolic { psi, u, margin } => SolverError::NotHyperbolic {
                t: state.t,
                cell,
                margin,
                psi,
                u,
            },
            HyperbolicityError::Constitutive(c) => SolverError::DomainEscape {
                t: state.t,
                cell,
                source: c,
            },
            other => SolverError::Hyperbolicity(other),
        })?;
        speeds.push((e.lambda1, e.lambda2));
    }
    Ok(speeds)
}

/// State of extended cell k ∈ [0, n+1]: k = 0 is the left ghost (cell −1),
/// k = n+1 the right ghost (cell n).
fn ghost_extended(model: &Model, state: &StateField, k: usize) -> (f64, f64, i64) {
    let n = state.n;
    if k == 0 {
        (2.0 * model.psi_star - state.psi[0], state.u[0], -1)
    } else if k == n + 1 {
        (
            2.0 * model.psi_star - state.psi[n - 1],
            state.u[n - 1],
            n as i64,
        )
    } else {
        (state.psi[k - 1], state.u[k - 1], (k - 1) as i64)
    }
}

/// Advances one step of size `dt`. The caller chooses dt (normally via
/// [`cfl_dt`], possibly clipped to land on tEnd).
pub fn step(
    model: &Model,
    state: &StateField,
    dt: f64,
    scheme: Scheme,
) -> Result<StepResult, SolverError> {
    let p = &model.params;
    let n = state.n;
    let dy = 1.0 / n as f64;
    // Stiffness guard for the unsplit explicit drag update.
    let stiffness = p.beta_drag * model.psi_star * model.psi_star / (model.psi_star - 1.0) * dt;
    if stiffness >= tolerances::DRAG_STIFFNESS_LIMIT {
        return Err(SolverError::DragStiffness {
            value: stiffness,
            limit: tolerances::DRAG_STIFFNESS_LIMIT,
        });
    }
    // Extended states, their wave speeds, and their physical fluxes.
    let speeds = wave_speeds(model, state)?;
    let mut ext = Vec::with_capacity(n + 2);
    for k in 0..n + 2 {
        let (psi, u, cell) = ghost_extended(model, state, k);
        let f = model.flux(psi, u).map_err(|e| SolverError::DomainEscape {
            t: state.t,
            cell,
            source: e,
        })?;
        ext.push((psi, u, f));
    }
    // Numerical face fluxes (n + 1 faces between extended cells k and k+1).
    let mut faces = Vec::with_capacity(n + 1);
    for k in 0..n + 1 {
        let (psi_l, u_l, fl) = ext[k];
        let (psi_r, u_r, fr) = ext[k + 1];
        let (l1l, l2l) = speeds[k];
        let (l1r, l2r) = speeds[k + 1];
        let fhat = match scheme {
            Scheme::Hll => {
                let mut sl = l1l.min(l1r);
                let mut sr = l2l.max(l2r);
                let margin = tolerances::HLL_SPEED_MARGIN_REL * sl.abs().max(sr.abs());
                sl -= margin;
                sr += margin;
                if sl >= 0.0 {
                    fl
                } else if sr <= 0.0 {
                    fr
                } else {
                    let inv = 1.0 / (sr - sl);
                    [
                        (sr * fl[0] - sl * fr[0] + sl * sr * (psi_r - psi_l)) * inv,
                        (sr * fl[1] - sl * fr[1] + sl * sr * (u_r - u_l)) * inv,
                    ]
                }
            }
            Scheme::LocalLaxFriedrichs => {
                let alpha = l1l.abs().max(l2l.abs()).max(l1r.abs()).max(l2r.abs());
                [
                    0.5 * (fl[0] + fr[0]) - 0.5 * alpha * (psi_r - psi_l),
                    0.5 * (fl[1] + fr[1]) - 0.5 * alpha * (u_r - u_l),
                ]
            }
        };
        faces.push(fhat);
    }
    // Conservative update + unsplit source at the old state.
    let lam = dt / dy;
    let mut psi_new = Vec::with_capacity(n);
    let mut u_new = Vec::with_capacity(n);
    for i in 0..n {
        let s = model.source(state.psi[i], state.u[i]);
        psi_new.push(state.psi[i] - lam * (faces[i + 1][0] - faces[i][0]) + dt * s[0]);
        u_new.push(state.u[i] - lam * (faces[i + 1][1] - faces[i][1]) + dt * s[1]);
    }
    let new_state = StateField {
        n,
        y: state.y.clone(),
        psi: psi_new,
        u: u_new,
        t: state.t + dt,
    };
    validate_state(model, &new_state)?;
    Ok(StepResult {
        state: new_state,
        dt,
        flux_left: faces[0],
        flux_right: faces[n],
    })
}

/// Scalar diagnostics of a state.
pub fn diagnostics(model: &Model, state: &StateField) -> Result<StepDiagnostics, SolverError> {
    let n = state.n;
    let dy = 1.0 / n as f64;
    let psi_star = model.psi_star;
    let mut mass = 0.0;
    for i in 0..n {
        mass += (1.0 / state.psi[i]) * state.psi[i] * dy;
    }
    let energy = energy_diagnostic(model, state)?;
    let mut sup_eta = 0.0_f64;
    let mut sup_u = 0.0_f64;
    for i in 0..n {
        sup_eta = sup_eta.max((state.psi[i] - psi_star).abs());
        sup_u = sup_u.max(state.u[i].abs());
    }
    let grad_sup = |q: &[f64]| -> f64 {
        let mut sup = 0.0_f64;
        if n >= 2 {
            sup = sup.max(((q[1] - q[0]) / dy).abs());
            sup = sup.max(((q[n - 1] - q[n - 2]) / dy).abs());
            for i in 1..n - 1 {
                sup = sup.max(((q[i + 1] - q[i - 1]) / (2.0 * dy)).abs());
            }
        }
        sup
    };
    Ok(StepDiagnostics {
        t: state.t,
        mass,
        energy,
        sup_eta,
        sup_u,
        sup_eta_x: grad_sup(&state.psi),
        sup_u_x: grad_sup(&state.u),
    })
}

/// Total energy by midpoint quadrature on the reconstructed physical cells
/// (cell i has physical width ψᵢ Δy):
///
/// ```text
///     E = Σᵢ [ ½ φᵢ(1−φᵢ) uᵢ² + φᵢ W_P^shifted(φ_I/φᵢ) + W_FH(φᵢ) ] ψᵢ Δy
/// ```
///
/// The kinetic density ½φ(1−φ)u² is the two-phase kinetic energy under the
/// zero-mean-volume-velocity constraint; the elastic density is per unit
/// reference volume, hence the φ multiplier turning it per-current-volume.
pub fn energy_diagnostic(model: &Model, state: &StateField) -> Result<f64, SolverError> {
    let p = &model.params;
    let dy = 1.0 / state.n as f64;
    let mut e = 0.0;
    for i in 0..state.n {
        let psi = state.psi[i];
        let u = state.u[i];
        let phi = 1.0 / psi;
        let kinetic = 0.5 * phi * (1.0 - phi) * u * u;
        let elastic = phi
            * constitutive::elastic_energy_shifted(p, p.phi_i / phi).map_err(|err| {
                SolverError::DomainEscape {
                    t: state.t,
                    cell: i as i64,
                    source: err,
                }
            })?;
        let mixing =
            constitutive::mixing_energy(p, phi).map_err(|err| SolverError::DomainEscape {
                t: state.t,
                cell: i as i64,
                source: err,
            })?;
        e += (kinetic + elastic + mixing) * psi * dy;
    }
    Ok(e)
}

/// Runs a full simulation.
///
/// Fails only on setup problems; in-run breakdowns terminate the run and
/// are reported in [`SimulationRecord::termination`].
pub fn run(params: &ParameterSet, config: &SimConfig) -> Result<SimulationRecord, SolverError> {
    config.validate()?;
    params
        .validate()
        .map_err(|e| SolverError::Config(e.to_string()))?;
    let model = match config.psi_star {
        Some(ps) => Model::new(params, ps)?,
        None => Model::from_params(params)?,
    };
    run_with_model(&model, config)
}

/// [`run`] with a pre-built model (lets callers reuse the flux table across
/// runs of the same parameter set).
pub fn run_with_model(model: &Model, config: &SimConfig) -> Result<SimulationRecord, SolverError> {
    config.validate()?;
    let mut state = init(model, config)?;
    let n = config.n;
    let dy = 1.0 / n as f64;
    let phi_star = 1.0 / model.psi_star;

    let first_diag = diagnostics(model, &state)?;
    let c1_initial = first_diag.c1_norm();
    // Default ceiling: 10³ × the initial C¹ norm; equilibrium data (zero
    // initial norm) gets no ceiling — nothing can grow from the preserved
    // equilibrium.
    let ceiling = match config.c1_ceiling {
        Some(c) => c,
        None => {
            if c1_initial > 0.0 {
                1e3 * c1_initial
            } else {
                f64::INFINITY
            }
        }
    };

    let mut diags = vec![first_diag];
    let mut snapshots = vec![state.clone()];
    // Interfaces start symmetric: S₁(0) = S₂(0) = L with 2L = ∫₀¹ψ⁰ dy.
    let integral0 = domain_integral(model.psi_star, &state.psi, dy);
    let l0 = 0.5 * integral0;
    let mut interfaces = InterfaceTrack::new();
    interfaces.push(0.0, l0, l0, integral0);

    let mut termination = TerminationReason::ReachedTEnd;
    let mut c1_exit_time = None;
    let mut steps: u64 = 0;
    let t_end = config.t_end;

    while state.t < t_end * (1.0 - 1e-14) {
        let dt = match cfl_dt(model, &state, config.cfl) {
            Ok(v) => v.min(t_end - state.t),
            Err(e) => {
                termination = termination_from_error(&e, state.t)?;
                break;
            }
        };
        let result = match step(model, &state, dt, config.scheme) {
            Ok(r) => r,
            Err(e) => {
                termination = termination_from_error(&e, state.t)?;
                break;
            }
        };
        // Free interfaces: explicit midpoint over the boundary velocity
        // traces of the old and new states.
        let u_left = (state.u[0], result.state.u[0]);
        let u_right = (state.u[n - 1], result.state.u[n - 1]);
        let (_, s1_cur, s2_cur) = interfaces.last().expect("seeded at t = 0");
        let (s1_new, s2_new) =
            crate::free_boundary::advance_interfaces(s1_cur, s2_cur, phi_star, dt, u_left, u_right);
        state = result.state;
        steps += 1;
        interfaces.push(
            state.t,
            s1_new,
            s2_new,
            domain_integral(model.psi_star, &state.psi, dy),
        );

        let d = diagnostics(model, &state)?;
        let c1 = d.c1_norm();
        let c1_prev = diags.last().map(|p| p.c1_norm()).unwrap_or(c1);
        diags.push(d);
        if steps % config.output_every as u64 == 0 {
            snapshots.push(state.clone());
        }
        if c1 > ceiling {
            // Sub-step crossing time by linear interpolation of the C¹
            // diagnostic across the step that crossed.
            let t_prev = state.t - dt;
            let frac = if c1 > c1_prev {
                ((ceiling - c1_prev) / (c1 - c1_prev)).clamp(0.0, 1.0)
            } else {
                1.0
            };
            let t_cross = t_prev + frac * dt;
            termination = TerminationReason::C1CeilingExceeded {
                t: t_cross,
                value: c1,
                ceiling,
            };
            c1_exit_time = Some(t_cross);
            break;
        }
    }

    // The final state is always the last snapshot (no duplicates).
    if snapshots.last().map(|s| s.t != state.t).unwrap_or(true) {
        snapshots.push(state.clone());
    }

    Ok(SimulationRecord {
        psi_star: model.psi_star,
        dy,
        snapshots,
        diagnostics: diags,
        interfaces,
        termination,
        c1_exit_time,
    })
}

/// Maps an in-run step failure to its structured termination; setup-class
/// errors propagate as errors.
fn termination_from_error(e: &SolverError, t_now: f64) -> Result<TerminationReason, SolverError> {
    match e {
        SolverError::NotHyperbolic {
            t, cell, margin, ..
        } => Ok(TerminationReason::HyperbolicityLost {
            t: *t,
            cell: *cell,
            margin: *margin,
        }),
        SolverError::NonFinite { t, cell } => {
            Ok(TerminationReason::NonFinite { t: *t, cell: *cell })
        }
        SolverError::DomainEscape { t, cell, .. } => {
            Ok(TerminationReason::DomainEscaped { t: *t, cell: *cell })
        }
        SolverError::DragStiffness { value, limit } => Err(SolverError::DragStiffness {
            value: *value,
            limit: *limit,
        }),
        _ => Err(SolverError::Config(format!(
            "unexpected in-run failure at t = {t_now}: {e}"
        ))),
    }
}

/// Trapezoid integral of ψ over [0, 1] including the Dirichlet wall values
/// ψ* at y = 0 and y = 1 (half-cell end segments).
pub fn domain_integral(psi_star: f64, psi: &[f64], dy: f64) -> f64 {
    let n = psi.len();
    let mut total = 0.25 * dy * (psi_star + psi[0]) + 0.25 * dy * (psi[n - 1] + psi_star);
    for i in 0..n - 1 {
        total += 0.5 * dy * (psi[i] + psi[i + 1]);
    }
    total
}
