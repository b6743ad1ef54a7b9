// SPDX-License-Identifier: MIT OR Apache-2.0

//! Numerical tolerances used across the crate, each with its justification.
//!
//! Tolerances fall into three bands:
//!
//! - **machine band** (~1e−12 … 1e−10): identities that hold exactly in real
//!   arithmetic and are only polluted by f64 rounding (eigen-identities,
//!   per-step conservation telescoping, bitwise-preserved equilibria);
//! - **oracle band** (~1e−8 … 1e−6): comparisons against an independent but
//!   itself-approximate evaluation (central finite differences with step
//!   1e−6 carry O(h²) = O(1e−12) truncation amplified by the local curvature
//!   scale; tabulated interpolation carries its own truncation);
//! - **model band** (dimensionless O(0.1…1) constants): thresholds that
//!   encode a modeling choice (CFL number, stiffness limit) rather than an
//!   accuracy target.

/// Absolute tolerance for eigenstructure identities (L·R normalization,
/// A·R = λR, L·A = λL, det/trace consistency). These are exact in real
/// arithmetic; 1e−10 allows for cancellation in the discriminant at
/// moderately large stress derivatives (|G′| up to ~1e3).
pub const EIGEN_IDENTITY_ABS: f64 = 1e-10;

/// Relative tolerance when checking an analytic derivative against a central
/// finite difference with step [`FD_STEP`]. Central differences are O(h²)
/// accurate; with h = 1e−6 and curvature scales up to ~1e2 on the sampling
/// windows used by the tests, the truncation floor sits near 1e−8, two
/// orders below this tolerance.
pub const FD_RELATIVE: f64 = 1e-6;

/// Step for central finite differences. Chosen near the f64 sweet spot
/// h ≈ ε_machine^(1/3) ≈ 6e−6 where truncation O(h²) and rounding O(ε/h)
/// balance for O(1) quantities.
pub const FD_STEP: f64 = 1e-6;

/// Absolute residual bound, |f(root)| ≤ this, for converged root solves on
/// the O(1)-scaled stress and saturation residuals.
pub const ROOT_RESIDUAL_ABS: f64 = 1e-10;

/// Bracket width at which bisection stops. 60 halvings shrink any O(1)
/// bracket below 1e−18 ≪ this, so the bound is about reporting, not effort.
pub const BISECTION_WIDTH: f64 = 1e-12;

/// Absolute tolerance for the adaptive quadrature behind the flux potential.
pub const QUADRATURE_ABS_TOL: f64 = 1e-10;

/// Absolute disagreement allowed between the tabulated flux potential and a
/// direct adaptive quadrature at validation points. The 4096-knot cubic
/// table carries O(Δ⁴ f⁗) interpolation error; on the tabulated window this
/// stays below 1e−9 (see `FluxTable`), and 1e−8 adds headroom.
pub const TABLE_VS_QUADRATURE_ABS: f64 = 1e-8;

/// Sup-norm bound on |ψ − ψ*| and |u| for an equilibrium run. The scheme is
/// equilibrium-preserving bitwise, so any nonzero value indicates a defect;
/// 1e−12 tolerates only accumulated rounding in the diagnostics themselves.
pub const EQUILIBRIUM_SUP_ABS: f64 = 1e-12;

/// Per-step absolute tolerance for discrete mass conservation: the change of
/// Σψᵢ·Δy in one step must equal the net boundary flux (pure telescoping of
/// interior fluxes, exact in real arithmetic).
pub const CONSERVATION_PER_STEP_ABS: f64 = 1e-12;

/// Allowed drift of total polymer mass over a whole run (mass is 1 by the
/// Lagrangian normalization; midpoint quadrature of φ·ψ per cell makes the
/// discrete mass exactly Σ Δy up to rounding).
pub const MASS_DRIFT_ABS: f64 = 1e-6;

/// Absolute tolerance on boundary values of tabulated initial data: the
/// perturbation η⁰ must vanish at both walls for the Dirichlet data to be
/// attained continuously.
pub const PROFILE_BOUNDARY_ABS: f64 = 1e-10;

/// Absolute tolerance on the first-order compatibility residual
/// −u⁰ η⁰_x / ψ*² + ((1−ψ*)/ψ*) u⁰_x at the walls of tabulated initial
/// data. Looser than the boundary-value check because it involves one-sided
/// finite differences of user-supplied data.
pub const COMPATIBILITY_RESIDUAL_ABS: f64 = 1e-8;

/// Absolute tolerance for recovering a trace anchor by re-integrating the
/// traced characteristic forward. The tracer is 4th-order in its substep
/// but the underlying wave-speed field is bilinear (2nd-order) in (t, y),
/// so round-trip agreement is limited by interpolation, not integration.
pub const TRACE_ROUNDTRIP_ABS: f64 = 1e-6;

/// Relative tolerance for dual-path evaluations of the same quantity
/// (e.g. an energy assembled term-by-term versus via shared helpers):
/// both paths differ only in rounding.
pub const DUAL_PATH_REL: f64 = 1e-12;

/// Minimum acceptable empirical order for self-convergence studies of the
/// first-order scheme. The formal order is 1; 0.8 tolerates pre-asymptotic
/// grids and boundary effects.
pub const MIN_CONVERGENCE_ORDER: f64 = 0.8;

/// Minimum Pearson correlation for the lifetime-vs-|log ε| fit in the
/// scaling study.
pub const SCALING_MIN_CORRELATION: f64 = 0.9;

/// States must satisfy ψ > 1 + this margin: ψ → 1⁺ is the solvent-free
/// limit where the flux potential degenerates logarithmically.
pub const STATE_PSI_MIN_EXCESS: f64 = 1e-9;

/// Explicit-drag stiffness guard: each step must satisfy
/// β ψ*² / (ψ*−1) · dt < this. At 0.5 the unsplit explicit source update is
/// comfortably inside its linear stability region (|1 − κ̃ dt| < 1 requires
/// κ̃ dt < 2; 0.5 leaves a 4× margin for state-dependent variation).
pub const DRAG_STIFFNESS_LIMIT: f64 = 0.5;

/// Default CFL number for the explicit finite-volume update.
pub const DEFAULT_CFL: f64 = 0.45;

/// Relative margin added to HLL wave-speed bounds so that the interval
/// [S_L, S_R] strictly contains the exact fan even under rounding.
pub const HLL_SPEED_MARGIN_REL: f64 = 1e-12;

/// Absolute defect |∫φ dx − 1| above which a physical profile handed to the
/// mass-Lagrangian transform is rescaled to unit mass (the transform requires
/// total polymer mass exactly 1; smaller defects are within trapezoid
/// quadrature noise of well-resolved data and are left untouched).
pub const MASS_RESCALE_ABS: f64 = 1e-8;

/// Absolute tolerance for the physical → mass-Lagrangian → physical round
/// trip evaluated at the input nodes. Both directions use the same trapezoid
/// rule, so the defect is the second-order mismatch between averaging φ and
/// averaging 1/φ per interval — O((Δφ/φ)²) per unit length, which
/// well-resolved input keeps below this bound.
pub const LAGRANGIAN_ROUNDTRIP_ABS: f64 = 1e-8;
