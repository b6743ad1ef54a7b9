// SPDX-License-Identifier: MIT OR Apache-2.0

// Domain guards are written `!(x > lo)` on purpose: the negated comparison
// rejects NaN along with the out-of-range values, which `x <= lo` would
// silently let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! One-dimensional gel swelling: constitutive model, hyperbolic structure,
//! and a mass-Lagrangian finite-volume solver.
//!
//! A gel is modeled as a saturated, incompressible mixture of a polymer
//! network (volume fraction φ) and a solvent (volume fraction 1−φ). In one
//! space dimension the swelling dynamics reduce to a quasilinear 2×2
//! hyperbolic system with a weak drag source term, posed on a moving domain
//! (−S₁(t), S₂(t)) whose endpoints are free boundaries. Transforming to the
//! mass-Lagrangian coordinate
//!
//! ```text
//!     y = ∫_{−S₁(t)}^{x} φ(z, t) dz,            y ∈ (0, 1),
//! ```
//!
//! (total polymer mass normalized to 1) fixes the domain. With ψ = 1/φ the
//! system becomes, in conservative form,
//!
//! ```text
//!     ψ_t − ((1 − 1/ψ) u)_y                 = 0
//!     u_t − (u²/(2ψ²) + F(ψ))_y             = −β u ψ² / (ψ − 1)
//! ```
//!
//! where F is the flux potential built from the effective stress G(φ) (see
//! [`constitutive`]) and β ≥ 0 is the drag coefficient. The system is
//! hyperbolic exactly where u² + G′(1/ψ) < 0.
//!
//! # Modules
//!
//! - [`params`] — parameter sets (mixing, elastic, drag) with validation and
//!   the two reference parameter sets shipped with the crate.
//! - [`constitutive`] — interaction parameter χ(φ), mixing and elastic energy
//!   densities, effective stress G and its derivative, the saturation
//!   residual whose roots are swelling equilibria, and the flux potential
//!   F(ψ) with a fast tabulated evaluator.
//! - [`hyperbolicity`] — flux Jacobian, eigenstructure, hyperbolicity /
//!   non-characteristic / uniform-Kreiss–Lopatinskii diagnostics, critical
//!   volume fractions, and equilibrium solves.
//! - [`solver`] — finite-volume solver (HLL or local Lax–Friedrichs) with
//!   CFL time stepping, equilibrium-preserving Dirichlet boundaries, and
//!   per-step conservation/energy/sup-norm diagnostics.
//! - [`characteristics`] — diagonal (characteristic) variables, backward
//!   characteristic tracing with boundary reflection, sup-norm records,
//!   an a-priori growth bound, and the lifetime-scaling study.
//! - [`free_boundary`] — mapping between physical and mass-Lagrangian
//!   coordinates and time integration of the free interfaces.
//! - [`quadrature`], [`rootfind`], [`interp`] — small numeric kernels
//!   (adaptive Gauss–Kronrod integration, bracketed root solves, monotone
//!   cubic / bilinear / local Lagrange interpolation) shared by the physics
//!   modules.
//! - [`tolerances`] — the numerical tolerances used across the crate, each
//!   with its justification.
//!
//! # Conventions
//!
//! - ψ = 1/φ > 1 throughout (the network is swollen, never compressed to
//!   φ ≥ 1); state vectors are ordered (ψ, u) and perturbation variables
//!   (η, u) with η = ψ − ψ*, where ψ* is the swelling equilibrium.
//! - All public floating-point I/O is `f64`; outputs are deterministic
//!   (no hidden global state, no randomness outside seeded test oracles).

pub mod characteristics;
pub mod constitutive;
pub mod free_boundary;
pub mod hyperbolicity;
pub mod interp;
pub mod params;
pub mod quadrature;
pub mod rootfind;
pub mod solver;
pub mod tolerances;

pub use constitutive::FluxTable;
pub use params::ParameterSet;
pub use solver::{Scheme, SimConfig, SimulationRecord, StateField};
