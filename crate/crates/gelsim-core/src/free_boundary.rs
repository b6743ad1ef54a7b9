// SPDX-License-Identifier: MIT OR Apache-2.0

//! Free-interface tracking and the physical ↔ mass-Lagrangian coordinate
//! maps.
//!
//! The physical gel occupies the moving interval [−S₁(t), S₂(t)]. With total
//! polymer mass normalized to 1, the mass coordinate
//!
//! ```text
//!     y(x, t) = ∫_{−S₁(t)}^{x} φ(z, t) dz          ∈ [0, 1]
//! ```
//!
//! maps the moving domain onto the fixed unit interval; the inverse map is
//! recovered from ψ = 1/φ by
//!
//! ```text
//!     x(y, t) = −S₁(t) + ∫₀^y ψ(z, t) dz,
//! ```
//!
//! so the physical domain length satisfies S₁ + S₂ = ∫₀¹ ψ dy at all times —
//! the consistency identity used to audit the interface ODEs against the
//! bulk solve.
//!
//! The interfaces move with the solvent drawn across them:
//!
//! ```text
//!     S₁′(t) = −(1 − φ*) u(−S₁, t),      S₂′(t) = (1 − φ*) u(S₂, t),
//! ```
//!
//! integrated here with the explicit midpoint rule (trapezoidal average of
//! the endpoint slopes, matching the first-order bulk update).

use crate::interp::{InterpError, Pchip};
use crate::tolerances;
use thiserror::Error;

/// Failure modes of the coordinate transforms.
#[derive(Debug, Error)]
pub enum FreeBoundaryError {
    #[error("x grid not strictly increasing at index {index}: {left} >= {right}")]
    NonMonotone { index: usize, left: f64, right: f64 },
    #[error("array length mismatch: x has {x_len}, phi has {phi_len}")]
    LengthMismatch { x_len: usize, phi_len: usize },
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("volume fraction out of (0, 1) at index {index}: phi = {value}")]
    InvalidFraction { index: usize, value: f64 },
    #[error("profile carries no polymer mass (integral = {mass})")]
    NoMass { mass: f64 },
    #[error(transparent)]
    Interp(#[from] InterpError),
}

/// Time series of the two interface positions, with the per-time consistency
/// defect (S₁ + S₂) − ∫₀¹ψ dy.
#[derive(Debug, Clone, Default)]
pub struct InterfaceTrack {
    pub times: Vec<f64>,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    /// (S₁ + S₂) − ∫₀¹ ψ dy at each recorded time; zero in exact arithmetic.
    pub domain_length_defect: Vec<f64>,
}

impl InterfaceTrack {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one row; `psi_integral` is ∫₀¹ψ dy of the concurrent state.
    pub fn push(&mut self, t: f64, s1: f64, s2: f64, psi_integral: f64) {
        self.times.push(t);
        self.s1.push(s1);
        self.s2.push(s2);
        self.domain_length_defect.push((s1 + s2) - psi_integral);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Most recent (t, S₁, S₂).
    pub fn last(&self) -> Option<(f64, f64, f64)> {
        let i = self.times.len().checked_sub(1)?;
        Some((self.times[i], self.s1[i], self.s2[i]))
    }
}

/// One explicit-midpoint step of the interface ODEs.
///
/// `u_left` and `u_right` carry the boundary velocity traces at the step's
/// start and end: the update averages the endpoint slopes,
/// S₁ ← S₁ − ½ dt (1−φ*)(u_L⁰ + u_L¹), and symmetrically for S₂.
pub fn advance_interfaces(
    s1: f64,
    s2: f64,
    phi_star: f64,
    dt: f64,
    u_left: (f64, f64),
    u_right: (f64, f64),
) -> (f64, f64) {
    let a = 1.0 - phi_star;
    (
        s1 - 0.5 * dt * a * (u_left.0 + u_left.1),
        s2 + 0.5 * dt * a * (u_right.0 + u_right.1),
    )
}

/// A physical profile transformed to the mass coordinate.
#[derive(Debug, Clone)]
pub struct LagrangianProfile {
    /// Uniform output grid: n_out nodes spanning [0, 1] inclusive.
    pub y: Vec<f64>,
    /// Polymer fraction at the output nodes (after any rescale).
    pub phi: Vec<f64>,
    /// ψ = 1/φ at the output nodes.
    pub psi: Vec<f64>,
    /// Images y(xⱼ) of the input nodes under the exact (trapezoid) transform.
    pub y_nodes: Vec<f64>,
    /// Rescaled polymer fraction at the input nodes.
    pub phi_nodes: Vec<f64>,
    /// Left interface: S₁ = −x₀.
    pub s1: f64,
    /// Right interface: S₂ = x_last.
    pub s2: f64,
    /// Raw mass ∫φ dx of the input before any rescale.
    pub mass: f64,
    /// Whether φ was rescaled to unit mass (|mass − 1| exceeded
    /// [`tolerances::MASS_RESCALE_ABS`]). Callers surfacing this to users
    /// should log the defect.
    pub rescaled: bool,
}

/// Transforms a physical profile φ(x) on [−S₁, S₂] to the mass coordinate.
///
/// The cumulative mass is computed by trapezoid quadrature; if the total
/// deviates from 1 by more than [`tolerances::MASS_RESCALE_ABS`], φ is
/// rescaled to unit mass (flagged in the result) — the transform is only
/// meaningful at unit mass. The profile is then resampled onto `n_out`
/// uniform nodes in y by monotone cubic interpolation.
pub fn to_mass_lagrangian(
    x: &[f64],
    phi: &[f64],
    n_out: usize,
) -> Result<LagrangianProfile, FreeBoundaryError> {
    if x.len() != phi.len() {
        return Err(FreeBoundaryError::LengthMismatch {
            x_len: x.len(),
            phi_len: phi.len(),
        });
    }
    if x.len() < 4 {
        return Err(FreeBoundaryError::TooFewPoints {
            need: 4,
            got: x.len(),
        });
    }
    if n_out < 4 {
        return Err(FreeBoundaryError::TooFewPoints {
            need: 4,
            got: n_out,
        });
    }
    let m = x.len();
    for i in 0..m - 1 {
        if !(x[i + 1] > x[i]) {
            return Err(FreeBoundaryError::NonMonotone {
                index: i,
                left: x[i],
                right: x[i + 1],
            });
        }
    }
    for (i, &f) in phi.iter().enumerate() {
        if !(f > 0.0 && f < 1.0) {
            return Err(FreeBoundaryError::InvalidFraction { index: i, value: f });
        }
    }
    // Cumulative mass by trapezoid quadrature.
    let mut cum = Vec::with_capacity(m);
    cum.push(0.0);
    for i in 0..m - 1 {
        let seg = 0.5 * (phi[i] + phi[i + 1]) * (x[i + 1] - x[i]);
        cum.push(cum[i] + seg);
    }
    let mass = cum[m - 1];
    if !(mass > 0.0) {
        return Err(FreeBoundaryError::NoMass { mass });
    }
    let rescaled = (mass - 1.0).abs() > tolerances::MASS_RESCALE_ABS;
    // y = cum/mass spans [0, 1] exactly and inherits strict monotonicity
    // from φ > 0; φ is divided by the same mass so that ∫φ̃ dx = 1.
    let y_nodes: Vec<f64> = cum.iter().map(|&c| c / mass).collect();
    let phi_nodes: Vec<f64> = if rescaled {
        phi.iter().map(|&f| f / mass).collect()
    } else {
        phi.to_vec()
    };
    let interp = Pchip::new(&y_nodes, &phi_nodes)?;
    let y: Vec<f64> = (0..n_out).map(|j| j as f64 / (n_out - 1) as f64).collect();
    let phi_out: Vec<f64> = y.iter().map(|&yj| interp.eval(yj)).collect();
    let psi_out: Vec<f64> = phi_out.iter().map(|&f| 1.0 / f).collect();
    Ok(LagrangianProfile {
        y,
        phi: phi_out,
        psi: psi_out,
        y_nodes,
        phi_nodes,
        s1: -x[0],
        s2: x[m - 1],
        mass,
        rescaled,
    })
}

/// Inverse map: physical positions x(yⱼ) = −S₁ + ∫₀^{yⱼ} ψ dy by trapezoid
/// quadrature over the given (strictly increasing) y nodes.
pub fn reconstruct_x(y: &[f64], psi: &[f64], s1: f64) -> Result<Vec<f64>, FreeBoundaryError> {
    if y.len() != psi.len() {
        return Err(FreeBoundaryError::LengthMismatch {
            x_len: y.len(),
            phi_len: psi.len(),
        });
    }
    if y.len() < 2 {
        return Err(FreeBoundaryError::TooFewPoints {
            need: 2,
            got: y.len(),
        });
    }
    for i in 0..y.len() - 1 {
        if !(y[i + 1] > y[i]) {
            return Err(FreeBoundaryError::NonMonotone {
                index: i,
                left: y[i],
                right: y[i + 1],
            });
        }
    }
    let mut x = Vec::with_capacity(y.len());
    x.push(-s1);
    for i in 0..y.len() - 1 {
        let seg = 0.5 * (psi[i] + psi[i + 1]) * (y[i + 1] - y[i]);
        x.push(x[i] + seg);
    }
    Ok(x)
}
