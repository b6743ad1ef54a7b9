// SPDX-License-Identifier: MIT OR Apache-2.0

//! Constitutive model of the gel: mixing and elastic energy densities, the
//! effective one-dimensional stress G(φ), the saturation residual whose
//! roots are swelling equilibria, and the flux potential F(ψ).
//!
//! # Energies
//!
//! Mixing (Flory–Huggins with composition-dependent interaction):
//!
//! ```text
//!     χ(φ)    = χ₀ + χ₁ φ + χ₂ φ²
//!     W_FH(φ) = (kT/N₁) φ log φ + (kT/N₂)(1−φ) log(1−φ) + (kT/2) χ(φ) φ(1−φ)
//! ```
//!
//! Elastic, in the invariants I₁ = tr(FᵀF) and I₃ = det(FᵀF) of the
//! deformation gradient; uniaxial deformation has F = diag(det F, 1, 1) and
//! det F = φ_I/φ:
//!
//! ```text
//!     W_P = (I₁ˢ − 3ˢ) + α₀ (I₃^(−r/2) − 1) + β₀ I₃^(1/2) + β₁ I₃^(q/2)
//! ```
//!
//! `W_P` is normalized to vanish at F = Id except for the volumetric slope
//! β₀ + β₁; [`elastic_energy_shifted`] removes that remainder, so the
//! shifted energy vanishes identically at det F = 1.
//!
//! # Effective stress
//!
//! The uniaxial stress entering the momentum flux is
//!
//! ```text
//!     G(φ) = kT log(1−φ)/N₂ − kT log(φ)/N₁
//!          + (q−1) β₁ (φ_I/φ)^q − (1+r) α₀ (φ/φ_I)^r
//!          + (2 + (φ_I/φ)²)ˢ · (2s φ_I² / (φ_I² + 2φ²) − 1)
//!          + kT χ₀ φ − 2 χ₁ φ + 3(χ₁ − χ₂) φ² + 4 χ₂ φ³
//! ```
//!
//! (the χ₁, χ₂ contributions carry no kT factor — they arise from the
//! composition dependence of χ, not from the entropic terms). Its sign
//! structure decides everything: the system is hyperbolic at a rest state
//! iff G′(φ) < 0 there.
//!
//! # Flux potential
//!
//! With ψ = 1/φ and a fixed equilibrium ψ*, the momentum flux uses
//!
//! ```text
//!     F(ψ) = − ∫_{ψ*}^{ψ} G′(1/t) / t³ dt,        F(ψ*) = 0,
//! ```
//!
//! so F′(ψ) = −G′(1/ψ)/ψ³ > 0 wherever G′ < 0. [`FluxTable`] memoizes F on
//! a 4096-knot uniform grid (local cubic interpolation, ψ* exactly on a
//! knot) and falls back to direct adaptive quadrature outside the table.
//!
//! # Floating-point behavior at the walls
//!
//! The compression wall (φ_I/φ)^q with q ~ 10³ exceeds f64 range for small
//! φ (for the stiff reference set, below φ ≈ 0.025). Evaluations there
//! return +∞ in G and −∞ in G′ — the sign information, which is what the
//! hyperbolicity scans consume, remains exact. Wall ratios are evaluated as
//! powers of the ratio φ_I/φ, never as separate φ_I^q · φ^(−q) factors,
//! which would overflow spuriously at moderate φ.

use crate::interp::{CubicTable, InterpError};
use crate::params::ParameterSet;
use crate::quadrature::{self, QuadratureError};
use crate::tolerances;
use thiserror::Error;

/// Constitutive evaluation failure.
#[derive(Debug, Error)]
pub enum ConstitutiveError {
    /// Argument outside the documented domain of the operation.
    #[error("`{func}` argument {value} outside domain ({lo}, {hi})")]
    OutOfDomain {
        func: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    /// The flux-potential quadrature did not converge.
    #[error("flux-potential quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
    /// The freshly built flux table disagrees with direct quadrature.
    #[error(
        "flux table validation failed at psi = {psi}: table value {table} vs \
         direct quadrature {quadrature}"
    )]
    TableValidation {
        psi: f64,
        table: f64,
        quadrature: f64,
    },
    /// Internal interpolation construction failure.
    #[error(transparent)]
    Interp(#[from] InterpError),
}

/// Checks φ against the clamp domain (phiClampMin, 1 − phiClampMin).
fn check_phi(p: &ParameterSet, phi: f64, func: &'static str) -> Result<(), ConstitutiveError> {
    let lo = p.phi_clamp_min;
    let hi = 1.0 - p.phi_clamp_min;
    if !(phi > lo && phi < hi) {
        return Err(ConstitutiveError::OutOfDomain {
            func,
            value: phi,
            lo,
            hi,
        });
    }
    Ok(())
}

/// Interaction parameter χ(φ) = χ₀ + χ₁φ + χ₂φ², defined on [0, 1].
pub fn chi(p: &ParameterSet, phi: f64) -> Result<f64, ConstitutiveError> {
    if !(0.0..=1.0).contains(&phi) || phi.is_nan() {
        return Err(ConstitutiveError::OutOfDomain {
            func: "chi",
            value: phi,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(p.chi0 + p.chi1 * phi + p.chi2 * phi * phi)
}

/// Flory–Huggins mixing energy density W_FH(φ).
///
/// Domain (phiClampMin, 1 − phiClampMin); both entropic terms stay finite
/// there (x log x → 0 as x → 0).
pub fn mixing_energy(p: &ParameterSet, phi: f64) -> Result<f64, ConstitutiveError> {
    check_phi(p, phi, "mixing_energy")?;
    let chi_val = p.chi0 + p.chi1 * phi + p.chi2 * phi * phi;
    Ok(p.k_t / p.n1 * phi * phi.ln()
        + p.k_t / p.n2 * (1.0 - phi) * (1.0 - phi).ln()
        + 0.5 * p.k_t * chi_val * phi * (1.0 - phi))
}

/// Elastic energy density W_P for uniaxial deformation, as a function of
/// det F > 0 (raw normalization: W_P(1) = β₀ + β₁).
pub fn elastic_energy(p: &ParameterSet, det_f: f64) -> Result<f64, ConstitutiveError> {
    if !(det_f > 0.0) {
        return Err(ConstitutiveError::OutOfDomain {
            func: "elastic_energy",
            value: det_f,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let i1 = det_f * det_f + 2.0;
    // I₃ = det F², so I₃^(1/2) = det F, I₃^(−r/2) = det F^(−r),
    // I₃^(q/2) = det F^q.
    Ok((i1.powf(p.s) - 3f64.powf(p.s))
        + p.alpha0 * (det_f.powf(-p.r) - 1.0)
        + p.beta0 * det_f
        + p.beta1 * det_f.powf(p.q))
}

/// Elastic energy density shifted so it vanishes at det F = 1:
/// `elastic_energy` − (β₀ + β₁). This is the form used in energy budgets,
/// where only energy differences matter.
pub fn elastic_energy_shifted(p: &ParameterSet, det_f: f64) -> Result<f64, ConstitutiveError> {
    Ok(elastic_energy(p, det_f)? - (p.beta0 + p.beta1))
}

/// Effective one-dimensional stress G(φ) (see the module docs for the
/// closed form). Domain (phiClampMin, 1 − phiClampMin). May return +∞ where
/// the compression-wall term overflows f64 (small φ, large q).
pub fn g(p: &ParameterSet, phi: f64) -> Result<f64, ConstitutiveError> {
    check_phi(p, phi, "g")?;
    Ok(g_raw(p, phi))
}

fn g_raw(p: &ParameterSet, phi: f64) -> f64 {
    let ratio = p.phi_i / phi; // det F
    let w = ratio * ratio;
    let mix = p.k_t * ((1.0 - phi).ln() / p.n2 - phi.ln() / p.n1);
    let wall_compress = (p.q - 1.0) * p.beta1 * ratio.powf(p.q);
    let wall_expand = -(1.0 + p.r) * p.alpha0 * (phi / p.phi_i).powf(p.r);
    // Shear term (2 + w)^s (2sw/(w + 2) − 1); the second factor is bounded,
    // so the product inherits the (finite) magnitude of (2 + w)^s.
    let shear = (2.0 + w).powf(p.s) * (2.0 * p.s * w / (w + 2.0) - 1.0);
    let chi_part = p.k_t * p.chi0 * phi - 2.0 * p.chi1 * phi
        + 3.0 * (p.chi1 - p.chi2) * phi * phi
        + 4.0 * p.chi2 * phi * phi * phi;
    mix + wall_compress + wall_expand + shear + chi_part
}

/// Stress derivative G′(φ), analytic closed form.
///
/// The shear term is differentiated via w = (φ_I/φ)²:
///
/// ```text
///     d/dφ [(2+w)ˢ (2sw/(w+2) − 1)] = −(2w/φ) · s (2+w)^(s−2) ((2s−1)w + 2)
/// ```
///
/// which is strictly negative for every s > 0, w > 0. Domain
/// (phiClampMin, 1 − phiClampMin); may return −∞ where the compression
/// wall overflows (sign remains correct).
pub fn dg(p: &ParameterSet, phi: f64) -> Result<f64, ConstitutiveError> {
    check_phi(p, phi, "dg")?;
    Ok(dg_raw(p, phi))
}

fn dg_raw(p: &ParameterSet, phi: f64) -> f64 {
    let ratio = p.phi_i / phi;
    let w = ratio * ratio;
    let mix = -p.k_t / (p.n2 * (1.0 - phi)) - p.k_t / (p.n1 * phi);
    let wall_compress = -p.q * (p.q - 1.0) * p.beta1 * ratio.powf(p.q) / phi;
    let wall_expand = -p.r * (1.0 + p.r) * p.alpha0 * (phi / p.phi_i).powf(p.r) / phi;
    let shear = -(2.0 * w / phi) * p.s * (2.0 + w).powf(p.s - 2.0) * ((2.0 * p.s - 1.0) * w + 2.0);
    let chi_part =
        p.k_t * p.chi0 - 2.0 * p.chi1 + 6.0 * (p.chi1 - p.chi2) * phi + 12.0 * p.chi2 * phi * phi;
    mix + wall_compress + wall_expand + shear + chi_part
}

/// Saturation residual whose roots φ* are swelling equilibria of the gel in
/// contact with pure solvent (elastic stress balancing osmotic pressure).
///
/// ```text
///     res(φ) = φ · { 2s (w + 2)^(s−1) w − α₀ r (φ/φ_I)^r + β₀ φ_I/φ
///                    + β₁ q (φ_I/φ)^q }
///            − { φ (A − B) − C + χ₁ φ²(1−φ) + χ₂ φ²(1−φ) },
///     w = (φ_I/φ)²,
///     A = (kT/2) χ₀ (1−φ) + (kT/N₁) log φ + kT/N₁ + 2χ₁ φ(1−φ) + 3χ₂ φ²(1−φ)
///     B = (kT/2) χ₀ φ + (kT/N₂) log(1−φ) + kT/N₂ + χ₁ φ² + χ₂ φ³
///     C = (kT/2) χ₀ φ(1−φ) + (kT/N₁) φ log φ + (kT/N₂)(1−φ) log(1−φ)
/// ```
///
/// Domain (phiClampMin, 1 − phiClampMin).
pub fn saturation_residual(p: &ParameterSet, phi: f64) -> Result<f64, ConstitutiveError> {
    check_phi(p, phi, "saturation_residual")?;
    let ratio = p.phi_i / phi;
    let w = ratio * ratio;
    let elastic = 2.0 * p.s * (w + 2.0).powf(p.s - 1.0) * w
        - p.alpha0 * p.r * (phi / p.phi_i).powf(p.r)
        + p.beta0 * ratio
        + p.beta1 * p.q * ratio.powf(p.q);
    let a = 0.5 * p.k_t * p.chi0 * (1.0 - phi)
        + p.k_t / p.n1 * phi.ln()
        + p.k_t / p.n1
        + 2.0 * p.chi1 * phi * (1.0 - phi)
        + 3.0 * p.chi2 * phi * phi * (1.0 - phi);
    let b = 0.5 * p.k_t * p.chi0 * phi
        + p.k_t / p.n2 * (1.0 - phi).ln()
        + p.k_t / p.n2
        + p.chi1 * phi * phi
        + p.chi2 * phi * phi * phi;
    let c = 0.5 * p.k_t * p.chi0 * phi * (1.0 - phi)
        + p.k_t / p.n1 * phi * phi.ln()
        + p.k_t / p.n2 * (1.0 - phi) * (1.0 - phi).ln();
    let mixing =
        phi * (a - b) - c + p.chi1 * phi * phi * (1.0 - phi) + p.chi2 * phi * phi * (1.0 - phi);
    Ok(phi * elastic - mixing)
}

/// Flux potential F(ψ) = −∫_{ψ*}^{ψ} G′(1/t)/t³ dt by direct adaptive
/// quadrature (absolute tolerance [`tolerances::QUADRATURE_ABS_TOL`]).
///
/// Both ψ and ψ* must map into the clamp domain: ψ ∈ (1/(1−phiClampMin),
/// 1/phiClampMin).
pub fn flux_potential_quad(
    p: &ParameterSet,
    psi: f64,
    psi_star: f64,
) -> Result<f64, ConstitutiveError> {
    let lo = 1.0 / (1.0 - p.phi_clamp_min);
    let hi = 1.0 / p.phi_clamp_min;
    for (value, func) in [
        (psi, "flux_potential_quad"),
        (psi_star, "flux_potential_quad(psi_star)"),
    ] {
        if !(value > lo && value < hi) {
            return Err(ConstitutiveError::OutOfDomain {
                func,
                value,
                lo,
                hi,
            });
        }
    }
    let integrand = |t: f64| -dg_raw(p, 1.0 / t) / (t * t * t);
    let (v, _err) =
        quadrature::integrate(&integrand, psi_star, psi, tolerances::QUADRATURE_ABS_TOL)?;
    Ok(v)
}

/// Analytic flux-potential derivative F′(ψ) = −G′(1/ψ)/ψ³.
pub fn flux_potential_derivative(p: &ParameterSet, psi: f64) -> Result<f64, ConstitutiveError> {
    let phi = 1.0 / psi;
    check_phi(p, phi, "flux_potential_derivative")?;
    Ok(-dg_raw(p, phi) / (psi * psi * psi))
}

/// Number of knots in the memoized flux-potential table.
const FLUX_TABLE_KNOTS: usize = 4096;
/// Table window in units of the swelling depth ψ* − 1: the window is
/// [ψ* − LO·(ψ*−1), ψ* + HI·(ψ*−1)]. The lower factor keeps the window away
/// from the logarithmic degeneration of F at ψ → 1⁺, where a uniform-knot
/// cubic would lose the 1e−8 validation accuracy; states below the window
/// fall back to direct quadrature.
const FLUX_TABLE_LO_FACTOR: f64 = 0.8;
const FLUX_TABLE_HI_FACTOR: f64 = 5.0;

/// Memoized flux potential F(ψ) around a fixed equilibrium ψ*.
///
/// 4096 uniform knots with ψ* exactly on a knot (so F(ψ*) = 0 bitwise),
/// evaluated by a local 4-point cubic; outside the window the evaluation
/// falls back to [`flux_potential_quad`]. Construction cross-validates the
/// table against direct quadrature at 33 points to
/// [`tolerances::TABLE_VS_QUADRATURE_ABS`].
#[derive(Debug, Clone)]
pub struct FluxTable {
    params: ParameterSet,
    psi_star: f64,
    table: CubicTable,
}

impl FluxTable {
    /// Builds and validates the table for the given equilibrium.
    pub fn new(p: &ParameterSet, psi_star: f64) -> Result<Self, ConstitutiveError> {
        let lo_domain = 1.0 / (1.0 - p.phi_clamp_min);
        if !(psi_star > lo_domain) {
            return Err(ConstitutiveError::OutOfDomain {
                func: "FluxTable::new",
                value: psi_star,
                lo: lo_domain,
                hi: 1.0 / p.phi_clamp_min,
            });
        }
        let depth = psi_star - 1.0;
        let lo = psi_star - FLUX_TABLE_LO_FACTOR * depth;
        let hi = (psi_star + FLUX_TABLE_HI_FACTOR * depth).min(0.9 / p.phi_clamp_min);
        let dx = (hi - lo) / (FLUX_TABLE_KNOTS - 1) as f64;
        // Anchor ψ* exactly on a knot: choose the knot index nearest ψ* and
        // re-derive the grid origin from it.
        let j0 = ((psi_star - lo) / dx).round() as usize;
        let x0 = psi_star - j0 as f64 * dx;
        // Cumulative per-segment quadrature outward from ψ*. Each segment is
        // ~1e−4 wide and smooth, so a single Gauss–Kronrod panel is already
        // near machine accuracy; the per-segment tolerance keeps the
        // accumulated error orders below the table validation tolerance.
        let seg_tol = 1e-14;
        let integrand = |t: f64| -dg_raw(p, 1.0 / t) / (t * t * t);
        let mut values = vec![0.0; FLUX_TABLE_KNOTS];
        for j in (j0 + 1)..FLUX_TABLE_KNOTS {
            let a = x0 + (j - 1) as f64 * dx;
            let b = x0 + j as f64 * dx;
            let (seg, _) = quadrature::integrate(&integrand, a, b, seg_tol)?;
            values[j] = values[j - 1] + seg;
        }
        for j in (0..j0).rev() {
            let a = x0 + j as f64 * dx;
            let b = x0 + (j + 1) as f64 * dx;
            let (seg, _) = quadrature::integrate(&integrand, a, b, seg_tol)?;
            values[j] = values[j + 1] - seg;
        }
        let table = CubicTable::new(x0, dx, values, j0)?;
        let built = FluxTable {
            params: p.clone(),
            psi_star,
            table,
        };
        // Cross-validate against direct quadrature on a coarse sweep of the
        // window (including off-knot points).
        for k in 0..33 {
            let psi = lo + (hi - lo) * (k as f64 + 0.37) / 33.0;
            let direct = flux_potential_quad(p, psi, psi_star)?;
            let tabbed = built.eval(psi)?;
            if (tabbed - direct).abs() > tolerances::TABLE_VS_QUADRATURE_ABS {
                return Err(ConstitutiveError::TableValidation {
                    psi,
                    table: tabbed,
                    quadrature: direct,
                });
            }
        }
        Ok(built)
    }

    /// The equilibrium the table is anchored at (F(ψ*) = 0 exactly).
    pub fn psi_star(&self) -> f64 {
        self.psi_star
    }

    /// Tabulated window (evaluations outside fall back to quadrature).
    pub fn window(&self) -> (f64, f64) {
        self.table.range()
    }

    /// Evaluates F(ψ): table interpolation inside the window, direct
    /// adaptive quadrature outside. F(ψ*) = 0 is returned bitwise — it is
    /// the definition of the potential's base point, not an interpolation
    /// result (the knot anchor alone could sit 1 ulp off ψ* after the grid
    /// origin is re-derived in floating point).
    pub fn eval(&self, psi: f64) -> Result<f64, ConstitutiveError> {
        if psi == self.psi_star {
            return Ok(0.0);
        }
        if let Some(v) = self.table.eval(psi) {
            return Ok(v);
        }
        flux_potential_quad(&self.params, psi, self.psi_star)
    }
}
