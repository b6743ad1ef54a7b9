// SPDX-License-Identifier: MIT OR Apache-2.0

//! Parameter sets for the gel constitutive model.
//!
//! A [`ParameterSet`] collects the mixing (Flory–Huggins), elastic, and drag
//! parameters. The JSON serialization uses the field names below verbatim, so
//! parameter files are portable across tools:
//!
//! ```json
//! {
//!   "N1": 1000, "N2": 1, "q": 1000, "s": 6, "r": 1.25,
//!   "alpha0": 0.001, "beta0": 1.0, "beta1": 20, "phiI": 0.05,
//!   "chi0": 0.467, "chi1": 0.593, "chi2": -0.42,
//!   "betaDrag": 1.0, "kT": 1.0, "phiClampMin": 1e-6
//! }
//! ```
//!
//! Two reference sets are built in: [`ParameterSet::polymer`], a stiff
//! synthetic-polymer network whose stress derivative G′ is negative on the
//! whole physical range (strictly hyperbolic everywhere at rest), and
//! [`ParameterSet::polysaccharide`], a soft network with s ≤ 1 whose G′
//! changes sign, so hyperbolicity is lost on an interior volume-fraction
//! band. Copies of both ship as JSON files under `params/`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validation failure for a [`ParameterSet`].
#[derive(Debug, Error)]
pub enum ParamError {
    /// A field violates its documented range.
    #[error("parameter `{field}` = {value} violates requirement: {requirement}")]
    Invalid {
        field: &'static str,
        value: f64,
        requirement: &'static str,
    },
    /// The parameter file could not be read.
    #[error("cannot read parameter file: {0}")]
    Io(#[from] std::io::Error),
    /// The parameter file is not valid JSON for this schema.
    #[error("cannot parse parameter file: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Physical and numerical parameters of the gel model.
///
/// Mixing free energy (per site volume, energy scale `k_t` = K_B T / V_m):
///
/// ```text
///     W_FH(φ) = (kT/N₁) φ log φ + (kT/N₂)(1−φ) log(1−φ) + (kT/2) χ(φ) φ(1−φ)
///     χ(φ)    = χ₀ + χ₁ φ + χ₂ φ²
/// ```
///
/// Elastic energy density (per unit reference volume) in the principal
/// invariants I₁ = tr(FᵀF), I₃ = det(FᵀF) of the deformation gradient F:
///
/// ```text
///     W_P = (I₁ˢ − 3ˢ) + α₀ (I₃^(−r/2) − 1) + β₀ I₃^(1/2) + β₁ I₃^(q/2)
/// ```
///
/// In one dimension F = diag(det F, 1, 1) with det F = φ_I/φ, where φ_I is
/// the volume fraction of the stress-free reference state.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParameterSet {
    /// Polymer degree of polymerization N₁ ≥ 1 (entropy ∝ 1/N₁).
    #[serde(rename = "N1")]
    pub n1: f64,
    /// Solvent size N₂ ≥ 1 (N₂ = 1 for a small-molecule solvent).
    #[serde(rename = "N2")]
    pub n2: f64,
    /// Compression-wall exponent q in β₁ I₃^(q/2); q > 1, stiff gels use q = N₁.
    pub q: f64,
    /// Shear-stiffness exponent s in I₁ˢ; s > 1 is the stiff regime, and
    /// s ∈ (0, 1] is the soft "polysaccharide" regime in which the stress
    /// derivative G′ can change sign.
    pub s: f64,
    /// Expansion-wall exponent r ≥ 1 in α₀ I₃^(−r/2).
    pub r: f64,
    /// Expansion-wall amplitude α₀ > 0.
    pub alpha0: f64,
    /// Volumetric energy slope β₀ > 0 (the I₃^(1/2) coefficient).
    pub beta0: f64,
    /// Compression-wall amplitude β₁ > 0.
    pub beta1: f64,
    /// Reference (stress-free) polymer volume fraction φ_I ∈ (0, 1).
    #[serde(rename = "phiI")]
    pub phi_i: f64,
    /// Constant term of the interaction parameter χ(φ).
    pub chi0: f64,
    /// Linear coefficient of χ(φ).
    pub chi1: f64,
    /// Quadratic coefficient of χ(φ).
    pub chi2: f64,
    /// Drag coefficient β ≥ 0 between network and solvent.
    #[serde(rename = "betaDrag")]
    pub beta_drag: f64,
    /// Thermal energy scale kT := K_B T / V_m > 0 multiplying the entropic
    /// and χ₀ mixing terms. Defaults to 1 (nondimensional convention).
    #[serde(rename = "kT", default = "default_k_t")]
    pub k_t: f64,
    /// Lower clamp for volume-fraction arguments: energy/stress evaluations
    /// require φ ∈ (phiClampMin, 1 − phiClampMin). Must lie in (0, 0.01).
    #[serde(rename = "phiClampMin", default = "default_phi_clamp_min")]
    pub phi_clamp_min: f64,
    /// Free-form note describing the set; not used numerically.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

fn default_k_t() -> f64 {
    1.0
}

fn default_phi_clamp_min() -> f64 {
    1e-6
}

impl ParameterSet {
    /// Stiff synthetic-polymer reference set (q = N₁ = 1000, s = 6).
    ///
    /// G′ < 0 on the whole range (0, 1): strictly hyperbolic at rest at
    /// every volume fraction.
    pub fn polymer() -> Self {
        ParameterSet {
            n1: 1000.0,
            n2: 1.0,
            q: 1000.0,
            s: 6.0,
            r: 1.25,
            alpha0: 0.001,
            beta0: 1.0,
            beta1: 20.0,
            phi_i: 0.05,
            chi0: 0.467,
            chi1: 0.593,
            chi2: -0.42,
            beta_drag: 1.0,
            k_t: 1.0,
            phi_clamp_min: 1e-6,
            description: Some(
                "Stiff synthetic polymer network; strictly hyperbolic at rest \
                 on the whole volume-fraction range."
                    .to_string(),
            ),
        }
    }

    /// Soft polysaccharide reference set (q = 2, s = 0.6).
    ///
    /// With the reduced thermal scale kT = 0.01 the elastic softening wins on
    /// an interior band of volume fractions and G′ changes sign there:
    /// rest states in that band are elliptic (hyperbolicity fails).
    pub fn polysaccharide() -> Self {
        ParameterSet {
            n1: 1000.0,
            n2: 1.0,
            q: 2.0,
            s: 0.6,
            r: 1.25,
            alpha0: 0.001,
            beta0: 1.0,
            beta1: 0.002,
            phi_i: 0.05,
            chi0: 0.446,
            chi1: 0.106,
            chi2: -0.02,
            beta_drag: 1.0,
            k_t: 0.01,
            phi_clamp_min: 1e-6,
            description: Some(
                "Soft polysaccharide network; the stress derivative changes \
                 sign on an interior volume-fraction band (mixed-type model)."
                    .to_string(),
            ),
        }
    }

    /// Loads and validates a parameter set from a JSON file.
    pub fn from_json_file(path: &std::path::Path) -> Result<Self, ParamError> {
        let text = std::fs::read_to_string(path)?;
        let p: ParameterSet = serde_json::from_str(&text)?;
        p.validate()?;
        Ok(p)
    }

    /// Checks every documented parameter range; returns the first violation.
    pub fn validate(&self) -> Result<(), ParamError> {
        fn req(
            ok: bool,
            field: &'static str,
            value: f64,
            requirement: &'static str,
        ) -> Result<(), ParamError> {
            if ok {
                Ok(())
            } else {
                Err(ParamError::Invalid {
                    field,
                    value,
                    requirement,
                })
            }
        }

        req(
            self.n1.is_finite() && self.n1 >= 1.0,
            "N1",
            self.n1,
            "N1 >= 1",
        )?;
        req(
            self.n2.is_finite() && self.n2 >= 1.0,
            "N2",
            self.n2,
            "N2 >= 1",
        )?;
        req(
            self.q.is_finite() && self.q > 1.0,
            "q",
            self.q,
            "q > 1 (stiff gels use q = N1)",
        )?;
        req(
            self.s.is_finite() && self.s > 0.0,
            "s",
            self.s,
            "s > 1, or s in (0, 1] for the polysaccharide regime",
        )?;
        req(self.r.is_finite() && self.r >= 1.0, "r", self.r, "r >= 1")?;
        req(
            self.alpha0.is_finite() && self.alpha0 > 0.0,
            "alpha0",
            self.alpha0,
            "alpha0 > 0",
        )?;
        req(
            self.beta0.is_finite() && self.beta0 > 0.0,
            "beta0",
            self.beta0,
            "beta0 > 0",
        )?;
        req(
            self.beta1.is_finite() && self.beta1 > 0.0,
            "beta1",
            self.beta1,
            "beta1 > 0",
        )?;
        req(
            self.phi_i.is_finite() && self.phi_i > 0.0 && self.phi_i < 1.0,
            "phiI",
            self.phi_i,
            "0 < phiI < 1",
        )?;
        req(self.chi0.is_finite(), "chi0", self.chi0, "finite")?;
        req(self.chi1.is_finite(), "chi1", self.chi1, "finite")?;
        req(self.chi2.is_finite(), "chi2", self.chi2, "finite")?;
        req(
            self.beta_drag.is_finite() && self.beta_drag >= 0.0,
            "betaDrag",
            self.beta_drag,
            "betaDrag >= 0",
        )?;
        req(
            self.k_t.is_finite() && self.k_t > 0.0,
            "kT",
            self.k_t,
            "kT > 0",
        )?;
        req(
            self.phi_clamp_min.is_finite() && self.phi_clamp_min > 0.0 && self.phi_clamp_min < 0.01,
            "phiClampMin",
            self.phi_clamp_min,
            "0 < phiClampMin < 0.01",
        )?;
        Ok(())
    }

    /// True when s ≤ 1, the soft regime in which G′ may change sign.
    pub fn is_polysaccharide_regime(&self) -> bool {
        self.s <= 1.0
    }
}
