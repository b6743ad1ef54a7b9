// SPDX-License-Identifier: MIT OR Apache-2.0

//! Hyperbolic structure of the swelling system: flux Jacobian,
//! eigendecomposition, well-posedness diagnostics, and equilibrium solves.
//!
//! In the mass-Lagrangian variables (ψ, u) the quasilinear form of the
//! system carries the Jacobian
//!
//! ```text
//!     A(ψ, u) = [ −u/ψ²               (1−ψ)/ψ  ]
//!               [ (u² + G′(1/ψ))/ψ³   −u/ψ²    ]
//! ```
//!
//! with eigenvalues and (left/right) eigenvectors
//!
//! ```text
//!     λ_{1,2} = (−u ∓ √D)/ψ²,      D = (u² + G′(1/ψ))(1 − ψ) > 0,
//!     ℓ = (1/ψ) √((u² + G′)/(1−ψ)),   ρ = 1/ℓ = ψ √((1−ψ)/(u² + G′)),
//!     L₁ = (+ℓ, 1),  L₂ = (−ℓ, 1),   R₁ = (+ρ, 1)ᵀ,  R₂ = (−ρ, 1)ᵀ,
//! ```
//!
//! normalized so Lᵢ·Rᵢ = 2 and Lᵢ·Rⱼ = 0 (i ≠ j). Three conditions grade
//! the state:
//!
//! - **hyperbolic**: u² + G′(1/ψ) < 0 ([`EigenSystem::hyp_margin`] > 0);
//! - **non-characteristic boundary**: u² < ((1−ψ)/ψ) G′(1/ψ)
//!   ([`EigenSystem::nc_margin`] > 0) — the walls are never tangent to a
//!   characteristic, so λ₁ < 0 < λ₂;
//! - **uniform Lopatinskii ratio**: [`EigenSystem::ukl_gamma`] = ρ, whose
//!   uniform positive lower bound is what the boundary-value analysis
//!   requires of a family of states.
//!
//! Equilibria: [`find_phi_critical`] locates the sign changes of G′ (loss
//! of hyperbolicity at rest), and [`solve_phi_star`] the roots of the
//! saturation residual (swelling equilibria, flagged admissible when
//! G′(φ*) < 0).

use crate::constitutive::{self, ConstitutiveError};
use crate::params::ParameterSet;
use crate::rootfind;
use crate::tolerances;
use thiserror::Error;

/// Hyperbolic-analysis failure.
#[derive(Debug, Error)]
pub enum HyperbolicityError {
    /// The state violates u² + G′(1/ψ) < 0; `margin` is the (non-positive)
    /// value of −(u² + G′(1/ψ)) at the offending state.
    #[error(
        "state (psi = {psi}, u = {u}) is not hyperbolic: margin \
         -(u^2 + G'(1/psi)) = {margin} <= 0"
    )]
    NotHyperbolic { psi: f64, u: f64, margin: f64 },
    /// ψ ≤ 1 or 1/ψ outside the stress clamp domain.
    #[error(transparent)]
    Constitutive(#[from] ConstitutiveError),
    /// A root scan found no sign change on the given interval.
    #[error("no root in [{lo}, {hi}] ({n}-point scan)")]
    NoRoot { lo: f64, hi: f64, n: usize },
}

/// Checks ψ > 1 and that φ = 1/ψ lies in the stress clamp domain.
fn check_psi(p: &ParameterSet, psi: f64, func: &'static str) -> Result<(), HyperbolicityError> {
    let hi = 1.0 / p.phi_clamp_min;
    if !(psi > 1.0 && psi < hi) {
        return Err(HyperbolicityError::Constitutive(
            ConstitutiveError::OutOfDomain {
                func,
                value: psi,
                lo: 1.0,
                hi,
            },
        ));
    }
    Ok(())
}

/// Flux Jacobian A(ψ, u) of the quasilinear system (row-major 2×2).
pub fn jacobian(p: &ParameterSet, psi: f64, u: f64) -> Result<[[f64; 2]; 2], HyperbolicityError> {
    check_psi(p, psi, "jacobian")?;
    let dg = constitutive::dg(p, 1.0 / psi)?;
    let psi2 = psi * psi;
    Ok([
        [-u / psi2, (1.0 - psi) / psi],
        [(u * u + dg) / (psi2 * psi), -u / psi2],
    ])
}

/// Eigenstructure of A(ψ, u) at a hyperbolic state.
#[derive(Debug, Clone, Copy)]
pub struct EigenSystem {
    /// Slower (left-going at a non-characteristic state) eigenvalue.
    pub lambda1: f64,
    /// Faster (right-going) eigenvalue.
    pub lambda2: f64,
    /// Left eigenvector for λ₁, normalized so L₁·R₁ = 2.
    pub l1: [f64; 2],
    /// Left eigenvector for λ₂.
    pub l2: [f64; 2],
    /// Right eigenvector for λ₁.
    pub r1: [f64; 2],
    /// Right eigenvector for λ₂.
    pub r2: [f64; 2],
    /// −(u² + G′(1/ψ)): positive exactly on hyperbolic states.
    pub hyp_margin: f64,
    /// ((1−ψ)/ψ)G′(1/ψ) − u²: positive exactly on non-characteristic states.
    pub nc_margin: f64,
    /// Lopatinskii ratio ρ = ψ√((1−ψ)/(u²+G′)) (also the η-component scale
    /// of the right eigenvectors).
    pub ukl_gamma: f64,
}

/// Computes the eigensystem; fails with [`HyperbolicityError::NotHyperbolic`]
/// (carrying the violated margin) off the hyperbolic region.
pub fn eigensystem(p: &ParameterSet, psi: f64, u: f64) -> Result<EigenSystem, HyperbolicityError> {
    check_psi(p, psi, "eigensystem")?;
    let dg = constitutive::dg(p, 1.0 / psi)?;
    let hyp_margin = -(u * u + dg);
    if !(hyp_margin > 0.0) {
        return Err(HyperbolicityError::NotHyperbolic {
            psi,
            u,
            margin: hyp_margin,
        });
    }
    let psi2 = psi * psi;
    // D = (u² + G′)(1−ψ) = hyp_margin · (ψ−1) — both factors of the original
    // product are negative, so this form is positive without cancellation.
    let disc_sqrt = (hyp_margin * (psi - 1.0)).sqrt();
    let lambda1 = (-u - disc_sqrt) / psi2;
    let lambda2 = (-u + disc_sqrt) / psi2;
    let rho = psi * ((psi - 1.0) / hyp_margin).sqrt();
    let ell = 1.0 / rho;
    let nc_margin = (1.0 - psi) / psi * dg - u * u;
    Ok(EigenSystem {
        lambda1,
        lambda2,
        l1: [ell, 1.0],
        l2: [-ell, 1.0],
        r1: [rho, 1.0],
        r2: [-rho, 1.0],
        hyp_margin,
        nc_margin,
        ukl_gamma: rho,
    })
}

/// Well-posedness flags of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    /// u² + G′(1/ψ) < 0.
    pub hyperbolic: bool,
    /// u² < ((1−ψ)/ψ) G′(1/ψ) (implies λ₁ < 0 < λ₂).
    pub non_characteristic: bool,
    /// Lopatinskii ratio, defined only on hyperbolic states.
    pub ukl_gamma: Option<f64>,
}

/// Evaluates the three well-posedness conditions at (ψ, u). Only domain
/// violations are errors; non-hyperbolic states report `false` flags.
pub fn check_conditions(
    p: &ParameterSet,
    psi: f64,
    u: f64,
) -> Result<ConditionReport, HyperbolicityError> {
    check_psi(p, psi, "check_conditions")?;
    let dg = constitutive::dg(p, 1.0 / psi)?;
    let hyp_margin = -(u * u + dg);
    let nc_margin = (1.0 - psi) / psi * dg - u * u;
    let hyperbolic = hyp_margin > 0.0;
    Ok(ConditionReport {
        hyperbolic,
        non_characteristic: nc_margin > 0.0,
        ukl_gamma: if hyperbolic {
            Some(psi * ((psi - 1.0) / hyp_margin).sqrt())
        } else {
            None
        },
    })
}

/// Scans [lo, hi] with at least 100 points (more if requested) for sign
/// changes of `f`, then refines each bracket by bisection (60 halvings)
/// plus 3 guarded Newton steps using a finite-difference derivative.
/// Returns ascending roots; consecutive duplicates (a root landing exactly
/// on a scan node) are merged.
fn scan_roots<F: Fn(f64) -> f64 + Copy>(f: F, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(100);
    let mut roots: Vec<f64> = Vec::new();
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    for k in 1..=n {
        let x = lo + (hi - lo) * k as f64 / n as f64;
        let fx = f(x);
        // signum-based bracket test: ±∞ carry usable signs; an exact zero on
        // a node brackets on both sides and is merged below.
        if prev_f.signum() != fx.signum() && !prev_f.is_nan() && !fx.is_nan() {
            let df = rootfind::fd_derivative(f, tolerances::FD_STEP);
            let root = rootfind::solve_bracketed(&f, &df, prev_x, x);
            let is_dup = roots
                .last()
                .is_some_and(|r| (r - root.x).abs() < 10.0 * tolerances::BISECTION_WIDTH);
            if !is_dup {
                roots.push(root.x);
            }
        }
        prev_x = x;
        prev_f = fx;
    }
    roots
}

/// Critical volume fractions: roots of G′ on [lo, hi] (ascending).
///
/// At a critical fraction the rest state changes type (hyperbolic ↔
/// elliptic). The scan uses max(n, 100) points; a returned empty vector
/// means G′ has one sign on the whole interval (as for the stiff polymer
/// set). The interval must lie inside the clamp domain.
pub fn find_phi_critical(
    p: &ParameterSet,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<Vec<f64>, HyperbolicityError> {
    constitutive::dg(p, lo)?;
    constitutive::dg(p, hi)?;
    let f = |phi: f64| constitutive::dg(p, phi).unwrap_or(f64::NAN);
    Ok(scan_roots(f, lo, hi, n))
}

/// A swelling equilibrium: root of the saturation residual.
#[derive(Debug, Clone, Copy)]
pub struct PhiStarRoot {
    /// Equilibrium volume fraction φ*.
    pub phi_star: f64,
    /// ψ* = 1/φ*.
    pub psi_star: f64,
    /// G′(φ*) < 0: the rest state at φ* is strictly hyperbolic and the flux
    /// potential is monotone around it.
    pub admissible: bool,
    /// Saturation residual at the returned root (quality of the solve).
    pub residual: f64,
}

/// Solves the saturation condition on [lo, hi]: all roots, ascending, each
/// flagged admissible when G′(φ*) < 0. Errors with
/// [`HyperbolicityError::NoRoot`] when the scan finds no sign change.
pub fn solve_phi_star(
    p: &ParameterSet,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<Vec<PhiStarRoot>, HyperbolicityError> {
    constitutive::saturation_residual(p, lo)?;
    constitutive::saturation_residual(p, hi)?;
    let f = |phi: f64| constitutive::saturation_residual(p, phi).unwrap_or(f64::NAN);
    let roots = scan_roots(f, lo, hi, n);
    if roots.is_empty() {
        return Err(HyperbolicityError::NoRoot {
            lo,
            hi,
            n: n.max(100),
        });
    }
    roots
        .into_iter()
        .map(|phi_star| {
            let residual = constitutive::saturation_residual(p, phi_star)?;
            let dg = constitutive::dg(p, phi_star)?;
            Ok(PhiStarRoot {
                phi_star,
                psi_star: 1.0 / phi_star,
                admissible: dg < 0.0,
                residual,
            })
        })
        .collect()
}

/// One grid point of a state-space scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub phi: f64,
    pub u: f64,
    /// −(u² + G′(1/ψ)) at ψ = 1/φ.
    pub hyp_margin: f64,
    /// ((1−ψ)/ψ)G′(1/ψ) − u².
    pub nc_margin: f64,
    /// Lopatinskii ratio; `None` where the state is not hyperbolic.
    pub ukl_gamma: Option<f64>,
}

/// Evaluates the well-posedness margins on an (φ, u) grid (φ outer loop,
/// u inner, both ascending — the CSV row order of the `map` command).
pub fn scan_region(
    p: &ParameterSet,
    phi_range: (f64, f64),
    u_range: (f64, f64),
    n_phi: usize,
    n_u: usize,
) -> Result<Vec<ScanRow>, HyperbolicityError> {
    let mut rows = Vec::with_capacity(n_phi * n_u);
    for i in 0..n_phi {
        let phi = if n_phi == 1 {
            phi_range.0
        } else {
            phi_range.0 + (phi_range.1 - phi_range.0) * i as f64 / (n_phi - 1) as f64
        };
        let dg = constitutive::dg(p, phi)?;
        let psi = 1.0 / phi;
        for j in 0..n_u {
            let u = if n_u == 1 {
                u_range.0
            } else {
                u_range.0 + (u_range.1 - u_range.0) * j as f64 / (n_u - 1) as f64
            };
            let hyp_margin = -(u * u + dg);
            let nc_margin = (1.0 - psi) / psi * dg - u * u;
            rows.push(ScanRow {
                phi,
                u,
                hyp_margin,
                nc_margin,
                ukl_gamma: if hyp_margin > 0.0 {
                    Some(psi * ((psi - 1.0) / hyp_margin).sqrt())
                } else {
                    None
                },
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::EIGEN_IDENTITY_ABS;

    fn mat_vec(a: &[[f64; 2]; 2], v: &[f64; 2]) -> [f64; 2] {
        [
            a[0][0] * v[0] + a[0][1] * v[1],
            a[1][0] * v[0] + a[1][1] * v[1],
        ]
    }

    fn vec_mat(v: &[f64; 2], a: &[[f64; 2]; 2]) -> [f64; 2] {
        [
            v[0] * a[0][0] + v[1] * a[1][0],
            v[0] * a[0][1] + v[1] * a[1][1],
        ]
    }

    /// Full identity battery at one state; scale-aware absolute tolerance.
    fn assert_eigen_identities(p: &ParameterSet, psi: f64, u: f64) {
        let a = jacobian(p, psi, u).unwrap();
        let e = eigensystem(p, psi, u).unwrap();
        let tol = EIGEN_IDENTITY_ABS;
        // Normalization and bi-orthogonality.
        let dots = [
            (e.l1[0] * e.r1[0] + e.l1[1] * e.r1[1], 2.0, "L1.R1"),
            (e.l2[0] * e.r2[0] + e.l2[1] * e.r2[1], 2.0, "L2.R2"),
            (e.l1[0] * e.r2[0] + e.l1[1] * e.r2[1], 0.0, "L1.R2"),
            (e.l2[0] * e.r1[0] + e.l2[1] * e.r1[1], 0.0, "L2.R1"),
        ];
        for (got, want, name) in dots {
            assert!(
                (got - want).abs() < tol,
                "{name} = {got}, want {want} (psi={psi}, u={u})"
            );
        }
        // Eigen relations.
        for (lam, l, r) in [(e.lambda1, e.l1, e.r1), (e.lambda2, e.l2, e.r2)] {
            let ar = mat_vec(&a, &r);
            let la = vec_mat(&l, &a);
            for k in 0..2 {
                assert!(
                    (ar[k] - lam * r[k]).abs() < tol,
                    "A.R component {k}: {} vs {}",
                    ar[k],
                    lam * r[k]
                );
                assert!(
                    (la[k] - lam * l[k]).abs() < tol,
                    "L.A component {k}: {} vs {}",
                    la[k],
                    lam * l[k]
                );
            }
        }
        // Spectral consistency with det/trace.
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let tr = a[0][0] + a[1][1];
        assert!((e.lambda1 * e.lambda2 - det).abs() < tol, "det mismatch");
        assert!((e.lambda1 + e.lambda2 - tr).abs() < tol, "trace mismatch");
        // Ordering from the non-characteristic condition.
        if e.nc_margin > 0.0 {
            assert!(
                e.lambda1 < 0.0 && 0.0 < e.lambda2,
                "non-characteristic state must have lambda1 < 0 < lambda2"
            );
        }
    }

    #[test]
    fn eigen_identities_on_deterministic_sweep() {
        let p = ParameterSet::polymer();
        for &psi in &[1.05, 1.110151488, 1.3, 2.0, 4.0] {
            for &u in &[0.0, 0.1, -0.25, 0.6] {
                // Skip states pushed out of hyperbolicity by large |u|.
                if eigensystem(&p, psi, u).is_ok() {
                    assert_eigen_identities(&p, psi, u);
                }
            }
        }
    }

    #[test]
    fn not_hyperbolic_error_carries_margin() {
        // The soft set has G′ > 0 near φ = 0.8: rest states there are
        // elliptic.
        let p = ParameterSet::polysaccharide();
        let psi = 1.25; // φ = 0.8
        match eigensystem(&p, psi, 0.0) {
            Err(HyperbolicityError::NotHyperbolic { margin, .. }) => {
                assert!(margin <= 0.0, "margin = {margin}");
            }
            other => panic!("expected NotHyperbolic, got {other:?}"),
        }
        let report = check_conditions(&p, psi, 0.0).unwrap();
        assert!(!report.hyperbolic);
        assert!(report.ukl_gamma.is_none());
    }

    #[test]
    fn large_velocity_breaks_hyperbolicity() {
        let p = ParameterSet::polymer();
        let psi = 1.2;
        let dg0 = constitutive::dg(&p, 1.0 / psi).unwrap();
        let u_break = (-dg0).sqrt() * 1.01;
        assert!(eigensystem(&p, psi, 0.0).is_ok());
        assert!(matches!(
            eigensystem(&p, psi, u_break),
            Err(HyperbolicityError::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn jacobian_rejects_unswollen_states() {
        let p = ParameterSet::polymer();
        for bad in [1.0, 0.5, -2.0] {
            assert!(jacobian(&p, bad, 0.0).is_err(), "psi = {bad} accepted");
        }
    }

    #[test]
    fn polymer_has_no_critical_fraction() {
        let p = ParameterSet::polymer();
        let roots = find_phi_critical(&p, 0.01, 0.99, 1000).unwrap();
        assert!(roots.is_empty(), "unexpected critical fractions {roots:?}");
    }

    #[test]
    fn polysaccharide_critical_fractions_are_stable() {
        let p = ParameterSet::polysaccharide();
        let coarse = find_phi_critical(&p, 0.01, 0.99, 500).unwrap();
        assert!(
            coarse.len() >= 2,
            "expected >= 2 critical fractions, got {coarse:?}"
        );
        // Ascending.
        for w in coarse.windows(2) {
            assert!(w[0] < w[1]);
        }
        // Residuals at machine-level.
        for &r in &coarse {
            let v = constitutive::dg(&p, r).unwrap();
            assert!(v.abs() < 1e-8, "dG({r}) = {v}");
        }
        // Doubling the scan may add roots but never loses confirmed ones.
        let fine = find_phi_critical(&p, 0.01, 0.99, 1000).unwrap();
        for &r in &coarse {
            let moved = fine
                .iter()
                .map(|&x| (x - r).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(moved < 1e-10, "root {r} moved by {moved} under refinement");
        }
    }

    #[test]
    fn polymer_equilibrium_golden_values() {
        // Golden values recorded from the first verified solve of the
        // saturation condition for the stiff reference set.
        let p = ParameterSet::polymer();
        let roots = solve_phi_star(&p, 0.01, 0.99, 2000).unwrap();
        assert_eq!(roots.len(), 1, "expected a single equilibrium: {roots:?}");
        let r = &roots[0];
        assert!(
            (r.phi_star - 0.900_777_966_214).abs() < 1e-9,
            "phi* = {}",
            r.phi_star
        );
        assert!(
            (r.psi_star - 1.110_151_488_499).abs() < 1e-9,
            "psi* = {}",
            r.psi_star
        );
        assert!(r.admissible);
        assert!(r.residual.abs() < crate::tolerances::ROOT_RESIDUAL_ABS);
    }

    #[test]
    fn polysaccharide_has_no_equilibrium_in_range() {
        let p = ParameterSet::polysaccharide();
        assert!(matches!(
            solve_phi_star(&p, 0.01, 0.99, 2000),
            Err(HyperbolicityError::NoRoot { .. })
        ));
    }

    #[test]
    fn scan_region_margins_match_pointwise_checks() {
        let p = ParameterSet::polysaccharide();
        let rows = scan_region(&p, (0.3, 0.9), (-0.1, 0.1), 7, 5).unwrap();
        assert_eq!(rows.len(), 35);
        for row in &rows {
            let report = check_conditions(&p, 1.0 / row.phi, row.u).unwrap();
            assert_eq!(report.hyperbolic, row.hyp_margin > 0.0);
            assert_eq!(report.non_characteristic, row.nc_margin > 0.0);
            match (report.ukl_gamma, row.ukl_gamma) {
                (Some(a), Some(b)) => assert!((a - b).abs() < 1e-14),
                (None, None) => {}
                other => panic!("ukl mismatch {other:?}"),
            }
        }
        // The soft set's elliptic band must show up in the scan.
        assert!(rows.iter().any(|r| r.hyp_margin < 0.0));
        assert!(rows.iter().any(|r| r.hyp_margin > 0.0));
    }
}
