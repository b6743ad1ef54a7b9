// SPDX-License-Identifier: MIT OR Apache-2.0

//! Acceptance gate: one test per shipped claim, numbered and self-timing.
//!
//! Each test exercises the toolkit the way a user would (through the
//! binary where the claim is about artifacts, in-process where it is about
//! the mathematics), asserts the claim at its stated tolerance, checks its
//! wall-clock budget, and prints one `[PASS] criterion N …` line with the
//! measured quantities. Run
//!
//! ```text
//! cargo test --test acceptance -- --nocapture
//! ```
//!
//! to see the lines; a failing criterion fails its test, so the suite's
//! pass/fail status is the gate.
//!
//! Calibrated constants: two claims compare against a finer-grid
//! calibration run (interface-tracking agreement, energy monotonicity
//! slack). The calibration happens inside the test, once, on an n = 1024
//! run of the same configuration, and the derived constant is then reused
//! for the coarse-grid assertion — so the constants track the scheme
//! instead of being frozen magic numbers.

use gelsim_core::characteristics;
use gelsim_core::constitutive;
use gelsim_core::hyperbolicity::{self, EigenSystem};
use gelsim_core::params::ParameterSet;
use gelsim_core::solver::{self, Model};
use gelsim_core::tolerances;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

// ---------------------------------------------------------------------------
// Harness helpers
// ---------------------------------------------------------------------------

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gelsim"))
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .ancestors()
        .nth(2)
        .expect("workspace root")
        .to_path_buf()
}

fn polymer_params_file() -> String {
    let p = workspace_root().join("params/polymer.json");
    assert!(
        p.is_file(),
        "shipped parameter file missing: {}",
        p.display()
    );
    p.display().to_string()
}

fn polysaccharide_params_file() -> String {
    let p = workspace_root().join("params/polysaccharide.json");
    assert!(
        p.is_file(),
        "shipped parameter file missing: {}",
        p.display()
    );
    p.display().to_string()
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "command {:?} failed:\nstderr: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn read_to_string(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

/// Parses a CSV with an expected header into per-row string fields.
fn read_csv(path: &Path, expected_header: &str) -> Vec<Vec<String>> {
    let content = read_to_string(path);
    let mut lines = content.lines();
    assert_eq!(lines.next(), Some(expected_header), "{}", path.display());
    lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn f(field: &str) -> f64 {
    field
        .parse()
        .unwrap_or_else(|e| panic!("bad float {field:?}: {e}"))
}

fn budget(name: &str, started: Instant, limit: Duration) -> f64 {
    let elapsed = started.elapsed();
    assert!(
        elapsed < limit,
        "{name} exceeded its runtime budget: {elapsed:.2?} >= {limit:.2?}"
    );
    elapsed.as_secs_f64()
}

// ---------------------------------------------------------------------------
// Shared fixture: the small-amplitude polymer run at two resolutions
// ---------------------------------------------------------------------------

struct RunArtifacts {
    _tmp: tempfile::TempDir,
    dir: PathBuf,
}

static SMALL_WAVE_256: OnceLock<RunArtifacts> = OnceLock::new();
static SMALL_WAVE_1024: OnceLock<RunArtifacts> = OnceLock::new();

/// ε = 1e-3 cosine data, tEnd = 5, default drag — the configuration the
/// conservation, geometry, and dissipation criteria all reference.
fn small_wave_run(n: usize) -> &'static RunArtifacts {
    let slot = match n {
        256 => &SMALL_WAVE_256,
        1024 => &SMALL_WAVE_1024,
        _ => unreachable!("unexpected fixture resolution {n}"),
    };
    slot.get_or_init(|| {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = tmp.path().join("sim.json");
        fs::write(
            &cfg,
            serde_json::json!({
                "n": n,
                "cfl": 0.45,
                "tEnd": 5.0,
                "outputEvery": if n == 256 { 500 } else { 2000 },
                "scheme": "HLL",
                "profile": { "type": "cosine", "epsEta": 1e-3, "epsU": 1e-3 }
            })
            .to_string(),
        )
        .unwrap();
        let dir = tmp.path().join("run");
        run_ok(&[
            "simulate",
            "--params",
            &polymer_params_file(),
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ]);
        RunArtifacts { _tmp: tmp, dir }
    })
}

const DIAG_HEADER: &str = "t,mass,energy,sup_eta,sup_u,sup_eta_x,sup_u_x";

/// Largest time step taken, from the per-step diagnostics times.
fn max_dt(diag: &[Vec<String>]) -> f64 {
    diag.windows(2)
        .map(|w| f(&w[1][0]) - f(&w[0][0]))
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Criterion 1 — stiff-network stress curves: G' < 0 on the whole range
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_polymer_stress_derivative_is_negative_everywhere() {
    let started = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("curves");
    run_ok(&[
        "curves",
        "--params",
        &polymer_params_file(),
        "--out",
        out.to_str().unwrap(),
        "--phi-min",
        "0.01",
        "--phi-max",
        "0.99",
        "--n",
        "1000",
    ]);
    let rows = read_csv(&out.join("curves.csv"), "phi,G,dG");
    assert_eq!(rows.len(), 1000);
    for row in &rows {
        let dg = f(&row[2]);
        assert!(
            dg < 0.0,
            "G' must be negative on the whole scan, got {dg} at phi = {}",
            row[0]
        );
    }
    let secs = budget("criterion 1", started, Duration::from_secs(1));
    println!("[PASS] criterion 1: polymer G' < 0 at all 1000 scan points ({secs:.2}s < 1s)");
}

// ---------------------------------------------------------------------------
// Criterion 2 — soft-network mixed type: G' changes sign; roots are genuine
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_polysaccharide_critical_points_exist_and_are_sharp() {
    let started = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let params_file = polysaccharide_params_file();

    let curves_out = tmp.path().join("curves");
    run_ok(&[
        "curves",
        "--params",
        &params_file,
        "--out",
        curves_out.to_str().unwrap(),
        "--phi-min",
        "0.01",
        "--phi-max",
        "0.99",
        "--n",
        "1000",
    ]);
    let rows = read_csv(&curves_out.join("curves.csv"), "phi,G,dG");
    let sign_changes = rows
        .windows(2)
        .filter(|w| f(&w[0][2]).signum() != f(&w[1][2]).signum())
        .count();
    assert!(
        sign_changes >= 2,
        "expected at least 2 sign changes of G', found {sign_changes}"
    );

    let roots_out = tmp.path().join("roots");
    run_ok(&[
        "roots",
        "--params",
        &params_file,
        "--out",
        roots_out.to_str().unwrap(),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&read_to_string(&roots_out.join("roots.json"))).unwrap();
    let critical: Vec<f64> = report["phi_critical"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!(
        critical.len() >= 2,
        "expected at least 2 critical volume fractions, got {critical:?}"
    );
    let p = ParameterSet::polysaccharide();
    for &phi_c in &critical {
        let residual = constitutive::dg(&p, phi_c).unwrap().abs();
        assert!(
            residual < 1e-8,
            "critical point {phi_c} has |G'| = {residual:.3e} >= 1e-8"
        );
    }
    let secs = budget("criterion 2", started, Duration::from_secs(1));
    println!(
        "[PASS] criterion 2: polysaccharide G' has {sign_changes} sign changes, \
         {} critical points with |G'| < 1e-8 ({secs:.2}s < 1s)",
        critical.len()
    );
}

// ---------------------------------------------------------------------------
// Criterion 3 — eigen-structure identities on random states; flux Jacobian
// ---------------------------------------------------------------------------

fn matrix_a(p: &ParameterSet, psi: f64, u: f64) -> [[f64; 2]; 2] {
    let dg = constitutive::dg(p, 1.0 / psi).unwrap();
    [
        [-u / (psi * psi), (1.0 - psi) / psi],
        [(u * u + dg) / (psi * psi * psi), -u / (psi * psi)],
    ]
}

#[test]
fn criterion_03_eigen_identities_and_flux_jacobian() {
    let started = Instant::now();
    let tol = tolerances::EIGEN_IDENTITY_ABS;
    for (p, seed) in [
        (ParameterSet::polymer(), 0xacce_0001_u64),
        (ParameterSet::polysaccharide(), 0xacce_0002),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tested = 0;
        while tested < 1000 {
            let phi = rng.gen_range(0.05..0.98);
            let dg = match constitutive::dg(&p, phi) {
                Ok(v) if v < 0.0 && v.is_finite() => v,
                _ => continue,
            };
            let u_max = (-dg).sqrt() * 0.9;
            let u = rng.gen_range(-u_max..u_max);
            let psi = 1.0 / phi;
            let e: EigenSystem = hyperbolicity::eigensystem(&p, psi, u).unwrap();
            let a = matrix_a(&p, psi, u);
            for (lambda, l, r) in [(e.lambda1, e.l1, e.r1), (e.lambda2, e.l2, e.r2)] {
                for k in 0..2 {
                    let ar = a[k][0] * r[0] + a[k][1] * r[1];
                    assert!((ar - lambda * r[k]).abs() < tol, "A·R ≠ λR at ({psi}, {u})");
                    let la = l[0] * a[0][k] + l[1] * a[1][k];
                    assert!((la - lambda * l[k]).abs() < tol, "L·A ≠ λL at ({psi}, {u})");
                }
            }
            assert!((e.l1[0] * e.r1[0] + e.l1[1] * e.r1[1] - 2.0).abs() < tol);
            assert!((e.l2[0] * e.r2[0] + e.l2[1] * e.r2[1] - 2.0).abs() < tol);
            assert!((e.l1[0] * e.r2[0] + e.l1[1] * e.r2[1]).abs() < tol);
            assert!((e.l2[0] * e.r1[0] + e.l2[1] * e.r1[1]).abs() < tol);
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            let tr = a[0][0] + a[1][1];
            assert!((e.lambda1 * e.lambda2 - det).abs() < tol, "λ₁λ₂ ≠ det A");
            assert!((e.lambda1 + e.lambda2 - tr).abs() < tol, "λ₁+λ₂ ≠ tr A");
            tested += 1;
        }
    }

    // Flux Jacobian: central differences at h = 1e-6 against the closed
    // form, relative with a unit floor (two entries are O(u) and pass
    // through zero, where a bare relative error is undefined).
    let p = ParameterSet::polymer();
    let model = Model::from_params(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0003);
    let h = 1e-6;
    for _ in 0..1000 {
        let psi = model.psi_star + rng.gen_range(-0.25..1.0) * (model.psi_star - 1.0);
        let u = rng.gen_range(-0.05..0.05);
        let a = matrix_a(&p, psi, u);
        let fp = model.flux(psi + h, u).unwrap();
        let fm = model.flux(psi - h, u).unwrap();
        let gp = model.flux(psi, u + h).unwrap();
        let gm = model.flux(psi, u - h).unwrap();
        for k in 0..2 {
            let d_psi = (fp[k] - fm[k]) / (2.0 * h);
            let d_u = (gp[k] - gm[k]) / (2.0 * h);
            assert!(
                (d_psi - a[k][0]).abs() / a[k][0].abs().max(1.0) < 1e-6,
                "flux Jacobian ∂f{k}/∂ψ off at ({psi}, {u}): {d_psi} vs {}",
                a[k][0]
            );
            assert!(
                (d_u - a[k][1]).abs() / a[k][1].abs().max(1.0) < 1e-6,
                "flux Jacobian ∂f{k}/∂u off at ({psi}, {u}): {d_u} vs {}",
                a[k][1]
            );
        }
    }
    let secs = budget("criterion 3", started, Duration::from_secs(5));
    println!(
        "[PASS] criterion 3: eigen identities on 2×1000 random states within 1e-10, \
         flux Jacobian within 1e-6 relative on 1000 states ({secs:.2}s < 5s)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 4 — derivative oracles at random points
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_derivative_oracles() {
    let started = Instant::now();
    for (p, seed) in [
        (ParameterSet::polymer(), 0xacce_0004_u64),
        (ParameterSet::polysaccharide(), 0xacce_0005),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tested = 0;
        while tested < 100 {
            let phi = rng.gen_range(0.05..0.95);
            let analytic = match constitutive::dg(&p, phi) {
                // Keep the target bounded away from zero: at a sign change
                // both sides vanish and relative error is noise.
                Ok(v) if v.is_finite() && v.abs() > 1e-2 => v,
                _ => continue,
            };
            let h = 1e-6;
            let fd = (constitutive::g(&p, phi + h).unwrap()
                - constitutive::g(&p, phi - h).unwrap())
                / (2.0 * h);
            let rel = (fd - analytic).abs() / analytic.abs();
            assert!(rel < 1e-6, "G' oracle at phi={phi}: rel {rel:.3e}");
            tested += 1;
        }
    }

    // F'(ψ) = −G'(1/ψ)/ψ³ against differences of the integral-defined F.
    // Step 5e-5 balances the quadrature's ~1e-10 evaluation error against
    // |F‴| ~ 2e3 near the equilibrium.
    let p = ParameterSet::polymer();
    let model = Model::from_params(&p).unwrap();
    let psi_star = model.psi_star;
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0006);
    let h = 5e-5;
    for _ in 0..100 {
        let psi = psi_star + rng.gen_range(-0.5..3.0) * (psi_star - 1.0) * 0.3;
        let analytic = constitutive::flux_potential_derivative(&p, psi).unwrap();
        let fd = (constitutive::flux_potential_quad(&p, psi + h, psi_star).unwrap()
            - constitutive::flux_potential_quad(&p, psi - h, psi_star).unwrap())
            / (2.0 * h);
        let rel = (fd - analytic).abs() / analytic.abs();
        assert!(rel < 1e-6, "F' oracle at psi={psi}: rel {rel:.3e}");
    }
    let secs = budget("criterion 4", started, Duration::from_secs(5));
    println!(
        "[PASS] criterion 4: G' and F' match finite differences within 1e-6 relative \
         at 100 random points each ({secs:.2}s < 5s)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 5 — exact equilibrium preservation
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_equilibrium_is_preserved_to_rounding() {
    let started = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let cfg = workspace_root().join("configs/equilibrium.json");
    run_ok(&[
        "simulate",
        "--params",
        &polymer_params_file(),
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let diag = read_csv(&out.join("diagnostics.csv"), DIAG_HEADER);
    assert!(
        f(&diag.last().unwrap()[0]) >= 10.0 - 1e-9,
        "run ended early"
    );
    let mut worst: f64 = 0.0;
    for row in &diag {
        for sup in &row[3..7] {
            worst = worst.max(f(sup).abs());
        }
    }
    assert!(
        worst <= tolerances::EQUILIBRIUM_SUP_ABS,
        "equilibrium drifted: sup-norm {worst:.3e} > {:.0e}",
        tolerances::EQUILIBRIUM_SUP_ABS
    );
    let secs = budget("criterion 5", started, Duration::from_secs(30));
    println!(
        "[PASS] criterion 5: n=256 equilibrium run to t=10 keeps all sup-norms at \
         {worst:.1e} <= 1e-12 ({secs:.2}s < 30s)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 6 — mass conservation and interface geometry
// ---------------------------------------------------------------------------

/// Physical mass ∫φ dx by trapezoid over the reconstructed grid, including
/// the wall half-cells at the Dirichlet value ψ*.
fn physical_mass(psi_star: f64, psi: &[f64], dy: f64) -> f64 {
    let n = psi.len();
    let phi: Vec<f64> = psi.iter().map(|&s| 1.0 / s).collect();
    let phi_star = 1.0 / psi_star;
    let mut mass = 0.0;
    for j in 0..n - 1 {
        let dx = 0.5 * (psi[j] + psi[j + 1]) * dy;
        mass += 0.5 * (phi[j] + phi[j + 1]) * dx;
    }
    let w_left = 0.5 * (psi_star + psi[0]) * (0.5 * dy);
    let w_right = 0.5 * (psi_star + psi[n - 1]) * (0.5 * dy);
    mass + 0.5 * (phi_star + phi[0]) * w_left + 0.5 * (phi_star + phi[n - 1]) * w_right
}

#[test]
fn criterion_06_mass_and_interface_geometry() {
    let started = Instant::now();
    let coarse = small_wave_run(256);
    let fine = small_wave_run(1024);
    let psi_star = Model::from_params(&ParameterSet::polymer())
        .unwrap()
        .psi_star;

    // Physical mass at every recorded snapshot of the coarse run.
    let snaps = read_csv(&coarse.dir.join("snapshots.csv"), "t,y,psi,u");
    let mut by_time: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for row in &snaps {
        by_time.entry(row[0].clone()).or_default().push(f(&row[2]));
    }
    let mut worst_mass_defect: f64 = 0.0;
    for (t, psi) in &by_time {
        assert_eq!(psi.len(), 256, "snapshot at t={t} has wrong cell count");
        let defect = (physical_mass(psi_star, psi, 1.0 / 256.0) - 1.0).abs();
        worst_mass_defect = worst_mass_defect.max(defect);
    }
    assert!(
        worst_mass_defect < tolerances::MASS_DRIFT_ABS,
        "physical mass drifts by {worst_mass_defect:.3e} >= 1e-6"
    );

    // Interface agreement: calibrate c on the fine run, assert on the coarse.
    const IFACE_HEADER: &str = "t,S1,S2,domain_length_check";
    let defect_max = |dir: &Path| -> f64 {
        read_csv(&dir.join("interfaces.csv"), IFACE_HEADER)
            .iter()
            .map(|row| f(&row[3]).abs())
            .fold(0.0, f64::max)
    };
    let dt_fine = max_dt(&read_csv(&fine.dir.join("diagnostics.csv"), DIAG_HEADER));
    let dt_coarse = max_dt(&read_csv(&coarse.dir.join("diagnostics.csv"), DIAG_HEADER));
    // 4× headroom on the calibrated ratio so grid-to-grid wobble in the
    // prefactor cannot flake the assertion.
    let c = 4.0 * defect_max(&fine.dir) / (1.0 / 1024.0 + dt_fine);
    let bound = c * (1.0 / 256.0 + dt_coarse);
    let coarse_defect = defect_max(&coarse.dir);
    assert!(
        coarse_defect <= bound,
        "interface ODE vs reconstruction disagree: {coarse_defect:.3e} > \
         {bound:.3e} (c = {c:.3e})"
    );
    let secs = budget("criterion 6", started, Duration::from_secs(60));
    println!(
        "[PASS] criterion 6: physical mass within {worst_mass_defect:.1e} of 1 at every \
         snapshot; interface defect {coarse_defect:.2e} <= {bound:.2e} with c calibrated \
         at n=1024 ({secs:.2}s < 60s)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 7 — drag dissipates: smaller terminal |u|, energy non-increasing
// ---------------------------------------------------------------------------

/// Largest climb of the energy series above its running minimum.
fn energy_rise(diag: &[Vec<String>]) -> f64 {
    let mut running_min = f64::INFINITY;
    let mut rise: f64 = 0.0;
    for row in diag {
        let e = f(&row[2]);
        running_min = running_min.min(e);
        rise = rise.max(e - running_min);
    }
    rise
}

#[test]
fn criterion_07_drag_dissipates_velocity_and_energy() {
    let started = Instant::now();
    let damped = small_wave_run(256);
    let fine = small_wave_run(1024);

    // Undamped twin: identical config, drag coefficient zeroed.
    let tmp = tempfile::tempdir().unwrap();
    let mut p0 = ParameterSet::polymer();
    p0.beta_drag = 0.0;
    let params0 = tmp.path().join("polymer_nodrag.json");
    fs::write(&params0, serde_json::to_string_pretty(&p0).unwrap()).unwrap();
    let cfg = tmp.path().join("sim.json");
    fs::write(
        &cfg,
        serde_json::json!({
            "n": 256, "cfl": 0.45, "tEnd": 5.0, "outputEvery": 500,
            "scheme": "HLL",
            "profile": { "type": "cosine", "epsEta": 1e-3, "epsU": 1e-3 }
        })
        .to_string(),
    )
    .unwrap();
    let undamped_dir = tmp.path().join("run0");
    run_ok(&[
        "simulate",
        "--params",
        params0.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        undamped_dir.to_str().unwrap(),
    ]);

    let diag_damped = read_csv(&damped.dir.join("diagnostics.csv"), DIAG_HEADER);
    let diag_undamped = read_csv(&undamped_dir.join("diagnostics.csv"), DIAG_HEADER);
    let terminal_sup_u = |diag: &[Vec<String>]| f(&diag.last().unwrap()[4]);
    let (u_damped, u_undamped) = (terminal_sup_u(&diag_damped), terminal_sup_u(&diag_undamped));
    assert!(
        u_damped < u_undamped,
        "drag failed to shrink the terminal velocity: {u_damped:.3e} vs {u_undamped:.3e}"
    );

    // Energy monotonicity, up to boundary work resolved at first order: the
    // admissible climb is calibrated as 2× the climb of the n=1024 run of
    // the same configuration (the climb is grid-converged; the factor
    // absorbs prefactor wobble).
    let tol = 2.0 * energy_rise(&read_csv(&fine.dir.join("diagnostics.csv"), DIAG_HEADER));
    let rise = energy_rise(&diag_damped);
    assert!(
        rise <= tol,
        "energy climbs {rise:.3e} above its running minimum, allowed {tol:.3e}"
    );
    let secs = budget("criterion 7", started, Duration::from_secs(60));
    println!(
        "[PASS] criterion 7: terminal sup|u| {u_damped:.2e} (drag) < {u_undamped:.2e} \
         (no drag); energy rise {rise:.2e} <= calibrated {tol:.2e} ({secs:.2}s < 60s)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 8 — lifetime scaling across amplitudes
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_lifetime_grows_with_log_amplitude() {
    let started = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("scaling");
    let cfg = workspace_root().join("configs/scaling.json");
    run_ok(&[
        "scaling",
        "--params",
        &polymer_params_file(),
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let rows = read_csv(&out.join("lifetime.csv"), "eps,T_exit,reason");
    assert_eq!(rows.len(), 3);
    let eps: Vec<f64> = rows.iter().map(|r| f(&r[0])).collect();
    assert_eq!(eps, [1e-2, 1e-3, 1e-4]);
    let t_exit: Vec<f64> = rows.iter().map(|r| f(&r[1])).collect();
    for row in &rows {
        assert_eq!(
            row[2], "threshold",
            "run at eps={} did not cross 2ε",
            row[0]
        );
    }
    // ε decreasing down the rows means |log ε| increasing: exit times must
    // strictly increase in that order.
    assert!(
        t_exit[0] < t_exit[1] && t_exit[1] < t_exit[2],
        "exit times not strictly increasing in |log ε|: {t_exit:?}"
    );
    let fit: serde_json::Value =
        serde_json::from_str(&read_to_string(&out.join("fit.json"))).unwrap();
    let correlation = fit["correlation"].as_f64().expect("fit present");
    assert!(
        correlation >= tolerances::SCALING_MIN_CORRELATION,
        "T vs |log ε| correlation {correlation:.4} < {}",
        tolerances::SCALING_MIN_CORRELATION
    );
    let secs = budget("criterion 8", started, Duration::from_secs(600));
    println!(
        "[PASS] criterion 8: exit times {t_exit:?} strictly increasing, \
         correlation {correlation:.4} >= 0.9 ({secs:.2}s < 600s)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 9 — characteristic reflection geometry
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_traced_paths_obey_reflection_time_bounds() {
    let started = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("trace");
    let cfg_path = workspace_root().join("configs/trace.json");
    run_ok(&[
        "trace",
        "--params",
        &polymer_params_file(),
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);

    // Re-create the recorded run in-process to get the speed extremes and
    // the exact reflection times, then hold the CSVs to them.
    let cfg: serde_json::Value = serde_json::from_str(&read_to_string(&cfg_path)).unwrap();
    let sim: solver::SimConfig = serde_json::from_value(cfg["sim"].clone()).unwrap();
    let p = ParameterSet::polymer();
    let record = solver::run(&p, &sim).unwrap();
    let series = characteristics::sup_norm_series(&p, &record).unwrap();
    let (t1, t2) = (series.t1(), series.t2());
    assert!(t1 > 0.0 && t2 >= t1);
    let slack = 1e-9;

    let field = characteristics::SpeedField::new(&p, &record).unwrap();
    let anchors = cfg["anchors"].as_array().unwrap();
    let mut total_reflections = 0;
    for (k, anchor) in anchors.iter().enumerate() {
        let family = anchor["family"].as_u64().unwrap() as u8;
        let t = anchor["t"].as_f64().unwrap();
        let y = anchor["y"].as_f64().unwrap();
        let traced = characteristics::trace_characteristic(&field, family, t, y).unwrap();

        // Reflection taus from the artifact: rows where the family column
        // switches (the emitted point sits exactly on the wall and already
        // carries the post-switch family).
        let rows = read_csv(&out.join(format!("trace_{k}.csv")), "tau,xi,family");
        let mut csv_reflections = Vec::new();
        for w in rows.windows(2) {
            if w[0][2] != w[1][2] {
                csv_reflections.push(f(&w[1][0]));
            }
        }
        assert_eq!(
            csv_reflections.len(),
            traced.reflections.len(),
            "anchor {k}: artifact and in-process reflection counts differ"
        );
        for (a, b) in csv_reflections.iter().zip(&traced.reflections) {
            assert!(
                (a - b.tau).abs() < 1e-12,
                "anchor {k}: reflection time mismatch {a} vs {}",
                b.tau
            );
        }

        // Reflection-time inequalities against the recorded speed extremes:
        // the first reflection lies within one slowest transit of the
        // anchor; consecutive reflections are separated by one transit
        // (between fastest and slowest); the second-back reflection lies
        // within the two-transit window.
        let r: Vec<f64> = traced.reflections.iter().map(|x| x.tau).collect();
        if let Some(&r1) = r.first() {
            assert!(t - r1 >= -slack && t - r1 <= t2 + slack, "anchor {k}: t-r1");
        }
        for pair in r.windows(2) {
            let gap = pair[0] - pair[1];
            assert!(
                gap >= t1 - slack && gap <= t2 + slack,
                "anchor {k}: inter-reflection gap {gap} outside [{t1}, {t2}]"
            );
        }
        if r.len() >= 2 {
            let span = t - r[1];
            assert!(
                span >= t1 - slack && span <= 2.0 * t2 + slack,
                "anchor {k}: two-reflection span {span} outside [{t1}, {}]",
                2.0 * t2
            );
        }
        total_reflections += r.len();
    }
    assert!(
        total_reflections >= 2,
        "trace config produced too few reflections to exercise the bounds"
    );
    let secs = budget("criterion 9", started, Duration::from_secs(30));
    println!(
        "[PASS] criterion 9: {} anchors, {total_reflections} reflections, all \
         within the transit-time bounds T1={t1:.3}, T2={t2:.3} ({secs:.2}s < 30s)",
        anchors.len()
    );
}

// ---------------------------------------------------------------------------
// Criterion 10 — byte-identical reruns of every command
// ---------------------------------------------------------------------------

fn dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut map = BTreeMap::new();
    for entry in fs::read_dir(dir).expect("output dir exists") {
        let entry = entry.unwrap();
        if entry.file_type().unwrap().is_file() {
            map.insert(
                entry.file_name().to_string_lossy().into_owned(),
                fs::read(entry.path()).unwrap(),
            );
        }
    }
    map
}

#[test]
fn criterion_10_every_command_is_deterministic() {
    let started = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let sim_cfg = tmp.path().join("sim.json");
    fs::write(
        &sim_cfg,
        serde_json::json!({
            "n": 64, "cfl": 0.45, "tEnd": 0.5, "outputEvery": 20,
            "scheme": "HLL",
            "profile": { "type": "cosine", "epsEta": 1e-3, "epsU": 1e-3 }
        })
        .to_string(),
    )
    .unwrap();
    let scaling_cfg = tmp.path().join("scaling.json");
    fs::write(
        &scaling_cfg,
        serde_json::json!({
            "epsList": [1e-2, 1e-3],
            "template": {
                "n": 64, "cfl": 0.45, "tEnd": 2.0, "outputEvery": 1000000,
                "scheme": "HLL",
                "profile": { "type": "cosine", "epsEta": 0.0, "epsU": 0.0 }
            }
        })
        .to_string(),
    )
    .unwrap();
    let trace_cfg = tmp.path().join("trace.json");
    fs::write(
        &trace_cfg,
        serde_json::json!({
            "sim": {
                "n": 64, "cfl": 0.45, "tEnd": 1.0, "outputEvery": 5,
                "scheme": "HLL",
                "profile": { "type": "cosine", "epsEta": 1e-3, "epsU": 1e-3 }
            },
            "anchors": [ { "family": 1, "t": 0.9, "y": 0.4 } ]
        })
        .to_string(),
    )
    .unwrap();

    let params = polymer_params_file();
    let commands: Vec<Vec<String>> = vec![
        vec!["curves".into(), "--n".into(), "128".into()],
        vec!["roots".into()],
        vec![
            "map".into(),
            "--n-phi".into(),
            "16".into(),
            "--n-u".into(),
            "9".into(),
        ],
        vec![
            "simulate".into(),
            "--config".into(),
            sim_cfg.display().to_string(),
        ],
        vec![
            "scaling".into(),
            "--config".into(),
            scaling_cfg.display().to_string(),
        ],
        vec![
            "trace".into(),
            "--config".into(),
            trace_cfg.display().to_string(),
        ],
    ];
    for (k, cmd) in commands.iter().enumerate() {
        let out_dir = tmp.path().join(format!("out_{k}"));
        let mut args = cmd.clone();
        args.extend([
            "--params".into(),
            params.clone(),
            "--out".into(),
            out_dir.display().to_string(),
        ]);
        let argv: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        run_ok(&argv);
        let first = dir_bytes(&out_dir);
        assert!(!first.is_empty());
        run_ok(&argv);
        assert_eq!(
            first,
            dir_bytes(&out_dir),
            "rerun of {} produced different bytes",
            cmd[0]
        );
    }
    let secs = started.elapsed().as_secs_f64();
    println!("[PASS] criterion 10: all 6 commands byte-identical on rerun ({secs:.2}s)");
}
