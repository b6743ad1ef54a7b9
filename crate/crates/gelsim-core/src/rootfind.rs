// SPDX-License-Identifier: MIT OR Apache-2.0

//! Bracketed scalar root solves: bisection to high certainty, then a few
//! guarded Newton steps to polish.
//!
//! All root solves in this crate start from a sign-change bracket found by
//! scanning, so bisection is guaranteed to converge; Newton polishing only
//! sharpens the last digits and is rejected whenever it would leave the
//! bracket or fail to reduce the residual.

/// Result of a bracketed solve.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    /// Final abscissa.
    pub x: f64,
    /// Residual f(x) at the final abscissa.
    pub residual: f64,
    /// Width of the final bisection bracket (before polishing).
    pub bracket_width: f64,
}

/// Bisection on a sign-change bracket [a, b], `iters` halvings.
///
/// Requires f(a)·f(b) ≤ 0; with 60 iterations the final bracket is
/// ~(b−a)·1e−18 wide — below f64 spacing for O(1) abscissae, i.e. bisection
/// runs to the last representable bit.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, iters: u32) -> Root {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut flo = f(lo);
    debug_assert!(
        flo * f(hi) <= 0.0,
        "bisect requires a sign-change bracket, got f({lo}) = {flo}, f({hi}) = {}",
        f(hi)
    );
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket is at floating-point granularity
        }
        let fmid = f(mid);
        if flo * fmid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    let x = 0.5 * (lo + hi);
    Root {
        x,
        residual: f(x),
        bracket_width: hi - lo,
    }
}

/// Up to `steps` Newton iterations from `root.x`, each accepted only if it
/// stays inside [lo, hi] and strictly reduces |f|.
///
/// `df` may itself be a finite-difference closure; a zero or non-finite
/// derivative simply stops the polish, keeping the bisection result.
pub fn newton_polish<F: Fn(f64) -> f64, D: Fn(f64) -> f64>(
    f: &F,
    df: &D,
    root: Root,
    lo: f64,
    hi: f64,
    steps: u32,
) -> Root {
    let mut best = root;
    for _ in 0..steps {
        let d = df(best.x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let cand = best.x - best.residual / d;
        if !cand.is_finite() || cand < lo || cand > hi {
            break;
        }
        let fc = f(cand);
        if fc.abs() < best.residual.abs() {
            best = Root {
                x: cand,
                residual: fc,
                bracket_width: best.bracket_width,
            };
        } else {
            break;
        }
    }
    best
}

/// Convenience: bisection (60 halvings) followed by 3 guarded Newton steps.
pub fn solve_bracketed<F: Fn(f64) -> f64, D: Fn(f64) -> f64>(
    f: &F,
    df: &D,
    a: f64,
    b: f64,
) -> Root {
    let r = bisect(f, a, b, 60);
    newton_polish(f, df, r, a.min(b), a.max(b), 3)
}

/// Central finite-difference derivative closure with step `h`.
pub fn fd_derivative<F: Fn(f64) -> f64 + Copy>(f: F, h: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| (f(x + h) - f(x - h)) / (2.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_converges_to_machine_width() {
        let f = |x: f64| x * x - 2.0;
        let r = bisect(&f, 0.0, 2.0, 60);
        assert!((r.x - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(r.bracket_width < 1e-12);
    }

    #[test]
    fn newton_polish_improves_or_keeps_residual() {
        let f = |x: f64| x.cos() - x;
        let df = |x: f64| -x.sin() - 1.0;
        let coarse = bisect(&f, 0.0, 1.0, 20);
        let polished = newton_polish(&f, &df, coarse, 0.0, 1.0, 3);
        assert!(polished.residual.abs() <= coarse.residual.abs());
        assert!(polished.residual.abs() < 1e-15);
    }

    #[test]
    fn polish_rejects_out_of_bracket_steps() {
        // Newton from a flat region would overshoot; the guard keeps the
        // bisection answer.
        let f = |x: f64| (x - 1.0).powi(3);
        let df = |_x: f64| 1e-30; // pathological derivative
        let r = bisect(&f, 0.0, 2.0, 60);
        let p = newton_polish(&f, &df, r, 0.0, 2.0, 3);
        assert!((p.x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solve_bracketed_with_fd_derivative() {
        let f = |x: f64| x.exp() - 3.0;
        let df = fd_derivative(f, 1e-6);
        let r = solve_bracketed(&f, &df, 0.0, 2.0);
        assert!((r.x - 3.0_f64.ln()).abs() < 1e-12);
        assert!(r.residual.abs() < 1e-12);
    }
}
