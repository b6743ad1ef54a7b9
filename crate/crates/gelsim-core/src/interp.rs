// SPDX-License-Identifier: MIT OR Apache-2.0

//! Interpolation kernels: monotone cubic (PCHIP) for profile resampling,
//! a uniform-knot local cubic for the flux-potential table, and bilinear
//! space–time sampling for characteristic tracing.

use thiserror::Error;

/// Interpolation construction failure.
#[derive(Debug, Error)]
pub enum InterpError {
    #[error("interpolation abscissae must be strictly increasing (violation at index {index})")]
    NonIncreasing { index: usize },
    #[error("interpolation needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("abscissae and ordinates have different lengths ({x_len} vs {y_len})")]
    LengthMismatch { x_len: usize, y_len: usize },
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch–Carlson slopes).
///
/// Preserves monotonicity of the data on every interval: where consecutive
/// secant slopes agree in sign the interpolant is monotone between the data
/// points, and where they disagree the node slope is zeroed, so no
/// overshoot is introduced. This is what makes it safe for resampling
/// strictly monotone coordinate maps.
#[derive(Debug, Clone)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Node slopes dy/dx.
    m: Vec<f64>,
}

impl Pchip {
    /// Builds the interpolant on strictly increasing abscissae (≥ 2 points).
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self, InterpError> {
        if x.len() != y.len() {
            return Err(InterpError::LengthMismatch {
                x_len: x.len(),
                y_len: y.len(),
            });
        }
        if x.len() < 2 {
            return Err(InterpError::TooFewPoints {
                needed: 2,
                got: x.len(),
            });
        }
        for i in 1..x.len() {
            if !(x[i] > x[i - 1]) {
                return Err(InterpError::NonIncreasing { index: i });
            }
        }
        let n = x.len();
        let h: Vec<f64> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut m = vec![0.0; n];
        if n == 2 {
            m[0] = delta[0];
            m[1] = delta[0];
        } else {
            // Interior: weighted harmonic mean of adjacent secants, zeroed at
            // local extrema (sign change or flat secant).
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            m[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
            m[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Pchip {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    /// Evaluates the interpolant; clamps to the end values outside the data.
    pub fn eval(&self, xq: f64) -> f64 {
        let n = self.x.len();
        // Constant extension outside the data range.
        if xq <= self.x[0] {
            return self.y[0];
        }
        if xq >= self.x[n - 1] {
            return self.y[n - 1];
        }
        // partition_point returns the first index with x[i] > xq; the
        // interval is [i−1, i].
        let i = self.x.partition_point(|&v| v <= xq);
        let (i0, i1) = (i - 1, i);
        let h = self.x[i1] - self.x[i0];
        let t = (xq - self.x[i0]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.y[i0] + h10 * h * self.m[i0] + h01 * self.y[i1] + h11 * h * self.m[i1]
    }
}

/// One-sided three-point endpoint slope with the standard shape limits:
/// sign flips against the boundary secant zero the slope, and magnitudes
/// beyond 3× the boundary secant are clamped to it.
fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let mut m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        m = 0.0;
    } else if d0 * d1 < 0.0 && m.abs() > 3.0 * d0.abs() {
        m = 3.0 * d0;
    }
    m
}

/// Uniform-knot table evaluated by a local 4-point Lagrange cubic.
///
/// Knots are x_j = x0 + j·dx. An evaluation at the distinguished anchor
/// abscissa returns the stored anchor value bitwise (no polynomial
/// arithmetic), so an identity anchored there survives round-trips exactly.
#[derive(Debug, Clone)]
pub struct CubicTable {
    x0: f64,
    dx: f64,
    v: Vec<f64>,
    /// Abscissa whose evaluation short-circuits to `v_anchor`.
    anchor_x: f64,
    anchor_v: f64,
}

impl CubicTable {
    /// Builds a table from uniform knots `x0 + j·dx` (≥ 4 values) with a
    /// distinguished exact anchor (`anchor_index` must be in range).
    pub fn new(
        x0: f64,
        dx: f64,
        values: Vec<f64>,
        anchor_index: usize,
    ) -> Result<Self, InterpError> {
        if values.len() < 4 {
            return Err(InterpError::TooFewPoints {
                needed: 4,
                got: values.len(),
            });
        }
        if !(dx > 0.0) {
            return Err(InterpError::NonIncreasing { index: 1 });
        }
        let anchor_x = x0 + anchor_index as f64 * dx;
        let anchor_v = values[anchor_index];
        Ok(CubicTable {
            x0,
            dx,
            v: values,
            anchor_x,
            anchor_v,
        })
    }

    /// Inclusive tabulated range.
    pub fn range(&self) -> (f64, f64) {
        (self.x0, self.x0 + (self.v.len() - 1) as f64 * self.dx)
    }

    /// Cubic evaluation; `None` outside the tabulated range.
    pub fn eval(&self, x: f64) -> Option<f64> {
        if x == self.anchor_x {
            return Some(self.anchor_v);
        }
        let (lo, hi) = self.range();
        if x < lo || x > hi {
            return None;
        }
        let n = self.v.len();
        let t = (x - self.x0) / self.dx;
        // Center the 4-point window on the containing interval, clamped so
        // the window stays inside the table.
        let j = (t.floor() as usize).min(n - 2).max(1).min(n - 3);
        let k0 = j - 1; // window k0 .. k0+3
        let s = t - k0 as f64; // local coordinate in knot units, s ∈ [~1, ~2]
        // Lagrange basis on nodes {0, 1, 2, 3} in knot units.
        let s0 = s;
        let s1 = s - 1.0;
        let s2 = s - 2.0;
        let s3 = s - 3.0;
        let l0 = -s1 * s2 * s3 / 6.0;
        let l1 = s0 * s2 * s3 / 2.0;
        let l2 = -s0 * s1 * s3 / 2.0;
        let l3 = s0 * s1 * s2 / 6.0;
        Some(l0 * self.v[k0] + l1 * self.v[k0 + 1] + l2 * self.v[k0 + 2] + l3 * self.v[k0 + 3])
    }
}

/// Bilinear sampling of a space–time field.
///
/// `times` are strictly increasing sample times, `ys` strictly increasing
/// spatial nodes, and `field[k][j]` the value at (times[k], ys[j]). Space is
/// clamped to [ys[0], ys[last]] (constant extension past the outermost
/// nodes — used for the half-cell gap between the wall and the first cell
/// center); time outside the sampled range returns `None`.
pub fn bilinear_sample(
    times: &[f64],
    ys: &[f64],
    field: &[Vec<f64>],
    t: f64,
    y: f64,
) -> Option<f64> {
    let nt = times.len();
    if nt == 0 || ys.is_empty() {
        return None;
    }
    if t < times[0] || t > times[nt - 1] {
        return None;
    }
    let yq = y.clamp(ys[0], ys[ys.len() - 1]);
    // Time interval.
    let k = if t >= times[nt - 1] {
        nt - 1
    } else {
        times.partition_point(|&v| v <= t)
    };
    let (k0, k1, wt) = if k == 0 {
        (0, 0, 0.0)
    } else if k >= nt {
        (nt - 1, nt - 1, 0.0)
    } else {
        let k0 = k - 1;
        (k0, k, (t - times[k0]) / (times[k] - times[k0]))
    };
    let row = |ki: usize| -> f64 {
        let r = &field[ki];
        let j = ys.partition_point(|&v| v <= yq);
        if j == 0 {
            r[0]
        } else if j >= ys.len() {
            r[ys.len() - 1]
        } else {
            let j0 = j - 1;
            let w = (yq - ys[j0]) / (ys[j] - ys[j0]);
            r[j0] + w * (r[j] - r[j0])
        }
    };
    let v0 = row(k0);
    if k0 == k1 {
        Some(v0)
    } else {
        let v1 = row(k1);
        Some(v0 + wt * (v1 - v0))
    }
}
