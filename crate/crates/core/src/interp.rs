//! Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson slopes)
//! with closed-form derivatives and antiderivatives per interval.
//!
//! Monotonicity of the interpolant is what makes the integrated energy
//! convex, so shape preservation is mandatory here, not cosmetic.

/// Fritsch-Carlson limited slopes for data with strictly increasing `x`.
///
/// For monotone `y` the returned slopes make the Hermite interpolant
/// monotone on every interval. Caller guarantees `x.len() == y.len() >= 2`
/// and strictly increasing `x`.
pub fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    debug_assert!(n >= 2);
    let h: Vec<f64> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }

    for i in 1..n - 1 {
        let (del0, del1) = (delta[i - 1], delta[i]);
        if del0 == 0.0 || del1 == 0.0 || del0.signum() != del1.signum() {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / del0 + w2 / del1);
        }
    }

    d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

// Non-centered three-point end slope with the usual shape limiters.
fn edge_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let mut d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        d = 0.0;
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        d = 3.0 * del0;
    }
    d
}

/// Hermite cubic value on `[x0, x1]` with node values `y0, y1` and slopes `d0, d1`.
pub fn hermite_eval(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, xq: f64) -> f64 {
    let h = x1 - x0;
    let t = (xq - x0) / h;
    let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    let h10 = t * (1.0 - t) * (1.0 - t);
    let h01 = t * t * (3.0 - 2.0 * t);
    let h11 = t * t * (t - 1.0);
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

/// First derivative of the Hermite cubic at `xq`.
pub fn hermite_deriv(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, xq: f64) -> f64 {
    let h = x1 - x0;
    let t = (xq - x0) / h;
    let dh00 = 6.0 * t * t - 6.0 * t;
    let dh10 = 3.0 * t * t - 4.0 * t + 1.0;
    let dh01 = -6.0 * t * t + 6.0 * t;
    let dh11 = 3.0 * t * t - 2.0 * t;
    dh00 * y0 / h + dh10 * d0 + dh01 * y1 / h + dh11 * d1
}

/// Exact integral of the Hermite cubic from `x0` to `xq` (antiderivatives of
/// the four basis polynomials).
pub fn hermite_integral(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, xq: f64) -> f64 {
    let h = x1 - x0;
    let t = (xq - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t2 * t2;
    let i00 = 0.5 * t4 - t3 + t;
    let i10 = 0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2;
    let i01 = -0.5 * t4 + t3;
    let i11 = 0.25 * t4 - t3 / 3.0;
    h * (i00 * y0 + i10 * h * d0 + i01 * y1 + i11 * h * d1)
}
