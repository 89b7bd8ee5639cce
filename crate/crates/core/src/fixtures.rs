//! Synthetic BH curves for tests, examples, and quick experiments.
//!
//! Measured steel data is rig-specific; these generators produce curves
//! with the same qualitative shape (steep rise, knee, saturation with
//! incremental permeability one) from closed-form sampling functions.

use crate::bhcurve::{load_curve, BHCurve};
use crate::field::MU0;

/// Linear material H = nu·B sampled on `n` equispaced knots up to `b_max`.
pub fn linear_curve(nu: f64, b_max: f64, n: usize) -> BHCurve {
    let rows: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let b = b_max * k as f64 / (n - 1) as f64;
            (nu * b, b)
        })
        .collect();
    load_curve(&rows).unwrap().with_label("linear")
}

/// Saturating curve B(H) = b_knee·tanh(H/h0) + μ0·H sampled at `n` knots
/// clustered towards low field strengths, up to `h_max`.
pub fn saturating_curve(b_knee: f64, h0: f64, h_max: f64, n: usize) -> BHCurve {
    let rows: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = k as f64 / (n - 1) as f64;
            let h = h_max * t * t;
            (h, b_knee * (h / h0).tanh() + MU0 * h)
        })
        .collect();
    load_curve(&rows).unwrap().with_label("saturating")
}

/// Easy-axis curve of a grain-oriented sheet (steep knee near 1.9 T).
pub fn go_rolling() -> BHCurve {
    saturating_curve(1.9, 800.0, 30_000.0, 30).with_label("go_rolling")
}

/// Hard-axis curve of the same sheet (knee near 1.6 T, reached slowly).
pub fn go_transverse() -> BHCurve {
    saturating_curve(1.6, 9000.0, 30_000.0, 30).with_label("go_transverse")
}

/// Isotropic mild-steel curve between the two grain-oriented axes.
pub fn mild_steel() -> BHCurve {
    saturating_curve(1.7, 3000.0, 40_000.0, 30).with_label("mild_steel")
}
