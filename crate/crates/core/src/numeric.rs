//! Small numerical kernels shared across the crate: a safeguarded
//! Newton root finder and adaptive Gauss-Kronrod quadrature.

use crate::error::Result;

/// Root of an increasing function on a bracket `[lo, hi]`: Newton steps
/// with a bisection fallback whenever a step leaves the bracket.
///
/// Caller guarantees `f(lo) <= 0 <= f(hi)`; the result is within `tol_x`
/// of the root.
pub fn solve_increasing<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, tol_x: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= tol_x {
            return 0.5 * (lo + hi);
        }
        let d = df(x);
        let newton = if d > 0.0 { x - fx / d } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    0.5 * (lo + hi)
}

// 15-point Kronrod extension of 7-point Gauss-Legendre (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x)?;
        let f2 = f(center + x)?;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((kronrod * half, (kronrod - gauss).abs() * half.abs()))
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` to the given
/// relative tolerance (with a small absolute floor for vanishing
/// integrals).
pub fn integrate<F>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    fn refine<F>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let (value, err) = gk15(f, a, b)?;
        if err <= tol || depth >= 30 {
            return Ok(value);
        }
        let mid = 0.5 * (a + b);
        Ok(refine(f, a, mid, 0.5 * tol, depth + 1)? + refine(f, mid, b, 0.5 * tol, depth + 1)?)
    }
    let (first, _) = gk15(f, a, b)?;
    let tol = (rel_tol * first.abs()).max(1e-12);
    refine(f, a, b, tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomial_exactly() {
        // GK15 is exact for polynomials well past degree 7.
        let v = integrate(&|x: f64| Ok(x * x * x - 2.0 * x + 1.0), 0.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn integrates_transcendental_to_tolerance() {
        let v = integrate(&|x: f64| Ok((x.sin() * 3.0).exp()), 0.0, 3.0, 1e-11).unwrap();
        // Reference from a fine composite Simpson rule.
        let n = 2_000_000;
        let g = |x: f64| (x.sin() * 3.0).exp();
        let mut reference = g(0.0) + g(3.0);
        for k in 1..n {
            let x = 3.0 * k as f64 / n as f64;
            reference += if k % 2 == 1 { 4.0 * g(x) } else { 2.0 * g(x) };
        }
        reference *= 3.0 / (3.0 * n as f64);
        assert_relative_eq!(v, reference, max_relative = 1e-9);
    }

    #[test]
    fn solve_increasing_finds_root() {
        let r = solve_increasing(|x| x * x * x - 2.0, |x| 3.0 * x * x, 0.0, 2.0, 1e-14);
        assert_relative_eq!(r, 2.0f64.powf(1.0 / 3.0), max_relative = 1e-12);
    }
}
