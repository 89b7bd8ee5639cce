//! Anisotropic law for grain-oriented sheet built from per-axis curves.
//!
//! Two (or three) Epstein measurements along the principal axes define
//! energies w₀, w₉₀ (, w_n). For a level w the iso-line is the ellipse
//! whose semi-axes are the inverse energies B₀(w), B₉₀(w) (, B_n(w)); the
//! energy at an arbitrary flux density is the level whose ellipse passes
//! through it. Axis convention: x = rolling, y = transverse, z = normal.

use crate::bhcurve::BHCurve;
use crate::error::{Error, Result};
use crate::field::{FieldStrength, FluxDensity, SymTensor3};
use crate::law::MaterialLaw;

/// Iso-line solve result: the energy level and the ellipse semi-axes.
#[derive(Clone, Copy, Debug)]
pub struct AxisSolution {
    /// Energy density of the iso-surface through the query point, J/m³.
    pub w: f64,
    /// Semi-axis along rolling (x), tesla.
    pub b_rolling: f64,
    /// Semi-axis along transverse (y), tesla.
    pub b_transverse: f64,
    /// Semi-axis along normal (z), tesla; present in 3-D mode only.
    pub b_normal: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct GrainOrientedLaw {
    rolling: BHCurve,
    transverse: BHCurve,
    normal: Option<BHCurve>,
    w_max: f64,
}

const RESIDUAL_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;

impl GrainOrientedLaw {
    /// In-plane law from rolling (x) and transverse (y) curves; defined
    /// for bz = 0 only.
    pub fn new(rolling: BHCurve, transverse: BHCurve) -> Self {
        let w_max = rolling.w_max().min(transverse.w_max());
        Self {
            rolling,
            transverse,
            normal: None,
            w_max,
        }
    }

    /// Full 3-D law; the out-of-plane behaviour must be given explicitly
    /// as a third curve (there is no physical default for it).
    pub fn new_3d(rolling: BHCurve, transverse: BHCurve, normal: BHCurve) -> Self {
        let w_max = rolling.w_max().min(transverse.w_max()).min(normal.w_max());
        Self {
            rolling,
            transverse,
            normal: Some(normal),
            w_max,
        }
    }

    /// Common valid energy range: the smallest maximum energy over the
    /// axis curves. Infinite when every curve carries an extrapolation.
    pub fn w_max(&self) -> f64 {
        self.w_max
    }

    pub fn rolling(&self) -> &BHCurve {
        &self.rolling
    }

    pub fn transverse(&self) -> &BHCurve {
        &self.transverse
    }

    pub fn normal(&self) -> Option<&BHCurve> {
        self.normal.as_ref()
    }

    fn check_domain(&self, b: FluxDensity) -> Result<()> {
        if self.normal.is_none() && b.bz != 0.0 {
            return Err(Error::OutOfPlane { bz: b.bz });
        }
        Ok(())
    }

    // Ellipse residual Σ (bᵢ/sᵢ(w))² - 1 over axes with a nonzero
    // component; strictly decreasing in w.
    fn residual(&self, comps: &[(f64, &BHCurve)], w: f64) -> Result<f64> {
        let mut r = -1.0;
        for &(bi, curve) in comps {
            let s = curve.b_of_w(w)?;
            r += (bi / s) * (bi / s);
        }
        Ok(r)
    }

    // d residual / dw = Σ -2 bᵢ²/(sᵢ³·H(sᵢ)).
    fn residual_slope(&self, comps: &[(f64, &BHCurve)], w: f64) -> Result<f64> {
        let mut d = 0.0;
        for &(bi, curve) in comps {
            let s = curve.b_of_w(w)?;
            let h = curve.h_of_b(s)?;
            d -= 2.0 * bi * bi / (s * s * s * h);
        }
        Ok(d)
    }

    /// Solves the two coupled conditions — the point lies on the ellipse,
    /// and every semi-axis carries the same energy — for the level w.
    ///
    /// Bisection on w is the primary solver (the residual is strictly
    /// decreasing, so a bracketed root is guaranteed); Newton steps are
    /// taken whenever they stay inside the bracket.
    pub fn solve_axes(&self, b: FluxDensity) -> Result<AxisSolution> {
        self.check_domain(b)?;
        if b.is_zero() {
            return Err(Error::ZeroFlux);
        }
        let axes = [
            (b.bx, &self.rolling),
            (b.by, &self.transverse),
            (b.bz.abs(), self.normal.as_ref().unwrap_or(&self.rolling)),
        ];
        let comps: Vec<(f64, &BHCurve)> = axes
            .iter()
            .take(if self.normal.is_some() { 3 } else { 2 })
            .filter(|(bi, _)| *bi != 0.0)
            .map(|&(bi, c)| (bi.abs(), c))
            .collect();

        // The solution satisfies w >= w_axis(|b_axis|) for every component
        // (semi-axes are at least the components), with equality on-axis.
        let mut lo: f64 = 0.0;
        for &(bi, curve) in &comps {
            let w_i = match curve.w_of_b(bi) {
                Ok(w) => w,
                Err(Error::OutOfRange { .. }) => {
                    return Err(Error::ExceedsRange { w_max: self.w_max })
                }
                Err(e) => return Err(e),
            };
            lo = lo.max(w_i);
        }
        if lo > self.w_max {
            return Err(Error::ExceedsRange { w_max: self.w_max });
        }
        if self.residual(&comps, lo)?.abs() <= RESIDUAL_TOL {
            return self.solution_at(lo);
        }

        let mut hi = if self.w_max.is_finite() {
            if self.residual(&comps, self.w_max)? > 0.0 {
                return Err(Error::ExceedsRange { w_max: self.w_max });
            }
            self.w_max
        } else {
            let mut hi = (2.0 * lo).max(f64::MIN_POSITIVE);
            let mut doublings = 0;
            while self.residual(&comps, hi)? > 0.0 {
                hi *= 2.0;
                doublings += 1;
                if doublings > 400 {
                    return Err(Error::NoConvergence {
                        iterations: doublings,
                        residual: self.residual(&comps, hi)?,
                    });
                }
            }
            hi
        };

        let mut w = 0.5 * (lo + hi);
        for _ in 0..MAX_ITER {
            let r = self.residual(&comps, w)?;
            if r.abs() <= RESIDUAL_TOL {
                return self.solution_at(w);
            }
            if r > 0.0 {
                lo = w;
            } else {
                hi = w;
            }
            if hi - lo <= f64::EPSILON * hi {
                return self.solution_at(0.5 * (lo + hi));
            }
            let slope = self.residual_slope(&comps, w)?;
            let newton = w - r / slope;
            w = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Err(Error::NoConvergence {
            iterations: MAX_ITER,
            residual: self.residual(&comps, w)?,
        })
    }

    fn solution_at(&self, w: f64) -> Result<AxisSolution> {
        Ok(AxisSolution {
            w,
            b_rolling: self.rolling.b_of_w(w)?,
            b_transverse: self.transverse.b_of_w(w)?,
            b_normal: match &self.normal {
                Some(c) => Some(c.b_of_w(w)?),
                None => None,
            },
        })
    }

    // Per-axis quantities at the solved level: component, semi-axis,
    // field at the semi-axis, slope at the semi-axis.
    fn axis_terms(&self, b: FluxDensity, sol: &AxisSolution) -> Result<Vec<(f64, f64, f64, f64)>> {
        let mut terms = Vec::with_capacity(3);
        let mut axes: Vec<(f64, &BHCurve, f64)> = vec![
            (b.bx, &self.rolling, sol.b_rolling),
            (b.by, &self.transverse, sol.b_transverse),
        ];
        if let Some(n) = &self.normal {
            axes.push((b.bz, n, sol.b_normal.unwrap()));
        }
        for (bi, curve, s) in axes {
            let h = curve.h_of_b(s)?;
            let k = curve.dh_db(s)?;
            terms.push((bi, s, h, k));
        }
        Ok(terms)
    }
}

impl MaterialLaw for GrainOrientedLaw {
    fn energy(&self, b: FluxDensity) -> Result<f64> {
        self.check_domain(b)?;
        if b.is_zero() {
            return Ok(0.0);
        }
        Ok(self.solve_axes(b)?.w)
    }

    fn field(&self, b: FluxDensity) -> Result<FieldStrength> {
        self.check_domain(b)?;
        if b.is_zero() {
            return Ok(FieldStrength::ZERO);
        }
        let sol = self.solve_axes(b)?;
        let terms = self.axis_terms(b, &sol)?;
        // H = (Σ bᵢ²/(sᵢ³Hᵢ))⁻¹ · (bᵢ/sᵢ²), the gradient of the iso-line
        // construction.
        let denom: f64 = terms
            .iter()
            .map(|&(bi, s, h, _)| bi * bi / (s * s * s * h))
            .sum();
        let mut out = [0.0; 3];
        for (i, &(bi, s, _, _)) in terms.iter().enumerate() {
            out[i] = bi / (s * s) / denom;
        }
        Ok(FieldStrength::from_array(out))
    }

    fn reluctivity(&self, b: FluxDensity) -> Result<SymTensor3> {
        self.check_domain(b)?;
        if b.is_zero() {
            // Limit of the ellipse construction: the axis slopes.
            let kx = self.rolling.dh_db(0.0)?;
            let ky = self.transverse.dh_db(0.0)?;
            let kz = match &self.normal {
                Some(c) => c.dh_db(0.0)?,
                None => 0.0,
            };
            return Ok(SymTensor3::diagonal(kx, ky, kz));
        }
        let sol = self.solve_axes(b)?;
        let terms = self.axis_terms(b, &sol)?;
        let h = self.field(b)?.as_array();

        // Hessian of the implicitly defined w via the iso-line equation
        // g(B, w) = Σ (bᵢ/sᵢ(w))² - 1 = 0:
        //   ν_ij = -(g_ij + g_iw·H_j + H_i·g_jw + H_i·H_j·g_ww)/g_w
        // with sᵢ' = 1/Hᵢ and sᵢ'' = -kᵢ/Hᵢ³.
        let mut g_w = 0.0;
        let mut g_ww = 0.0;
        let mut g_iw = [0.0; 3];
        let mut g_ii = [0.0; 3];
        for (i, &(bi, s, hi_ax, ki)) in terms.iter().enumerate() {
            let sp = 1.0 / hi_ax;
            let spp = -ki / (hi_ax * hi_ax * hi_ax);
            g_w -= 2.0 * bi * bi * sp / (s * s * s);
            g_ww += bi * bi * (6.0 * sp * sp / (s * s * s * s) - 2.0 * spp / (s * s * s));
            g_iw[i] = -4.0 * bi * sp / (s * s * s);
            g_ii[i] = 2.0 / (s * s);
        }
        let n = terms.len();
        let mut m = [[0.0; 3]; 3];
        for i in 0..n {
            for j in 0..n {
                let g_ij = if i == j { g_ii[i] } else { 0.0 };
                m[i][j] = -(g_ij + g_iw[i] * h[j] + h[i] * g_iw[j] + h[i] * h[j] * g_ww) / g_w;
            }
        }
        Ok(SymTensor3::new(
            m[0][0],
            0.5 * (m[0][1] + m[1][0]),
            0.5 * (m[0][2] + m[2][0]),
            m[1][1],
            0.5 * (m[1][2] + m[2][1]),
            m[2][2],
        ))
    }

    fn describe(&self) -> String {
        match &self.normal {
            Some(n) => format!(
                "grain_oriented({}, {}, {})",
                self.rolling.label(),
                self.transverse.label(),
                n.label()
            ),
            None => format!(
                "grain_oriented({}, {})",
                self.rolling.label(),
                self.transverse.label()
            ),
        }
    }

    fn planar(&self) -> bool {
        self.normal.is_none()
    }
}
