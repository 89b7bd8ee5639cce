//! Validation and geometry utilities: gradient/Hessian audits against
//! finite differences, path-independence quadrature, and iso-energy
//! contour extraction.
//!
//! These checks operationalize the two structural requirements on any
//! law: the field must be the gradient of the energy, and the
//! differential reluctivity must be symmetric positive definite.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FluxDensity, SymTensor3};
use crate::law::MaterialLaw;
use crate::numeric;

/// Name of the seedable generator used for sample points, recorded in
/// reports for reproducibility.
pub const RNG_NAME: &str = "chacha8";

#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    /// Radius of the sampling ball (disk for planar laws), tesla.
    pub radius: f64,
    /// Random points for the gradient and Hessian checks.
    pub n_points: usize,
    /// Random endpoints for the path-independence check.
    pub n_paths: usize,
    pub seed: u64,
    /// Central-difference step for the gradient check, tesla.
    pub grad_step: f64,
    /// Central-difference step for the field Jacobian, tesla.
    pub hess_step: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            radius: 1.5,
            n_points: 200,
            n_paths: 20,
            seed: 42,
            grad_step: 1e-6,
            hess_step: 1e-5,
        }
    }
}

/// Pass thresholds for a validation run.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub grad: f64,
    pub asym: f64,
    pub path: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            grad: 1e-5,
            asym: 1e-4,
            path: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GradientCheck {
    pub max_rel_err: f64,
    pub tested: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug)]
pub struct HessianCheck {
    pub asym_max: f64,
    pub min_eigenvalue: f64,
    pub violations: Vec<[f64; 3]>,
    pub tested: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug)]
pub struct PathCheck {
    pub max_rel_err: f64,
    pub tested: usize,
    pub skipped: usize,
}

/// Aggregated validation result, serializable as JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub law_id: String,
    pub rng: String,
    pub seed: u64,
    pub points_tested: usize,
    pub points_skipped: usize,
    pub gradient_max_rel_err: f64,
    pub hessian_asym_max: f64,
    pub min_hessian_eigenvalue: f64,
    pub convexity_violations: Vec<[f64; 3]>,
    pub path_independence_max_rel_err: f64,
}

impl ValidationReport {
    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.gradient_max_rel_err <= tol.grad
            && self.hessian_asym_max <= tol.asym
            && self.min_hessian_eigenvalue > 0.0
            && self.convexity_violations.is_empty()
            && self.path_independence_max_rel_err <= tol.path
    }
}

// Uniform samples in the ball (disk for planar laws) of the given radius,
// excluding a tiny neighbourhood of the origin.
fn sample_points(planar: bool, radius: f64, n: usize, seed: u64) -> Vec<FluxDensity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let x: f64 = rng.random_range(-1.0..1.0);
        let y: f64 = rng.random_range(-1.0..1.0);
        let z: f64 = if planar { 0.0 } else { rng.random_range(-1.0..1.0) };
        let r2 = x * x + y * y + z * z;
        if r2 > 1.0 || r2 < 1e-4 {
            continue;
        }
        pts.push(FluxDensity::new(radius * x, radius * y, radius * z));
    }
    pts
}

fn components(law: &dyn MaterialLaw) -> usize {
    if law.planar() {
        2
    } else {
        3
    }
}

/// Compares the law's field against central differences of its energy.
///
/// Relative errors use max(|H|, 1 A/m) as the denominator; points where
/// the law reports a range error are skipped and counted.
pub fn check_gradient(
    law: &dyn MaterialLaw,
    radius: f64,
    n_points: usize,
    seed: u64,
    step: f64,
) -> Result<GradientCheck> {
    let ncomp = components(law);
    let mut max_rel_err: f64 = 0.0;
    let mut tested = 0;
    let mut skipped = 0;
    'points: for p in sample_points(law.planar(), radius, n_points, seed) {
        let h = match law.field(p) {
            Ok(h) => h,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let denom = h.norm().max(1.0);
        let mut rel: f64 = 0.0;
        for i in 0..ncomp {
            let mut hi = p.as_array();
            let mut lo = p.as_array();
            hi[i] += step;
            lo[i] -= step;
            let (whi, wlo) = match (
                law.energy(FluxDensity::from_array(hi)),
                law.energy(FluxDensity::from_array(lo)),
            ) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    skipped += 1;
                    continue 'points;
                }
            };
            let fd = (whi - wlo) / (2.0 * step);
            rel = rel.max((h.as_array()[i] - fd).abs() / denom);
        }
        tested += 1;
        max_rel_err = max_rel_err.max(rel);
    }
    if tested == 0 {
        return Err(Error::AllPointsOutOfRange { skipped });
    }
    Ok(GradientCheck {
        max_rel_err,
        tested,
        skipped,
    })
}

/// Finite-difference Jacobian of the field: symmetry defect and minimum
/// eigenvalue of the symmetrized reluctivity over the sample points.
pub fn check_hessian(
    law: &dyn MaterialLaw,
    radius: f64,
    n_points: usize,
    seed: u64,
    step: f64,
) -> Result<HessianCheck> {
    let ncomp = components(law);
    let mut asym_max: f64 = 0.0;
    let mut min_eigenvalue = f64::INFINITY;
    let mut violations = Vec::new();
    let mut tested = 0;
    let mut skipped = 0;
    'points: for p in sample_points(law.planar(), radius, n_points, seed) {
        let mut jac = [[0.0; 3]; 3];
        for j in 0..ncomp {
            let mut hi = p.as_array();
            let mut lo = p.as_array();
            hi[j] += step;
            lo[j] -= step;
            let (fhi, flo) = match (
                law.field(FluxDensity::from_array(hi)),
                law.field(FluxDensity::from_array(lo)),
            ) {
                (Ok(a), Ok(b)) => (a.as_array(), b.as_array()),
                _ => {
                    skipped += 1;
                    continue 'points;
                }
            };
            for i in 0..ncomp {
                jac[i][j] = (fhi[i] - flo[i]) / (2.0 * step);
            }
        }
        tested += 1;

        let mut scale: f64 = 0.0;
        for row in jac.iter().take(ncomp) {
            for v in row.iter().take(ncomp) {
                scale = scale.max(v.abs());
            }
        }
        let mut asym: f64 = 0.0;
        for i in 0..ncomp {
            for j in (i + 1)..ncomp {
                asym = asym.max((jac[i][j] - jac[j][i]).abs());
            }
        }
        asym_max = asym_max.max(asym / scale.max(f64::MIN_POSITIVE));

        let min_eig = if ncomp == 2 {
            // Closed-form 2x2 eigenvalues of the symmetrized in-plane block.
            let (a, c) = (jac[0][0], jac[1][1]);
            let b = 0.5 * (jac[0][1] + jac[1][0]);
            let mean = 0.5 * (a + c);
            let r = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            mean - r
        } else {
            let sym = SymTensor3::new(
                jac[0][0],
                0.5 * (jac[0][1] + jac[1][0]),
                0.5 * (jac[0][2] + jac[2][0]),
                jac[1][1],
                0.5 * (jac[1][2] + jac[2][1]),
                jac[2][2],
            );
            sym.eigenvalues()[0]
        };
        if min_eig <= 0.0 {
            violations.push(p.as_array());
        }
        min_eigenvalue = min_eigenvalue.min(min_eig);
    }
    if tested == 0 {
        return Err(Error::AllPointsOutOfRange { skipped });
    }
    Ok(HessianCheck {
        asym_max,
        min_eigenvalue,
        violations,
        tested,
        skipped,
    })
}

/// Line integral of H·dB along a polyline, adaptive Gauss-Kronrod per
/// segment to 1e-9 relative.
pub fn path_energy(law: &dyn MaterialLaw, path: &[FluxDensity]) -> Result<f64> {
    let mut total = 0.0;
    for seg in path.windows(2) {
        let (p0, p1) = (seg[0], seg[1]);
        let d = p1 - p0;
        total += numeric::integrate(
            &|t: f64| Ok(law.field(p0 + d * t)?.dot_flux(d)),
            0.0,
            1.0,
            1e-9,
        )?;
    }
    Ok(total)
}

/// Compares the straight-ray integral 0→a with an axis-aligned staircase
/// to the same endpoint.
pub fn check_path_independence(
    law: &dyn MaterialLaw,
    radius: f64,
    n_paths: usize,
    seed: u64,
) -> Result<PathCheck> {
    let mut max_rel_err: f64 = 0.0;
    let mut tested = 0;
    let mut skipped = 0;
    for a in sample_points(law.planar(), radius, n_paths, seed.wrapping_add(0x9e3779b9)) {
        let ray = [FluxDensity::ZERO, a];
        let staircase = [
            FluxDensity::ZERO,
            FluxDensity::new(a.bx, 0.0, 0.0),
            FluxDensity::new(a.bx, a.by, 0.0),
            a,
        ];
        let (w_ray, w_stair) = match (path_energy(law, &ray), path_energy(law, &staircase)) {
            (Ok(r), Ok(s)) => (r, s),
            _ => {
                skipped += 1;
                continue;
            }
        };
        tested += 1;
        max_rel_err = max_rel_err.max((w_ray - w_stair).abs() / w_ray.abs().max(f64::MIN_POSITIVE));
    }
    if tested == 0 {
        return Err(Error::AllPointsOutOfRange { skipped });
    }
    Ok(PathCheck {
        max_rel_err,
        tested,
        skipped,
    })
}

/// Runs all checks with one configuration and assembles the report.
pub fn run_validation(law: &dyn MaterialLaw, cfg: &CheckConfig) -> Result<ValidationReport> {
    let grad = check_gradient(law, cfg.radius, cfg.n_points, cfg.seed, cfg.grad_step)?;
    let hess = check_hessian(law, cfg.radius, cfg.n_points, cfg.seed, cfg.hess_step)?;
    let path = check_path_independence(law, cfg.radius, cfg.n_paths, cfg.seed)?;
    Ok(ValidationReport {
        law_id: law.describe(),
        rng: RNG_NAME.into(),
        seed: cfg.seed,
        points_tested: hess.tested,
        points_skipped: hess.skipped,
        gradient_max_rel_err: grad.max_rel_err,
        hessian_asym_max: hess.asym_max,
        min_hessian_eigenvalue: hess.min_eigenvalue,
        convexity_violations: hess.violations,
        path_independence_max_rel_err: path.max_rel_err,
    })
}

/// Coordinate plane for contour cuts; the third coordinate is held fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Plane {
    Xy,
    Xz,
    Yz,
}

impl Plane {
    fn embed(self, fixed: f64, u: f64, v: f64) -> FluxDensity {
        match self {
            Plane::Xy => FluxDensity::new(u, v, fixed),
            Plane::Xz => FluxDensity::new(u, fixed, v),
            Plane::Yz => FluxDensity::new(fixed, u, v),
        }
    }

    /// Axis labels of the in-plane coordinates.
    pub fn axes(self) -> (&'static str, &'static str) {
        match self {
            Plane::Xy => ("bx", "by"),
            Plane::Xz => ("bx", "bz"),
            Plane::Yz => ("by", "bz"),
        }
    }
}

impl FromStr for Plane {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "xy" => Ok(Plane::Xy),
            "xz" => Ok(Plane::Xz),
            "yz" => Ok(Plane::Yz),
            other => Err(format!("unknown plane '{other}' (expected xy, xz, or yz)")),
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Plane::Xy => "xy",
            Plane::Xz => "xz",
            Plane::Yz => "yz",
        })
    }
}

/// A closed iso-energy polyline in a coordinate plane.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsoContour {
    pub plane: Plane,
    pub fixed_component: f64,
    pub level: f64,
    /// In-plane vertices, one per sampled angle, counter-clockwise.
    pub points: Vec<[f64; 2]>,
}

impl IsoContour {
    /// Cross-product sign test over consecutive edges of the closed polygon.
    pub fn is_convex(&self) -> bool {
        let n = self.points.len();
        if n < 3 {
            return false;
        }
        let mut sign = 0.0f64;
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            let c = self.points[(i + 2) % n];
            let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if cross == 0.0 {
                continue;
            }
            if sign == 0.0 {
                sign = cross.signum();
            } else if cross.signum() != sign {
                return false;
            }
        }
        sign != 0.0
    }

    /// True when `pt` lies strictly inside the (convex, counter-clockwise)
    /// polygon.
    pub fn contains(&self, pt: [f64; 2]) -> bool {
        let n = self.points.len();
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            let cross = (b[0] - a[0]) * (pt[1] - a[1]) - (b[1] - a[1]) * (pt[0] - a[0]);
            if cross <= 0.0 {
                return false;
            }
        }
        true
    }
}

/// Extracts the iso-line w = level by radial bisection: along each of
/// `n_angles` equispaced directions the energy is strictly increasing (a
/// convex law with minimum 0 at the origin), so the crossing radius is
/// unique and bracketed.
pub fn extract_contour(
    law: &dyn MaterialLaw,
    plane: Plane,
    fixed: f64,
    level: f64,
    n_angles: usize,
) -> Result<IsoContour> {
    if level <= 0.0 || !level.is_finite() {
        return Err(Error::LevelUnreachable {
            level,
            angle: 0.0,
            detail: "level must be positive".into(),
        });
    }
    let origin_w = law
        .energy(plane.embed(fixed, 0.0, 0.0))
        .map_err(|e| Error::LevelUnreachable {
            level,
            angle: 0.0,
            detail: format!("in-plane origin not evaluable: {e}"),
        })?;
    if origin_w >= level {
        return Err(Error::LevelUnreachable {
            level,
            angle: 0.0,
            detail: format!("energy at the in-plane origin ({origin_w}) already exceeds the level"),
        });
    }

    let mut points = Vec::with_capacity(n_angles);
    let mut prev_r: f64 = 0.25;
    for i in 0..n_angles {
        let angle = std::f64::consts::TAU * i as f64 / n_angles as f64;
        let (cu, cv) = (angle.cos(), angle.sin());
        let eval = |r: f64| law.energy(plane.embed(fixed, r * cu, r * cv));

        let mut lo = 0.0;
        let mut hi = prev_r.max(1e-6);
        let mut grow = 0;
        loop {
            match eval(hi) {
                Ok(w) if w >= level => break,
                Ok(_) => {
                    lo = hi;
                    hi *= 2.0;
                    grow += 1;
                    if grow > 200 {
                        return Err(Error::LevelUnreachable {
                            level,
                            angle,
                            detail: "level not reached while expanding the bracket".into(),
                        });
                    }
                }
                // The bracket now contains either the crossing or the edge
                // of the law's valid range; bisection separates the cases.
                Err(_) => break,
            }
        }
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            match eval(mid) {
                Ok(w) if w < level => lo = mid,
                _ => hi = mid,
            }
        }
        let (r, w_r) = match eval(0.5 * (lo + hi)) {
            Ok(w) => (0.5 * (lo + hi), w),
            Err(_) => (lo, eval(lo).map_err(|_| Error::NonMonotoneRay { angle })?),
        };
        if (w_r - level).abs() <= 1e-6 * level {
            points.push([r * cu, r * cv]);
            prev_r = r;
        } else if w_r < level {
            return Err(Error::LevelUnreachable {
                level,
                angle,
                detail: format!(
                    "ray exits the valid range at r = {r} with w = {w_r} below the level"
                ),
            });
        } else {
            return Err(Error::NonMonotoneRay { angle });
        }
    }
    Ok(IsoContour {
        plane,
        fixed_component: fixed,
        level,
        points,
    })
}

/// Plot-friendly dump: two columns per point, first point repeated to
/// close each polygon, blank line between contours.
pub fn contours_to_text(contours: &[IsoContour]) -> String {
    let mut out = String::new();
    for (k, c) in contours.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for p in &c.points {
            out.push_str(&format!("{} {}\n", p[0], p[1]));
        }
        if let Some(first) = c.points.first() {
            out.push_str(&format!("{} {}\n", first[0], first[1]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Result;
    use crate::field::{FieldStrength, MU0};
    use crate::fixtures;
    use crate::law::{IsotropicLaw, LinearAnisotropicLaw, VacuumLaw};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    // Injected fault: field scaled away from the energy gradient.
    struct ScaledFieldLaw(f64);

    impl MaterialLaw for ScaledFieldLaw {
        fn energy(&self, b: FluxDensity) -> Result<f64> {
            VacuumLaw.energy(b)
        }
        fn field(&self, b: FluxDensity) -> Result<FieldStrength> {
            Ok(VacuumLaw.field(b)? * self.0)
        }
        fn reluctivity(&self, b: FluxDensity) -> Result<SymTensor3> {
            VacuumLaw.reluctivity(b)
        }
        fn describe(&self) -> String {
            format!("scaled_field({})", self.0)
        }
    }

    // Injected fault in the style of effective-reluctivity literature
    // models: a non-symmetric field Jacobian, which no energy density can
    // produce.
    struct AsymmetricLaw;

    impl MaterialLaw for AsymmetricLaw {
        fn energy(&self, b: FluxDensity) -> Result<f64> {
            Ok(0.5 * 2000.0 * b.norm_sq() + 500.0 * b.bx * b.by)
        }
        fn field(&self, b: FluxDensity) -> Result<FieldStrength> {
            Ok(FieldStrength::new(
                2000.0 * b.bx + 500.0 * b.by,
                2000.0 * b.by,
                2000.0 * b.bz,
            ))
        }
        fn reluctivity(&self, _b: FluxDensity) -> Result<SymTensor3> {
            Ok(SymTensor3::diagonal(2000.0, 2000.0, 2000.0))
        }
        fn describe(&self) -> String {
            "asymmetric_fixture".into()
        }
    }

    #[test]
    fn gradient_check_passes_for_quadratic_energies() {
        let g = check_gradient(&VacuumLaw, 2.0, 100, 7, 1e-6).unwrap();
        assert!(g.max_rel_err <= 1e-6, "{}", g.max_rel_err);
        let lin =
            LinearAnisotropicLaw::new(SymTensor3::new(2000.0, 300.0, 0.0, 1500.0, 100.0, 2500.0))
                .unwrap();
        let g = check_gradient(&lin, 2.0, 100, 7, 1e-6).unwrap();
        assert!(g.max_rel_err <= 1e-6, "{}", g.max_rel_err);
    }

    #[test]
    fn gradient_check_flags_scaled_field() {
        let g = check_gradient(&ScaledFieldLaw(1.01), 2.0, 100, 7, 1e-6).unwrap();
        assert!(g.max_rel_err > 1e-3, "{}", g.max_rel_err);
    }

    #[test]
    fn hessian_check_vacuum() {
        let h = check_hessian(&VacuumLaw, 2.0, 100, 7, 1e-5).unwrap();
        assert!(h.asym_max <= 1e-9);
        assert_relative_eq!(h.min_eigenvalue, 1.0 / MU0, max_relative = 1e-6);
        assert!(h.violations.is_empty());
    }

    #[test]
    fn hessian_check_flags_asymmetric_law() {
        let h = check_hessian(&AsymmetricLaw, 1.0, 50, 7, 1e-5).unwrap();
        assert!(h.asym_max > 1e-2, "{}", h.asym_max);
    }

    #[test]
    fn out_of_range_points_are_skipped() {
        let law = IsotropicLaw::new(fixtures::linear_curve(1000.0, 0.5, 6));
        // Radius far beyond the curve: most points skip, some survive.
        let g = check_gradient(&law, 2.0, 200, 7, 1e-6).unwrap();
        assert!(g.skipped > 0);
        assert!(g.tested > 0);
        assert!(g.max_rel_err <= 1e-5);
    }

    #[test]
    fn all_points_out_of_range_is_an_error() {
        let law = IsotropicLaw::new(fixtures::linear_curve(1000.0, 0.01, 3));
        assert!(matches!(
            check_gradient(&law, 2.0, 50, 7, 1e-6),
            Err(Error::AllPointsOutOfRange { .. })
        ));
    }

    #[test]
    fn closed_loop_integrates_to_zero() {
        let law = IsotropicLaw::new(fixtures::mild_steel());
        let a = FluxDensity::new(0.9, 0.2, 0.1);
        let b = FluxDensity::new(0.1, 0.8, -0.3);
        let loop_path = [FluxDensity::ZERO, a, b, FluxDensity::ZERO];
        let w_loop = path_energy(&law, &loop_path).unwrap();
        let w_a = law.energy(a).unwrap();
        assert!(w_loop.abs() <= 1e-8 * w_a, "loop {w_loop} vs w(a) {w_a}");
    }

    #[test]
    fn straight_ray_reproduces_energy() {
        let law = IsotropicLaw::new(fixtures::mild_steel());
        let a = FluxDensity::new(0.7, -0.6, 0.4);
        let w_ray = path_energy(&law, &[FluxDensity::ZERO, a]).unwrap();
        assert_relative_eq!(w_ray, law.energy(a).unwrap(), max_relative = 1e-6);
    }

    #[test]
    fn staircase_agrees_with_ray() {
        let law = IsotropicLaw::new(fixtures::mild_steel());
        let p = check_path_independence(&law, 1.2, 25, 11).unwrap();
        assert!(p.max_rel_err <= 1e-6, "{}", p.max_rel_err);
    }

    #[test]
    fn vacuum_contour_is_the_unit_circle() {
        let level = 1.0 / (2.0 * MU0);
        let c = extract_contour(&VacuumLaw, Plane::Xy, 0.0, level, 720).unwrap();
        for p in &c.points {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert_abs_diff_eq!(r, 1.0, epsilon = 1e-9);
        }
        assert!(c.is_convex());
    }

    #[test]
    fn linear_diagonal_contour_is_the_expected_ellipse() {
        let (n1, n2) = (2000.0, 8000.0);
        let law = LinearAnisotropicLaw::new(SymTensor3::diagonal(n1, n2, n1)).unwrap();
        let level = 1000.0;
        let c = extract_contour(&law, Plane::Xy, 0.0, level, 360).unwrap();
        let (a, b) = ((2.0 * level / n1).sqrt(), (2.0 * level / n2).sqrt());
        for p in &c.points {
            let v = (p[0] / a).powi(2) + (p[1] / b).powi(2);
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn isotropic_contour_radius_variance_vanishes() {
        let law = IsotropicLaw::new(fixtures::mild_steel());
        let level = law.energy(FluxDensity::new(1.0, 0.0, 0.0)).unwrap();
        let c = extract_contour(&law, Plane::Xy, 0.0, level, 180).unwrap();
        let radii: Vec<f64> = c
            .points
            .iter()
            .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
            .collect();
        let mean = radii.iter().sum::<f64>() / radii.len() as f64;
        let var = radii.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / radii.len() as f64;
        assert!(var <= 1e-9, "variance {var}");
    }

    #[test]
    fn contours_nest_across_levels() {
        let law = IsotropicLaw::new(fixtures::mild_steel());
        let c1 = extract_contour(&law, Plane::Xy, 0.0, 200.0, 120).unwrap();
        let c2 = extract_contour(&law, Plane::Xy, 0.0, 800.0, 120).unwrap();
        for p in &c1.points {
            assert!(c2.contains(*p));
        }
    }

    #[test]
    fn unreachable_level_is_reported() {
        let law = IsotropicLaw::new(fixtures::linear_curve(1000.0, 1.0, 11));
        // w_max = 500 on this curve; level 10000 exits the range first.
        let err = extract_contour(&law, Plane::Xy, 0.0, 10_000.0, 16).unwrap_err();
        assert!(matches!(err, Error::LevelUnreachable { .. }), "{err}");
    }

    #[test]
    fn off_plane_cut_of_a_shifted_level() {
        // Fixing z != 0 still yields a convex nested contour for levels
        // above the origin energy of that plane.
        let law = IsotropicLaw::new(fixtures::mild_steel());
        let w0 = law.energy(FluxDensity::new(0.0, 0.0, 0.5)).unwrap();
        let c = extract_contour(&law, Plane::Xy, 0.5, 2.0 * w0, 90).unwrap();
        assert!(c.is_convex());
        for p in &c.points {
            let w = law
                .energy(FluxDensity::new(p[0], p[1], 0.5))
                .unwrap();
            assert_abs_diff_eq!(w / (2.0 * w0), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn report_round_trips_through_json() {
        let report = run_validation(&VacuumLaw, &CheckConfig::default()).unwrap();
        assert!(report.passes(&Tolerances::default()));
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: ValidationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.law_id, report.law_id);
        assert_eq!(back.seed, report.seed);
        assert!(
            (back.gradient_max_rel_err - report.gradient_max_rel_err).abs()
                <= 1e-15 * report.gradient_max_rel_err.abs().max(1e-300)
        );
    }

    #[test]
    fn contour_text_format() {
        let c = IsoContour {
            plane: Plane::Xy,
            fixed_component: 0.0,
            level: 1.0,
            points: vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]],
        };
        let text = contours_to_text(&[c.clone(), c]);
        let blocks: Vec<&str> = text.split("\n\n").collect();
        assert_eq!(blocks.len(), 2);
        let first: Vec<&str> = blocks[0].trim_end().lines().collect();
        assert_eq!(first.len(), 4);
        assert_eq!(first[0], first[3]);
        assert_eq!(first[0], "1 0");
    }
}
