//! The material-law interface and the elementary laws.
//!
//! Every law is defined by a convex energy density w(B); the field
//! strength is its gradient and the differential reluctivity its
//! Hessian. That structure is what guarantees energy-conservative,
//! thermodynamically stable behaviour in a field solver.

use crate::bhcurve::BHCurve;
use crate::error::{Error, Result};
use crate::field::{is_positive_definite, quadratic_form, FieldStrength, FluxDensity, SymTensor3, MU0};

/// A BH relationship represented through its energy density.
///
/// Implementations are immutable after construction and evaluation is
/// pure, so laws can be queried concurrently from any number of threads.
pub trait MaterialLaw: Send + Sync {
    /// Stored magnetic energy density w(B), J/m³.
    fn energy(&self, b: FluxDensity) -> Result<f64>;

    /// Field strength H(B) = ∇w, A/m.
    fn field(&self, b: FluxDensity) -> Result<FieldStrength>;

    /// Differential reluctivity ∂Hᵢ/∂Bⱼ, the Hessian of w.
    fn reluctivity(&self, b: FluxDensity) -> Result<SymTensor3>;

    /// Short human-readable identifier for reports and diagnostics.
    fn describe(&self) -> String;

    /// True for laws defined only in the sheet plane (bz = 0).
    fn planar(&self) -> bool {
        false
    }
}

/// Free space: w = |B|²/(2μ0), H = B/μ0.
#[derive(Clone, Copy, Debug, Default)]
pub struct VacuumLaw;

impl MaterialLaw for VacuumLaw {
    fn energy(&self, b: FluxDensity) -> Result<f64> {
        Ok(b.norm_sq() / (2.0 * MU0))
    }

    fn field(&self, b: FluxDensity) -> Result<FieldStrength> {
        Ok(FieldStrength::new(b.bx / MU0, b.by / MU0, b.bz / MU0))
    }

    fn reluctivity(&self, _b: FluxDensity) -> Result<SymTensor3> {
        Ok(SymTensor3::scaled_identity(1.0 / MU0))
    }

    fn describe(&self) -> String {
        "vacuum".into()
    }
}

/// Constant symmetric reluctivity: w = ½·B·νB, H = νB.
///
/// The factor ½ makes the field exactly the gradient of the energy.
#[derive(Clone, Copy, Debug)]
pub struct LinearAnisotropicLaw {
    nu: SymTensor3,
}

impl LinearAnisotropicLaw {
    /// Rejects tensors that are not positive definite; a stable material
    /// cannot have one.
    pub fn new(nu: SymTensor3) -> Result<Self> {
        if !nu.is_finite() || !is_positive_definite(nu) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self { nu })
    }

    pub fn nu(&self) -> SymTensor3 {
        self.nu
    }
}

impl MaterialLaw for LinearAnisotropicLaw {
    fn energy(&self, b: FluxDensity) -> Result<f64> {
        Ok(0.5 * quadratic_form(self.nu, b.as_array()))
    }

    fn field(&self, b: FluxDensity) -> Result<FieldStrength> {
        Ok(self.nu.apply(b))
    }

    fn reluctivity(&self, _b: FluxDensity) -> Result<SymTensor3> {
        Ok(self.nu)
    }

    fn describe(&self) -> String {
        "linear".into()
    }
}

/// Nonlinear isotropic law: w(B) = w_curve(|B|) from a measured curve.
#[derive(Clone, Debug)]
pub struct IsotropicLaw {
    curve: BHCurve,
}

impl IsotropicLaw {
    pub fn new(curve: BHCurve) -> Self {
        Self { curve }
    }

    pub fn curve(&self) -> &BHCurve {
        &self.curve
    }
}

impl MaterialLaw for IsotropicLaw {
    fn energy(&self, b: FluxDensity) -> Result<f64> {
        self.curve.w_of_b(b.norm())
    }

    fn field(&self, b: FluxDensity) -> Result<FieldStrength> {
        let bn = b.norm();
        if bn == 0.0 {
            // Removable singularity: the curve passes through the origin.
            return Ok(FieldStrength::ZERO);
        }
        let h = self.curve.h_of_b(bn)?;
        Ok(FieldStrength::new(
            h * b.bx / bn,
            h * b.by / bn,
            h * b.bz / bn,
        ))
    }

    fn reluctivity(&self, b: FluxDensity) -> Result<SymTensor3> {
        // ν = w″·(b̂⊗b̂) + (w′/|B|)·(I − b̂⊗b̂), evaluated analytically to
        // avoid finite-difference noise near the axis.
        let bn = b.norm();
        if bn == 0.0 {
            let k0 = self.curve.dh_db(0.0)?;
            return Ok(SymTensor3::scaled_identity(k0));
        }
        let k = self.curve.dh_db(bn)?;
        let sec = self.curve.h_of_b(bn)? / bn;
        let u = [b.bx / bn, b.by / bn, b.bz / bn];
        let d = k - sec;
        Ok(SymTensor3::new(
            sec + d * u[0] * u[0],
            d * u[0] * u[1],
            d * u[0] * u[2],
            sec + d * u[1] * u[1],
            d * u[1] * u[2],
            sec + d * u[2] * u[2],
        ))
    }

    fn describe(&self) -> String {
        format!("isotropic({})", self.curve.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fd_gradient(law: &dyn MaterialLaw, b: FluxDensity, step: f64) -> [f64; 3] {
        let mut g = [0.0; 3];
        for i in 0..3 {
            let mut hi = b.as_array();
            let mut lo = b.as_array();
            hi[i] += step;
            lo[i] -= step;
            g[i] = (law.energy(FluxDensity::from_array(hi)).unwrap()
                - law.energy(FluxDensity::from_array(lo)).unwrap())
                / (2.0 * step);
        }
        g
    }

    #[test]
    fn vacuum_energy_closed_form() {
        let law = VacuumLaw;
        assert_eq!(law.energy(FluxDensity::ZERO).unwrap(), 0.0);
        assert_relative_eq!(
            law.energy(FluxDensity::new(1.0, 0.0, 0.0)).unwrap(),
            1.0 / (2.0 * MU0),
            max_relative = 1e-15
        );
        // Rotational symmetry at |B| = 1.
        assert_relative_eq!(
            law.energy(FluxDensity::new(0.6, 0.8, 0.0)).unwrap(),
            law.energy(FluxDensity::new(1.0, 0.0, 0.0)).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn vacuum_field_closed_form() {
        let law = VacuumLaw;
        let h = law.field(FluxDensity::new(1.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(h.hx, 1.0 / MU0, max_relative = 1e-15);
        assert_eq!(h.hy, 0.0);
        assert_eq!(law.field(FluxDensity::ZERO).unwrap(), FieldStrength::ZERO);
    }

    #[test]
    fn vacuum_field_matches_finite_differences() {
        let law = VacuumLaw;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let b = FluxDensity::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            let g = fd_gradient(&law, b, 1e-6);
            let h = law.field(b).unwrap();
            for (a, e) in h.as_array().iter().zip(g.iter()) {
                assert_relative_eq!(a, e, max_relative = 1e-6, epsilon = 1e-3);
            }
        }
    }

    #[test]
    fn linear_reduces_to_vacuum() {
        let law = LinearAnisotropicLaw::new(SymTensor3::scaled_identity(1.0 / MU0)).unwrap();
        let vac = VacuumLaw;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let b = FluxDensity::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            assert_relative_eq!(
                law.energy(b).unwrap(),
                vac.energy(b).unwrap(),
                max_relative = 1e-14
            );
            assert_relative_eq!(
                law.field(b).unwrap().norm(),
                vac.field(b).unwrap().norm(),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn linear_diagonal_energy() {
        let (n1, n2, n3) = (1000.0, 2000.0, 3000.0);
        let law = LinearAnisotropicLaw::new(SymTensor3::diagonal(n1, n2, n3)).unwrap();
        assert_relative_eq!(
            law.energy(FluxDensity::new(1.0, 1.0, 1.0)).unwrap(),
            0.5 * (n1 + n2 + n3),
            max_relative = 1e-14
        );
    }

    #[test]
    fn linear_field_matches_finite_differences() {
        let law =
            LinearAnisotropicLaw::new(SymTensor3::new(2000.0, 300.0, 100.0, 1500.0, 200.0, 2500.0))
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let b = FluxDensity::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            let g = fd_gradient(&law, b, 1e-6);
            let h = law.field(b).unwrap().as_array();
            for i in 0..3 {
                assert_relative_eq!(h[i], g[i], max_relative = 1e-6, epsilon = 1e-3);
            }
        }
    }

    #[test]
    fn non_positive_definite_nu_rejected() {
        assert!(matches!(
            LinearAnisotropicLaw::new(SymTensor3::diagonal(1.0, 1.0, -1.0)),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn isotropic_energy_depends_only_on_modulus() {
        let law = IsotropicLaw::new(fixtures::saturating_curve(1.8, 2000.0, 40_000.0, 25));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let reference = law.energy(FluxDensity::new(1.3, 0.0, 0.0)).unwrap();
        for _ in 0..50 {
            // Random rotation of (1.3, 0, 0) via normalized random direction.
            let v: [f64; 3] = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n < 1e-3 {
                continue;
            }
            let b = FluxDensity::new(1.3 * v[0] / n, 1.3 * v[1] / n, 1.3 * v[2] / n);
            assert_relative_eq!(law.energy(b).unwrap(), reference, max_relative = 1e-12);
        }
    }

    #[test]
    fn isotropic_linear_fixture_closed_forms() {
        let law = IsotropicLaw::new(fixtures::linear_curve(1000.0, 3.0, 31));
        assert_eq!(law.energy(FluxDensity::ZERO).unwrap(), 0.0);
        assert_relative_eq!(
            law.energy(FluxDensity::new(0.6, 0.8, 0.0)).unwrap(),
            500.0,
            max_relative = 1e-11
        );
        let h = law.field(FluxDensity::new(0.0, 2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(h.hx, 0.0, epsilon = 1e-9);
        assert_relative_eq!(h.hy, 2000.0, max_relative = 1e-11);
        assert_eq!(law.field(FluxDensity::ZERO).unwrap(), FieldStrength::ZERO);
    }

    #[test]
    fn isotropic_field_parallel_to_b() {
        let law = IsotropicLaw::new(fixtures::saturating_curve(1.8, 2000.0, 40_000.0, 25));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let b = FluxDensity::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            if b.norm() < 1e-3 {
                continue;
            }
            let h = law.field(b).unwrap();
            let cross = [
                h.hy * b.bz - h.hz * b.by,
                h.hz * b.bx - h.hx * b.bz,
                h.hx * b.by - h.hy * b.bx,
            ];
            let cn = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
            assert!(cn <= 1e-9 * h.norm() * b.norm());
        }
    }

    #[test]
    fn isotropic_reluctivity_matches_field_jacobian() {
        let law = IsotropicLaw::new(fixtures::saturating_curve(1.8, 2000.0, 40_000.0, 25));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let step = 1e-6;
        for _ in 0..50 {
            let b = FluxDensity::new(
                rng.random_range(-0.9..0.9),
                rng.random_range(-0.9..0.9),
                rng.random_range(-0.9..0.9),
            );
            if b.norm() < 0.05 {
                continue;
            }
            let nu = law.reluctivity(b).unwrap();
            for j in 0..3 {
                let mut hi = b.as_array();
                let mut lo = b.as_array();
                hi[j] += step;
                lo[j] -= step;
                let fh = law.field(FluxDensity::from_array(hi)).unwrap().as_array();
                let fl = law.field(FluxDensity::from_array(lo)).unwrap().as_array();
                let col = nu.mul_vec([
                    if j == 0 { 1.0 } else { 0.0 },
                    if j == 1 { 1.0 } else { 0.0 },
                    if j == 2 { 1.0 } else { 0.0 },
                ]);
                for i in 0..3 {
                    let fd = (fh[i] - fl[i]) / (2.0 * step);
                    assert_relative_eq!(col[i], fd, max_relative = 1e-4, epsilon = 1e-2);
                }
            }
        }
    }

    #[test]
    fn isotropic_reluctivity_at_origin() {
        let law = IsotropicLaw::new(fixtures::linear_curve(1000.0, 3.0, 31));
        let nu = law.reluctivity(FluxDensity::ZERO).unwrap();
        assert_relative_eq!(nu.xx, 1000.0, max_relative = 1e-9);
        assert_relative_eq!(nu.yy, 1000.0, max_relative = 1e-9);
        assert_relative_eq!(nu.zz, 1000.0, max_relative = 1e-9);
        assert_eq!(nu.xy, 0.0);
    }

    #[test]
    fn out_of_range_propagates() {
        let law = IsotropicLaw::new(fixtures::linear_curve(1000.0, 2.0, 21));
        assert!(matches!(
            law.energy(FluxDensity::new(3.0, 0.0, 0.0)),
            Err(Error::OutOfRange { .. })
        ));
    }
}
