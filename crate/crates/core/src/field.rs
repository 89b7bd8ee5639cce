//! Value types for the two field quantities and the reluctivity tensor.
//!
//! Flux density `B` (tesla) and field strength `H` (A/m) are plain
//! immutable 3-vectors; units are semantic, not enforced by the type
//! system. The differential reluctivity is a symmetric 3x3 matrix stored
//! as its six independent entries.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

/// Vacuum permeability, 4π·10⁻⁷ Vs/Am.
pub const MU0: f64 = 4.0e-7 * PI;

/// Magnetic flux density vector, tesla.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxDensity {
    pub bx: f64,
    pub by: f64,
    pub bz: f64,
}

/// Magnetic field strength vector, A/m.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldStrength {
    pub hx: f64,
    pub hy: f64,
    pub hz: f64,
}

impl FluxDensity {
    pub const ZERO: Self = Self {
        bx: 0.0,
        by: 0.0,
        bz: 0.0,
    };

    /// # Panics
    ///
    /// Panics if any component is NaN or infinite.
    pub fn new(bx: f64, by: f64, bz: f64) -> Self {
        assert!(
            bx.is_finite() && by.is_finite() && bz.is_finite(),
            "flux density components must be finite, got ({bx}, {by}, {bz})"
        );
        Self { bx, by, bz }
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.bx, self.by, self.bz]
    }

    pub fn norm_sq(self) -> f64 {
        self.bx * self.bx + self.by * self.by + self.bz * self.bz
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.bx * other.bx + self.by * other.by + self.bz * other.bz
    }

    pub fn is_zero(self) -> bool {
        self.bx == 0.0 && self.by == 0.0 && self.bz == 0.0
    }
}

impl FieldStrength {
    pub const ZERO: Self = Self {
        hx: 0.0,
        hy: 0.0,
        hz: 0.0,
    };

    /// # Panics
    ///
    /// Panics if any component is NaN or infinite.
    pub fn new(hx: f64, hy: f64, hz: f64) -> Self {
        assert!(
            hx.is_finite() && hy.is_finite() && hz.is_finite(),
            "field strength components must be finite, got ({hx}, {hy}, {hz})"
        );
        Self { hx, hy, hz }
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.hx, self.hy, self.hz]
    }

    pub fn norm(self) -> f64 {
        (self.hx * self.hx + self.hy * self.hy + self.hz * self.hz).sqrt()
    }

    /// H·B, the integrand of the stored-energy line integral, J/m³ per tesla.
    pub fn dot_flux(self, b: FluxDensity) -> f64 {
        self.hx * b.bx + self.hy * b.by + self.hz * b.bz
    }
}

impl Add for FluxDensity {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.bx + rhs.bx, self.by + rhs.by, self.bz + rhs.bz)
    }
}

impl Sub for FluxDensity {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.bx - rhs.bx, self.by - rhs.by, self.bz - rhs.bz)
    }
}

impl Mul<f64> for FluxDensity {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.bx * s, self.by * s, self.bz * s)
    }
}

impl Neg for FluxDensity {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.bx, -self.by, -self.bz)
    }
}

impl Mul<f64> for FieldStrength {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.hx * s, self.hy * s, self.hz * s)
    }
}

impl Add for FieldStrength {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.hx + rhs.hx, self.hy + rhs.hy, self.hz + rhs.hz)
    }
}

/// Symmetric 3x3 matrix stored as the six entries of its upper triangle.
///
/// Used for the differential reluctivity ∂Hᵢ/∂Bⱼ (unit 1/(H/m) = A/(V·s) per
/// meter); symmetry holds by construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymTensor3 {
    pub xx: f64,
    pub xy: f64,
    pub xz: f64,
    pub yy: f64,
    pub yz: f64,
    pub zz: f64,
}

impl SymTensor3 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    pub const IDENTITY: Self = Self::new(1.0, 0.0, 0.0, 1.0, 0.0, 1.0);

    pub const fn new(xx: f64, xy: f64, xz: f64, yy: f64, yz: f64, zz: f64) -> Self {
        Self {
            xx,
            xy,
            xz,
            yy,
            yz,
            zz,
        }
    }

    pub const fn diagonal(xx: f64, yy: f64, zz: f64) -> Self {
        Self::new(xx, 0.0, 0.0, yy, 0.0, zz)
    }

    pub fn scaled_identity(s: f64) -> Self {
        Self::diagonal(s, s, s)
    }

    /// The six stored entries in (xx, xy, xz, yy, yz, zz) order.
    pub fn entries(self) -> [f64; 6] {
        [self.xx, self.xy, self.xz, self.yy, self.yz, self.zz]
    }

    pub fn from_entries(e: [f64; 6]) -> Self {
        Self::new(e[0], e[1], e[2], e[3], e[4], e[5])
    }

    pub fn to_rows(self) -> [[f64; 3]; 3] {
        [
            [self.xx, self.xy, self.xz],
            [self.xy, self.yy, self.yz],
            [self.xz, self.yz, self.zz],
        ]
    }

    pub fn is_finite(self) -> bool {
        self.entries().iter().all(|e| e.is_finite())
    }

    pub fn mul_vec(self, v: [f64; 3]) -> [f64; 3] {
        [
            self.xx * v[0] + self.xy * v[1] + self.xz * v[2],
            self.xy * v[0] + self.yy * v[1] + self.yz * v[2],
            self.xz * v[0] + self.yz * v[1] + self.zz * v[2],
        ]
    }

    /// M·B as a field strength, the action of a reluctivity on a flux density.
    pub fn apply(self, b: FluxDensity) -> FieldStrength {
        FieldStrength::from_array(self.mul_vec(b.as_array()))
    }

    pub fn trace(self) -> f64 {
        self.xx + self.yy + self.zz
    }

    pub fn det(self) -> f64 {
        self.xx * (self.yy * self.zz - self.yz * self.yz)
            - self.xy * (self.xy * self.zz - self.yz * self.xz)
            + self.xz * (self.xy * self.yz - self.yy * self.xz)
    }

    /// Eigenvalues in ascending order, by the closed-form solve for
    /// symmetric 3x3 matrices (trigonometric form of the characteristic cubic).
    pub fn eigenvalues(self) -> [f64; 3] {
        let p1 = self.xy * self.xy + self.xz * self.xz + self.yz * self.yz;
        if p1 == 0.0 {
            let mut d = [self.xx, self.yy, self.zz];
            d.sort_by(|a, b| a.partial_cmp(b).unwrap());
            return d;
        }
        let q = self.trace() / 3.0;
        let p2 = (self.xx - q).powi(2) + (self.yy - q).powi(2) + (self.zz - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let b = Self::new(
            (self.xx - q) / p,
            self.xy / p,
            self.xz / p,
            (self.yy - q) / p,
            self.yz / p,
            (self.zz - q) / p,
        );
        let r = (b.det() / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let hi = q + 2.0 * p * phi.cos();
        let lo = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
        let mid = 3.0 * q - hi - lo;
        [lo, mid, hi]
    }
}

/// v·Mv, the double contraction of a symmetric tensor with a vector.
pub fn quadratic_form(m: SymTensor3, v: [f64; 3]) -> f64 {
    let mv = m.mul_vec(v);
    v[0] * mv[0] + v[1] * mv[1] + v[2] * mv[2]
}

/// Sylvester criterion: all three leading principal minors strictly positive.
///
/// Equivalent to v·Mv > 0 for every v ≠ 0.
pub fn is_positive_definite(m: SymTensor3) -> bool {
    let d1 = m.xx;
    let d2 = m.xx * m.yy - m.xy * m.xy;
    let d3 = m.det();
    d1 > 0.0 && d2 > 0.0 && d3 > 0.0
}
