//! Homogenized law for a laminated stack of steel sheets (fraction f₂)
//! and insulation (fraction f₁ = 1 − f₂, vacuum properties).
//!
//! Sheets lie in the xy-plane and stack in z. The normal flux component
//! is continuous across layers; the in-plane components mix by volume
//! fraction, which leaves the insulation flux (B₁ₓ, B₁ᵧ) as unknowns.
//! The exact model fixes them by minimizing the mixed energy; the
//! linearized model sets them to zero in the mixing rule, which avoids
//! the per-query solve at the cost of an approximation that must be
//! checked case by case.

use crate::error::{Error, Result};
use crate::field::{FieldStrength, FluxDensity, SymTensor3, MU0};
use crate::law::MaterialLaw;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaminationMode {
    /// Minimize the mixed energy over the insulation flux per query.
    Exact,
    /// Neglect the in-plane insulation flux in the mixing rule.
    Linearized,
}

/// Default convergence tolerance for the insulation-flux solve, tesla.
pub const DEFAULT_SOLVER_TOL: f64 = 1e-10;

const MAX_NEWTON_ITER: usize = 100;
const JACOBIAN_STEP: f64 = 1e-7;

pub struct LaminatedLaw {
    inner: Box<dyn MaterialLaw>,
    f1: f64,
    f2: f64,
    mode: LaminationMode,
    solver_tol: f64,
}

impl LaminatedLaw {
    /// Wraps `inner` (the steel) with insulation volume fraction `f1`.
    pub fn new(inner: Box<dyn MaterialLaw>, f1: f64, mode: LaminationMode) -> Result<Self> {
        if !(0.0..1.0).contains(&f1) {
            return Err(Error::InvalidFraction { f1 });
        }
        Ok(Self {
            inner,
            f1,
            f2: 1.0 - f1,
            mode,
            solver_tol: DEFAULT_SOLVER_TOL,
        })
    }

    pub fn with_solver_tol(mut self, tol: f64) -> Self {
        self.solver_tol = tol;
        self
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    pub fn f2(&self) -> f64 {
        self.f2
    }

    pub fn mode(&self) -> LaminationMode {
        self.mode
    }

    pub fn inner(&self) -> &dyn MaterialLaw {
        self.inner.as_ref()
    }

    // Flux density seen by the steel for a given insulation flux.
    fn material2_flux(&self, b: FluxDensity, b1x: f64, b1y: f64) -> FluxDensity {
        FluxDensity::new(
            (b.bx - self.f1 * b1x) / self.f2,
            (b.by - self.f1 * b1y) / self.f2,
            b.bz,
        )
    }

    /// Mixed energy density before minimization: the volume-weighted sum
    /// of the vacuum energy in the insulation and the steel energy at the
    /// steel's own flux density.
    pub fn energy_star(&self, b: FluxDensity, b1x: f64, b1y: f64) -> Result<f64> {
        let insulation = self.f1 / (2.0 * MU0) * (b1x * b1x + b1y * b1y + b.bz * b.bz);
        let steel = self.f2 * self.inner.energy(self.material2_flux(b, b1x, b1y))?;
        Ok(insulation + steel)
    }

    // Stationarity residual of the mixed energy in field units (A/m):
    // R = B₁/μ0 - F_planar(steel flux).
    fn residual(&self, b: FluxDensity, b1x: f64, b1y: f64) -> Result<[f64; 2]> {
        let h = self.inner.field(self.material2_flux(b, b1x, b1y))?;
        Ok([b1x / MU0 - h.hx, b1y / MU0 - h.hy])
    }

    /// Solves the nonlinear system for the in-plane insulation flux
    /// (B₁ₓ, B₁ᵧ): damped Newton with a finite-difference 2×2 Jacobian,
    /// halving the step until the mixed energy decreases.
    pub fn solve_insulation_flux(&self, b: FluxDensity) -> Result<(f64, f64)> {
        // With no insulation the mixing rule is independent of B₁; the
        // stationarity condition reduces to B₁ = μ0·F(B).
        if self.f1 == 0.0 {
            let h = self.inner.field(b)?;
            return Ok((MU0 * h.hx, MU0 * h.hy));
        }

        // Initial guess: insulation field equals the steel field at the
        // scaled planar flux; falls back to flux continuity (B₁ = B) when
        // the scaled point is outside the steel's range.
        let scaled = FluxDensity::new(b.bx / self.f2, b.by / self.f2, b.bz);
        let mut b1 = match self.inner.field(scaled) {
            Ok(h) => [MU0 * h.hx, MU0 * h.hy],
            Err(_) => [b.bx, b.by],
        };
        if self.residual(b, b1[0], b1[1]).is_err() {
            b1 = [b.bx, b.by];
        }
        let mut merit = self.energy_star(b, b1[0], b1[1])?;
        let mut last_step = f64::INFINITY;

        for iter in 0..MAX_NEWTON_ITER {
            let r = self.residual(b, b1[0], b1[1])?;
            let rn = (r[0] * r[0] + r[1] * r[1]).sqrt();
            if rn <= self.solver_tol / MU0 && last_step <= self.solver_tol {
                return Ok((b1[0], b1[1]));
            }

            let rx = self.residual(b, b1[0] + JACOBIAN_STEP, b1[1])?;
            let ry = self.residual(b, b1[0], b1[1] + JACOBIAN_STEP)?;
            let j = [
                [(rx[0] - r[0]) / JACOBIAN_STEP, (ry[0] - r[0]) / JACOBIAN_STEP],
                [(rx[1] - r[1]) / JACOBIAN_STEP, (ry[1] - r[1]) / JACOBIAN_STEP],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                return Err(Error::NoConvergence {
                    iterations: iter,
                    residual: rn,
                });
            }
            let step = [
                -(j[1][1] * r[0] - j[0][1] * r[1]) / det,
                -(-j[1][0] * r[0] + j[0][0] * r[1]) / det,
            ];

            // Backtracking on the mixed energy, with a rounding slack so a
            // converged iterate on a flat valley is not rejected.
            let slack = 1e-12 * merit.abs() + 1e-12;
            let mut scale = 1.0;
            loop {
                let trial = [b1[0] + scale * step[0], b1[1] + scale * step[1]];
                match self.energy_star(b, trial[0], trial[1]) {
                    Ok(m) if m < merit + slack => {
                        last_step = scale * (step[0] * step[0] + step[1] * step[1]).sqrt();
                        b1 = trial;
                        merit = m;
                        break;
                    }
                    _ => {
                        scale *= 0.5;
                        if scale < 1e-12 {
                            return Err(Error::NoConvergence {
                                iterations: iter,
                                residual: rn,
                            });
                        }
                    }
                }
            }
        }
        let r = self.residual(b, b1[0], b1[1])?;
        Err(Error::NoConvergence {
            iterations: MAX_NEWTON_ITER,
            residual: (r[0] * r[0] + r[1] * r[1]).sqrt(),
        })
    }
}

impl MaterialLaw for LaminatedLaw {
    fn energy(&self, b: FluxDensity) -> Result<f64> {
        match self.mode {
            LaminationMode::Exact => {
                let (b1x, b1y) = self.solve_insulation_flux(b)?;
                self.energy_star(b, b1x, b1y)
            }
            LaminationMode::Linearized => {
                let scaled = FluxDensity::new(b.bx / self.f2, b.by / self.f2, b.bz);
                Ok(self.f1 * b.bz * b.bz / (2.0 * MU0) + self.f2 * self.inner.energy(scaled)?)
            }
        }
    }

    fn field(&self, b: FluxDensity) -> Result<FieldStrength> {
        match self.mode {
            LaminationMode::Exact => {
                // Envelope theorem: the gradient of the minimized energy
                // needs no derivative of the minimizer itself.
                let (b1x, b1y) = self.solve_insulation_flux(b)?;
                let hz_steel = self.inner.field(self.material2_flux(b, b1x, b1y))?.hz;
                Ok(FieldStrength::new(
                    b1x / MU0,
                    b1y / MU0,
                    self.f1 * b.bz / MU0 + self.f2 * hz_steel,
                ))
            }
            LaminationMode::Linearized => {
                let scaled = FluxDensity::new(b.bx / self.f2, b.by / self.f2, b.bz);
                let h = self.inner.field(scaled)?;
                Ok(FieldStrength::new(
                    h.hx,
                    h.hy,
                    self.f1 * b.bz / MU0 + self.f2 * h.hz,
                ))
            }
        }
    }

    fn reluctivity(&self, b: FluxDensity) -> Result<SymTensor3> {
        match self.mode {
            LaminationMode::Exact => {
                let (b1x, b1y) = self.solve_insulation_flux(b)?;
                let nu2 = self.inner.reluctivity(self.material2_flux(b, b1x, b1y))?;
                // Implicit differentiation of the stationarity condition:
                // with M the in-plane block of ν₂, m its xz/yz column and
                // s = ν₂zz,
                //   A   = (I/μ0 + (f1/f2)·M)⁻¹
                //   ν_pp = A·M/(μ0·f2),  ν_pz = A·m/μ0,
                //   ν_zz = f1/μ0 + f2·s - f1·mᵀAm.
                let c = self.f1 / self.f2;
                let k = [
                    [1.0 / MU0 + c * nu2.xx, c * nu2.xy],
                    [c * nu2.xy, 1.0 / MU0 + c * nu2.yy],
                ];
                let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
                let a = [
                    [k[1][1] / det, -k[0][1] / det],
                    [-k[1][0] / det, k[0][0] / det],
                ];
                let am = [
                    [a[0][0] * nu2.xx + a[0][1] * nu2.xy, a[0][0] * nu2.xy + a[0][1] * nu2.yy],
                    [a[1][0] * nu2.xx + a[1][1] * nu2.xy, a[1][0] * nu2.xy + a[1][1] * nu2.yy],
                ];
                let pz = [
                    (a[0][0] * nu2.xz + a[0][1] * nu2.yz) / MU0,
                    (a[1][0] * nu2.xz + a[1][1] * nu2.yz) / MU0,
                ];
                let mam = nu2.xz * (a[0][0] * nu2.xz + a[0][1] * nu2.yz)
                    + nu2.yz * (a[1][0] * nu2.xz + a[1][1] * nu2.yz);
                let scale = 1.0 / (MU0 * self.f2);
                Ok(SymTensor3::new(
                    am[0][0] * scale,
                    0.5 * (am[0][1] + am[1][0]) * scale,
                    pz[0],
                    am[1][1] * scale,
                    pz[1],
                    self.f1 / MU0 + self.f2 * nu2.zz - self.f1 * mam,
                ))
            }
            LaminationMode::Linearized => {
                let scaled = FluxDensity::new(b.bx / self.f2, b.by / self.f2, b.bz);
                let nu2 = self.inner.reluctivity(scaled)?;
                Ok(SymTensor3::new(
                    nu2.xx / self.f2,
                    nu2.xy / self.f2,
                    nu2.xz,
                    nu2.yy / self.f2,
                    nu2.yz,
                    self.f1 / MU0 + self.f2 * nu2.zz,
                ))
            }
        }
    }

    fn describe(&self) -> String {
        let mode = match self.mode {
            LaminationMode::Exact => "exact",
            LaminationMode::Linearized => "linearized",
        };
        format!(
            "laminated(f1={}, {}, inner={})",
            self.f1,
            mode,
            self.inner.describe()
        )
    }

    fn planar(&self) -> bool {
        self.inner.planar()
    }
}
