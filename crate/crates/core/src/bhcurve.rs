//! Scalar BH measurement curves: ingestion, monotone interpolation,
//! energy integration, inversion, and saturation extrapolation.
//!
//! A curve stores the measured knots (H, B) with B strictly increasing,
//! a shape-preserving cubic interpolant for H(B), and the cumulative
//! energy w(B) = ∫ H dB evaluated exactly from the interpolant. The
//! optional extension handles queries beyond the last measured knot.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::MU0;
use crate::interp;
use crate::numeric::solve_increasing;

/// One Epstein-frame measurement point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BHSample {
    /// Field strength, A/m.
    pub h: f64,
    /// Flux density, tesla.
    pub b: f64,
}

/// How a curve continues beyond its last measured knot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtrapolationMode {
    /// Fully saturated: dB/dH = μ0 (relative permeability of one).
    RollingLinear,
    /// Exponential approach to the common saturation asymptote B_sat + μ0·H.
    TransverseApproach,
}

/// Default approach rate for the transverse continuation, A/m.
pub const DEFAULT_TAU: f64 = 5000.0;

#[derive(Clone, Copy, Debug)]
pub struct ExtrapolationSpec {
    /// Saturation flux density, tesla.
    pub b_sat: f64,
    pub mode: ExtrapolationMode,
    /// Approach rate, A/m. Only used by the transverse mode.
    pub tau: f64,
}

impl ExtrapolationSpec {
    pub fn rolling(b_sat: f64) -> Self {
        Self {
            b_sat,
            mode: ExtrapolationMode::RollingLinear,
            tau: DEFAULT_TAU,
        }
    }

    pub fn transverse(b_sat: f64, tau: f64) -> Self {
        Self {
            b_sat,
            mode: ExtrapolationMode::TransverseApproach,
            tau,
        }
    }
}

// Extension state cached at attach time. For the transverse mode,
// B(H) = b_sat + μ0·H - delta_b·exp(-(H - h_end)/tau) with delta_b chosen
// so the extension is continuous at the last knot.
#[derive(Clone, Copy, Debug)]
struct Extension {
    mode: ExtrapolationMode,
    b_sat: f64,
    tau: f64,
    h_end: f64,
    b_end: f64,
    w_end: f64,
    delta_b: f64,
}

/// A monotone, anhysteretic BH curve anchored at the origin.
#[derive(Clone, Debug)]
pub struct BHCurve {
    label: String,
    b: Vec<f64>,
    h: Vec<f64>,
    /// dH/dB at the knots (Fritsch-Carlson).
    slopes: Vec<f64>,
    /// Cumulative energy w(bᵢ) at the knots, J/m³.
    w: Vec<f64>,
    ext: Option<Extension>,
}

/// Builds a curve from raw (h, b) pairs: sorts by h, merges duplicate
/// set-points, anchors the origin, fits the monotone interpolant, and
/// integrates the energy table.
pub fn load_curve(rows: &[(f64, f64)]) -> Result<BHCurve> {
    let indexed: Vec<(f64, f64, usize)> = rows
        .iter()
        .enumerate()
        .map(|(i, &(h, b))| (h, b, i + 1))
        .collect();
    BHCurve::build(indexed, "curve")
}

impl BHCurve {
    fn build(mut rows: Vec<(f64, f64, usize)>, label: &str) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::TooFewSamples { got: rows.len() });
        }
        for &(h, b, row) in &rows {
            if !h.is_finite() || !b.is_finite() {
                return Err(Error::InvalidSample {
                    row,
                    detail: format!("non-finite value (h={h}, b={b})"),
                });
            }
            if h < 0.0 || b < 0.0 {
                return Err(Error::InvalidSample {
                    row,
                    detail: format!("negative value (h={h}, b={b})"),
                });
            }
        }
        rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        // Measurement rigs emit repeated set-points; merge h-duplicates by
        // averaging b.
        let mut merged: Vec<(f64, f64, usize)> = Vec::with_capacity(rows.len());
        for (h, b, row) in rows {
            match merged.last_mut() {
                Some(last) if close_rel(last.0, h, 1e-12) => {
                    last.1 = 0.5 * (last.1 + b);
                }
                _ => merged.push((h, b, row)),
            }
        }

        if merged[0].0 > 0.0 {
            merged.insert(0, (0.0, 0.0, 0));
        } else if merged[0].1 != 0.0 {
            return Err(Error::NonMonotone {
                row: merged[0].2,
                detail: format!(
                    "b = {} T at h = 0 A/m; an anhysteretic curve passes through the origin",
                    merged[0].1
                ),
            });
        }

        if merged.len() < 2 {
            return Err(Error::TooFewSamples { got: merged.len() });
        }

        for i in 1..merged.len() {
            if merged[i].1 <= merged[i - 1].1 {
                return Err(Error::NonMonotone {
                    row: merged[i].2,
                    detail: format!(
                        "b must increase with h: b = {} T at h = {} A/m follows b = {} T at h = {} A/m",
                        merged[i].1, merged[i].0, merged[i - 1].1, merged[i - 1].0
                    ),
                });
            }
        }

        let b: Vec<f64> = merged.iter().map(|s| s.1).collect();
        let h: Vec<f64> = merged.iter().map(|s| s.0).collect();
        let slopes = interp::pchip_slopes(&b, &h);
        let mut w = vec![0.0; b.len()];
        for i in 1..b.len() {
            w[i] = w[i - 1]
                + interp::hermite_integral(
                    b[i - 1],
                    b[i],
                    h[i - 1],
                    h[i],
                    slopes[i - 1],
                    slopes[i],
                    b[i],
                );
        }
        Ok(Self {
            label: label.to_string(),
            b,
            h,
            slopes,
            w,
            ext: None,
        })
    }

    /// Reads the two-column CSV format: header `H_A_per_m,B_T`, `#` comments,
    /// LF or CRLF line endings.
    pub fn from_csv_str(text: &str, label: &str) -> Result<Self> {
        let mut rows: Vec<(f64, f64, usize)> = Vec::new();
        let mut header_seen = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r').trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header_seen {
                if line != "H_A_per_m,B_T" {
                    return Err(Error::Csv {
                        line: line_no,
                        detail: format!("expected header 'H_A_per_m,B_T', got '{line}'"),
                    });
                }
                header_seen = true;
                continue;
            }
            let mut parts = line.split(',');
            let (hs, bs) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a.trim(), b.trim()),
                _ => {
                    return Err(Error::Csv {
                        line: line_no,
                        detail: "expected exactly two comma-separated values".into(),
                    })
                }
            };
            let h: f64 = hs.parse().map_err(|_| Error::Csv {
                line: line_no,
                detail: format!("cannot parse '{hs}' as a number"),
            })?;
            let b: f64 = bs.parse().map_err(|_| Error::Csv {
                line: line_no,
                detail: format!("cannot parse '{bs}' as a number"),
            })?;
            rows.push((h, b, line_no));
        }
        if !header_seen {
            return Err(Error::Csv {
                line: 1,
                detail: "missing header 'H_A_per_m,B_T'".into(),
            });
        }
        Self::build(rows, label)
    }

    pub fn from_csv_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "curve".into());
        Self::from_csv_str(&text, &label)
    }

    /// Writes the knots back out in the ingestion CSV format.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("H_A_per_m,B_T\n");
        for (h, b) in self.h.iter().zip(self.b.iter()) {
            let _ = writeln!(out, "{h},{b}");
        }
        out
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: &str) {
        self.label = label.to_string();
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn samples(&self) -> Vec<BHSample> {
        self.h
            .iter()
            .zip(self.b.iter())
            .map(|(&h, &b)| BHSample { h, b })
            .collect()
    }

    /// Energy at each knot, J/m³, aligned with `samples()`.
    pub fn energy_table(&self) -> &[f64] {
        &self.w
    }

    /// Last measured flux density, tesla.
    pub fn b_knot_max(&self) -> f64 {
        *self.b.last().unwrap()
    }

    /// Largest queryable flux density: infinite once an extrapolation is attached.
    pub fn b_max(&self) -> f64 {
        if self.ext.is_some() {
            f64::INFINITY
        } else {
            self.b_knot_max()
        }
    }

    /// Largest queryable energy, J/m³.
    pub fn w_max(&self) -> f64 {
        if self.ext.is_some() {
            f64::INFINITY
        } else {
            *self.w.last().unwrap()
        }
    }

    pub fn is_extrapolated(&self) -> bool {
        self.ext.is_some()
    }

    /// Attaches a saturation continuation beyond the last knot.
    pub fn extrapolate(self, spec: ExtrapolationSpec) -> Result<Self> {
        let h_end = *self.h.last().unwrap();
        let b_end = *self.b.last().unwrap();
        let w_end = *self.w.last().unwrap();
        if spec.b_sat < b_end {
            return Err(Error::BSatTooSmall {
                b_sat: spec.b_sat,
                b_end,
            });
        }
        let delta_b = match spec.mode {
            ExtrapolationMode::RollingLinear => 0.0,
            ExtrapolationMode::TransverseApproach => {
                if !(spec.tau > 0.0) {
                    return Err(Error::NonConvexExtension {
                        detail: format!("approach rate tau = {} A/m must be positive", spec.tau),
                    });
                }
                let delta_b = spec.b_sat + MU0 * h_end - b_end;
                // dB/dH = μ0 + (ΔB/τ)·exp(-x) must stay positive; its minimum
                // over the extension is at the junction when ΔB < 0.
                if MU0 + delta_b / spec.tau <= 0.0 {
                    return Err(Error::NonConvexExtension {
                        detail: format!(
                            "dB/dH = {} at the junction; increase b_sat or tau",
                            MU0 + delta_b / spec.tau
                        ),
                    });
                }
                delta_b
            }
        };
        Ok(Self {
            ext: Some(Extension {
                mode: spec.mode,
                b_sat: spec.b_sat,
                tau: spec.tau,
                h_end,
                b_end,
                w_end,
                delta_b,
            }),
            ..self
        })
    }

    // Index of the knot interval containing b (b within the sampled range).
    fn interval(&self, b: f64) -> usize {
        match self
            .b
            .binary_search_by(|probe| probe.partial_cmp(&b).unwrap())
        {
            Ok(i) => i.min(self.b.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.b.len() - 2),
        }
    }

    fn out_of_range(&self, b: f64) -> Error {
        Error::OutOfRange {
            curve: self.label.clone(),
            b,
            b_max: self.b_knot_max(),
        }
    }

    /// Interpolated (or extrapolated) field strength H(b), A/m.
    pub fn h_of_b(&self, b: f64) -> Result<f64> {
        if b < 0.0 {
            return Err(Error::NegativeB { b });
        }
        let b_end = self.b_knot_max();
        if b <= b_end {
            let i = self.interval(b);
            return Ok(interp::hermite_eval(
                self.b[i],
                self.b[i + 1],
                self.h[i],
                self.h[i + 1],
                self.slopes[i],
                self.slopes[i + 1],
                b,
            ));
        }
        let ext = self.ext.ok_or_else(|| self.out_of_range(b))?;
        match ext.mode {
            ExtrapolationMode::RollingLinear => Ok(ext.h_end + (b - ext.b_end) / MU0),
            ExtrapolationMode::TransverseApproach => Ok(transverse_h_of_b(&ext, b)),
        }
    }

    /// Differential slope dH/dB at b, 1/(H/m).
    pub fn dh_db(&self, b: f64) -> Result<f64> {
        if b < 0.0 {
            return Err(Error::NegativeB { b });
        }
        let b_end = self.b_knot_max();
        if b <= b_end {
            let i = self.interval(b);
            return Ok(interp::hermite_deriv(
                self.b[i],
                self.b[i + 1],
                self.h[i],
                self.h[i + 1],
                self.slopes[i],
                self.slopes[i + 1],
                b,
            ));
        }
        let ext = self.ext.ok_or_else(|| self.out_of_range(b))?;
        match ext.mode {
            ExtrapolationMode::RollingLinear => Ok(1.0 / MU0),
            ExtrapolationMode::TransverseApproach => {
                let h = transverse_h_of_b(&ext, b);
                let x = (h - ext.h_end) / ext.tau;
                Ok(1.0 / (MU0 + ext.delta_b / ext.tau * (-x).exp()))
            }
        }
    }

    /// Stored energy density w(b) = ∫₀ᵇ H dB, J/m³, from the exact
    /// antiderivative of the interpolant.
    pub fn w_of_b(&self, b: f64) -> Result<f64> {
        if b < 0.0 {
            return Err(Error::NegativeB { b });
        }
        let b_end = self.b_knot_max();
        if b <= b_end {
            let i = self.interval(b);
            return Ok(self.w[i]
                + interp::hermite_integral(
                    self.b[i],
                    self.b[i + 1],
                    self.h[i],
                    self.h[i + 1],
                    self.slopes[i],
                    self.slopes[i + 1],
                    b,
                ));
        }
        let ext = self.ext.ok_or_else(|| self.out_of_range(b))?;
        match ext.mode {
            ExtrapolationMode::RollingLinear => {
                let db = b - ext.b_end;
                Ok(ext.w_end + ext.h_end * db + db * db / (2.0 * MU0))
            }
            ExtrapolationMode::TransverseApproach => {
                // Integration by parts: ∫ H dB = H·B - ∫ B dH with the
                // closed-form antiderivative of B(H).
                let hb = transverse_h_of_b(&ext, b);
                let x = (hb - ext.h_end) / ext.tau;
                let int_b_dh = ext.b_sat * (hb - ext.h_end)
                    + 0.5 * MU0 * (hb * hb - ext.h_end * ext.h_end)
                    + ext.tau * ext.delta_b * ((-x).exp() - 1.0);
                Ok(ext.w_end + hb * b - ext.h_end * ext.b_end - int_b_dh)
            }
        }
    }

    /// Inverse of `w_of_b`: the unique b with w(b) = w, to 1e-12 T.
    pub fn b_of_w(&self, w: f64) -> Result<f64> {
        if w < 0.0 {
            return Err(Error::EnergyOutOfRange {
                curve: self.label.clone(),
                w,
                w_max: *self.w.last().unwrap(),
            });
        }
        if w == 0.0 {
            return Ok(0.0);
        }
        let w_end = *self.w.last().unwrap();
        if w <= w_end {
            let i = match self
                .w
                .binary_search_by(|probe| probe.partial_cmp(&w).unwrap())
            {
                Ok(i) => return Ok(self.b[i]),
                Err(i) => i.saturating_sub(1).min(self.w.len() - 2),
            };
            let (lo, hi) = (self.b[i], self.b[i + 1]);
            return Ok(solve_increasing(
                |b| self.w_of_b(b).unwrap() - w,
                |b| self.h_of_b(b).unwrap(),
                lo,
                hi,
                1e-12,
            ));
        }
        let ext = self.ext.ok_or(Error::EnergyOutOfRange {
            curve: self.label.clone(),
            w,
            w_max: w_end,
        })?;
        match ext.mode {
            ExtrapolationMode::RollingLinear => {
                // w - w_end = h_end·δ + δ²/(2μ0), quadratic in δ = b - b_end.
                let delta = MU0
                    * (-ext.h_end + (ext.h_end * ext.h_end + 2.0 * (w - ext.w_end) / MU0).sqrt());
                Ok(ext.b_end + delta)
            }
            ExtrapolationMode::TransverseApproach => {
                let mut hi = ext.b_end + 0.1;
                while self.w_of_b(hi)? < w {
                    hi = ext.b_end + 2.0 * (hi - ext.b_end);
                }
                Ok(solve_increasing(
                    |b| self.w_of_b(b).unwrap() - w,
                    |b| self.h_of_b(b).unwrap(),
                    ext.b_end,
                    hi,
                    1e-12,
                ))
            }
        }
    }
}

// Solves B(H) = b on the transverse extension. B(H) is concave and
// increasing, so safeguarded Newton from the right end of the bracket
// converges monotonically.
fn transverse_h_of_b(ext: &Extension, b: f64) -> f64 {
    let b_of_h = |h: f64| ext.b_sat + MU0 * h - ext.delta_b * (-(h - ext.h_end) / ext.tau).exp();
    let db_dh = |h: f64| MU0 + ext.delta_b / ext.tau * (-(h - ext.h_end) / ext.tau).exp();
    let hi = (ext.h_end).max((b - ext.b_sat + ext.delta_b) / MU0);
    solve_increasing(|h| b_of_h(h) - b, db_dh, ext.h_end, hi, 1e-9)
}

fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}
