//! Error type shared by curve ingestion, law evaluation, and validation.
//!
//! Domain-of-validity violations are reported, never clamped: a silent
//! clamp would hide extrapolation misconfiguration from FEA callers.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("curve needs at least 2 samples, got {got}")]
    TooFewSamples { got: usize },

    #[error("curve is not monotone at row {row}: {detail}")]
    NonMonotone { row: usize, detail: String },

    #[error("invalid sample at row {row}: {detail}")]
    InvalidSample { row: usize, detail: String },

    #[error("flux density must be non-negative, got {b} T")]
    NegativeB { b: f64 },

    #[error("b = {b} T is beyond curve '{curve}' (max {b_max} T) and no extrapolation is attached")]
    OutOfRange { curve: String, b: f64, b_max: f64 },

    #[error("w = {w} J/m^3 is beyond curve '{curve}' (max {w_max} J/m^3) and no extrapolation is attached")]
    EnergyOutOfRange { curve: String, w: f64, w_max: f64 },

    #[error("saturation flux density {b_sat} T is below the last sampled point {b_end} T")]
    BSatTooSmall { b_sat: f64, b_end: f64 },

    #[error("extrapolation is not monotone: {detail}")]
    NonConvexExtension { detail: String },

    #[error("reluctivity tensor is not positive definite")]
    NotPositiveDefinite,

    #[error("reluctivity input is asymmetric (relative asymmetry {max_rel:e} exceeds 1e-12)")]
    AsymmetricTensor { max_rel: f64 },

    #[error("point lies outside the largest representable iso-ellipse (common axis-curve range {w_max} J/m^3)")]
    ExceedsRange { w_max: f64 },

    #[error("flux density is zero; the iso-line solve needs b != 0")]
    ZeroFlux,

    #[error("law is planar (two axis curves); bz = {bz} T is outside its domain")]
    OutOfPlane { bz: f64 },

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("all {skipped} sample points were outside the law's valid range")]
    AllPointsOutOfRange { skipped: usize },

    #[error("level {level} J/m^3 unreachable along direction {angle} rad: {detail}")]
    LevelUnreachable {
        level: f64,
        angle: f64,
        detail: String,
    },

    #[error("radial bracket invalid along direction {angle} rad; energy is not monotone on the ray")]
    NonMonotoneRay { angle: f64 },

    #[error("insulation fraction f1 = {f1} must lie in [0, 1)")]
    InvalidFraction { f1: f64 },

    #[error("CSV error at line {line}: {detail}")]
    Csv { line: usize, detail: String },

    #[error("law document error: {detail}")]
    LawDoc { detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
