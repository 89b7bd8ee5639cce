//! Constitutive laws for soft-magnetic materials built around a convex
//! magnetic energy density w(B).
//!
//! Every BH relationship here is represented by an energy density: the
//! field strength H is its gradient with respect to the flux density B,
//! and the differential reluctivity is its Hessian — symmetric by
//! construction and positive definite for thermodynamically stable
//! material. The crate provides:
//!
//! - value types for B, H, and symmetric 3x3 reluctivities ([`field`]);
//! - measured BH curve ingestion with monotone interpolation, exact
//!   energy integration, inversion, and saturation extrapolation
//!   ([`bhcurve`]);
//! - elementary laws (vacuum, linear anisotropic, isotropic nonlinear)
//!   behind one [`law::MaterialLaw`] interface;
//! - the grain-oriented law interpolating two or three axis curves with
//!   elliptical iso-energy lines ([`grain_oriented`]);
//! - exact and linearized homogenization of laminated stacks
//!   ([`lamination`]);
//! - gradient/Hessian/path-independence validation and iso-contour
//!   extraction ([`analysis`]);
//! - JSON law documents for composing laws from files ([`lawdoc`]).

pub mod analysis;
pub mod bhcurve;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod grain_oriented;
pub mod lamination;
pub mod law;
pub mod lawdoc;

mod interp;
mod numeric;

pub use analysis::{
    check_gradient, check_hessian, check_path_independence, extract_contour, path_energy,
    run_validation, CheckConfig, IsoContour, Plane, Tolerances, ValidationReport,
};
pub use bhcurve::{load_curve, BHCurve, BHSample, ExtrapolationMode, ExtrapolationSpec};
pub use error::{Error, Result};
pub use field::{
    is_positive_definite, quadratic_form, FieldStrength, FluxDensity, SymTensor3, MU0,
};
pub use grain_oriented::{AxisSolution, GrainOrientedLaw};
pub use lamination::{LaminatedLaw, LaminationMode};
pub use law::{IsotropicLaw, LinearAnisotropicLaw, MaterialLaw, VacuumLaw};
pub use lawdoc::{load_law_from_path, load_law_from_str};
