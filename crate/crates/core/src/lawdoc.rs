//! JSON law documents: a tagged tree describing a law composition, with
//! curve CSV paths resolved relative to the document.
//!
//! Parsing is strict — unknown keys are rejected. Law documents are
//! physics inputs; tolerating a typo silently produces wrong physics.

use std::path::Path;

use serde_json::{Map, Value};

use crate::bhcurve::{BHCurve, ExtrapolationMode, ExtrapolationSpec, DEFAULT_TAU};
use crate::error::{Error, Result};
use crate::field::SymTensor3;
use crate::grain_oriented::GrainOrientedLaw;
use crate::lamination::{LaminatedLaw, LaminationMode};
use crate::law::{IsotropicLaw, LinearAnisotropicLaw, MaterialLaw, VacuumLaw};

/// Maximum relative asymmetry accepted in a `nu` matrix before the
/// document is rejected (asymmetry signals a modelling error, so the
/// input is never silently symmetrized).
pub const NU_ASYMMETRY_TOL: f64 = 1e-12;

/// Loads a law document from disk; referenced CSV paths resolve relative
/// to the document's directory.
pub fn load_law_from_path<P: AsRef<Path>>(path: P) -> Result<Box<dyn MaterialLaw>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    load_law_from_str(&text, base)
}

/// Parses a law document from a JSON string; `base_dir` anchors relative
/// CSV paths.
pub fn load_law_from_str(text: &str, base_dir: &Path) -> Result<Box<dyn MaterialLaw>> {
    let value: Value = serde_json::from_str(text)?;
    build_law(&value, base_dir, "law")
}

fn doc_err(ctx: &str, msg: impl AsRef<str>) -> Error {
    Error::LawDoc {
        detail: format!("{ctx}: {}", msg.as_ref()),
    }
}

fn as_object<'a>(v: &'a Value, ctx: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| doc_err(ctx, "expected an object"))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], ctx: &str) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(doc_err(
                ctx,
                format!("unknown key '{key}' (allowed: {})", allowed.join(", ")),
            ));
        }
    }
    Ok(())
}

fn get_f64(obj: &Map<String, Value>, key: &str, ctx: &str) -> Result<f64> {
    obj.get(key)
        .ok_or_else(|| doc_err(ctx, format!("missing key '{key}'")))?
        .as_f64()
        .ok_or_else(|| doc_err(ctx, format!("'{key}' must be a number")))
}

fn get_str<'a>(obj: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a str> {
    obj.get(key)
        .ok_or_else(|| doc_err(ctx, format!("missing key '{key}'")))?
        .as_str()
        .ok_or_else(|| doc_err(ctx, format!("'{key}' must be a string")))
}

fn build_law(v: &Value, base: &Path, ctx: &str) -> Result<Box<dyn MaterialLaw>> {
    let obj = as_object(v, ctx)?;
    let ty = get_str(obj, "type", ctx)?;
    match ty {
        "vacuum" => {
            check_keys(obj, &["type"], ctx)?;
            Ok(Box::new(VacuumLaw))
        }
        "linear" => {
            check_keys(obj, &["type", "nu"], ctx)?;
            let nu = parse_nu(
                obj.get("nu")
                    .ok_or_else(|| doc_err(ctx, "missing key 'nu'"))?,
                ctx,
            )?;
            Ok(Box::new(LinearAnisotropicLaw::new(nu)?))
        }
        "isotropic" => {
            check_keys(obj, &["type", "curve", "extrapolation"], ctx)?;
            let mut curve = load_curve_file(get_str(obj, "curve", ctx)?, base)?;
            if let Some(ev) = obj.get("extrapolation") {
                curve = curve.extrapolate(parse_extrapolation(ev, &format!("{ctx}.extrapolation"))?)?;
            }
            Ok(Box::new(IsotropicLaw::new(curve)))
        }
        "grain_oriented" => {
            check_keys(
                obj,
                &["type", "rolling", "transverse", "normal", "extrapolation"],
                ctx,
            )?;
            let mut rolling = load_curve_file(get_str(obj, "rolling", ctx)?, base)?;
            let mut transverse = load_curve_file(get_str(obj, "transverse", ctx)?, base)?;
            let mut normal = match obj.get("normal") {
                Some(v) => Some(load_curve_file(
                    v.as_str()
                        .ok_or_else(|| doc_err(ctx, "'normal' must be a string"))?,
                    base,
                )?),
                None => None,
            };
            if let Some(ev) = obj.get("extrapolation") {
                let ectx = format!("{ctx}.extrapolation");
                let eobj = as_object(ev, &ectx)?;
                check_keys(eobj, &["rolling", "transverse", "normal"], &ectx)?;
                if let Some(spec) = eobj.get("rolling") {
                    rolling = rolling
                        .extrapolate(parse_extrapolation(spec, &format!("{ectx}.rolling"))?)?;
                }
                if let Some(spec) = eobj.get("transverse") {
                    transverse = transverse
                        .extrapolate(parse_extrapolation(spec, &format!("{ectx}.transverse"))?)?;
                }
                if let Some(spec) = eobj.get("normal") {
                    let n = normal.ok_or_else(|| {
                        doc_err(&ectx, "'normal' extrapolation given but no normal curve")
                    })?;
                    normal =
                        Some(n.extrapolate(parse_extrapolation(spec, &format!("{ectx}.normal"))?)?);
                }
            }
            Ok(match normal {
                Some(n) => Box::new(GrainOrientedLaw::new_3d(rolling, transverse, n)),
                None => Box::new(GrainOrientedLaw::new(rolling, transverse)),
            })
        }
        "laminated" => {
            check_keys(obj, &["type", "f1", "mode", "inner"], ctx)?;
            let f1 = get_f64(obj, "f1", ctx)?;
            let mode = match get_str(obj, "mode", ctx)? {
                "exact" => LaminationMode::Exact,
                "linearized" => LaminationMode::Linearized,
                other => {
                    return Err(doc_err(
                        ctx,
                        format!("unknown mode '{other}' (expected exact or linearized)"),
                    ))
                }
            };
            let inner = build_law(
                obj.get("inner")
                    .ok_or_else(|| doc_err(ctx, "missing key 'inner'"))?,
                base,
                &format!("{ctx}.inner"),
            )?;
            Ok(Box::new(LaminatedLaw::new(inner, f1, mode)?))
        }
        other => Err(doc_err(
            ctx,
            format!(
                "unknown law type '{other}' (expected vacuum, linear, isotropic, grain_oriented, or laminated)"
            ),
        )),
    }
}

fn load_curve_file(rel: &str, base: &Path) -> Result<BHCurve> {
    BHCurve::from_csv_path(base.join(rel))
}

fn parse_nu(v: &Value, ctx: &str) -> Result<SymTensor3> {
    let rows = v
        .as_array()
        .ok_or_else(|| doc_err(ctx, "'nu' must be a 3x3 array of numbers"))?;
    if rows.len() != 3 {
        return Err(doc_err(ctx, "'nu' must have exactly 3 rows"));
    }
    let mut m = [[0.0f64; 3]; 3];
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| doc_err(ctx, "'nu' rows must be arrays"))?;
        if cells.len() != 3 {
            return Err(doc_err(ctx, "'nu' rows must have exactly 3 entries"));
        }
        for (j, cell) in cells.iter().enumerate() {
            m[i][j] = cell
                .as_f64()
                .ok_or_else(|| doc_err(ctx, "'nu' entries must be numbers"))?;
        }
    }
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let mut max_rel: f64 = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            max_rel = max_rel.max((m[i][j] - m[j][i]).abs() / scale);
        }
    }
    if max_rel > NU_ASYMMETRY_TOL {
        return Err(Error::AsymmetricTensor { max_rel });
    }
    Ok(SymTensor3::new(
        m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2],
    ))
}

fn parse_extrapolation(v: &Value, ctx: &str) -> Result<ExtrapolationSpec> {
    let obj = as_object(v, ctx)?;
    check_keys(obj, &["bsat", "mode", "tau"], ctx)?;
    let b_sat = get_f64(obj, "bsat", ctx)?;
    let mode = match get_str(obj, "mode", ctx)? {
        "rolling" => ExtrapolationMode::RollingLinear,
        "transverse" => ExtrapolationMode::TransverseApproach,
        other => {
            return Err(doc_err(
                ctx,
                format!("unknown extrapolation mode '{other}' (expected rolling or transverse)"),
            ))
        }
    };
    let tau = match obj.get("tau") {
        Some(t) => t
            .as_f64()
            .ok_or_else(|| doc_err(ctx, "'tau' must be a number"))?,
        None => DEFAULT_TAU,
    };
    Ok(ExtrapolationSpec { b_sat, mode, tau })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FluxDensity, MU0};
    use crate::fixtures;
    use approx::assert_relative_eq;
    use std::fs;

    fn write_fixture_csvs(dir: &Path) {
        fs::write(dir.join("mild.csv"), fixtures::mild_steel().to_csv()).unwrap();
        fs::write(dir.join("roll.csv"), fixtures::go_rolling().to_csv()).unwrap();
        fs::write(dir.join("trans.csv"), fixtures::go_transverse().to_csv()).unwrap();
    }

    #[test]
    fn vacuum_document() {
        let law = load_law_from_str(r#"{"type":"vacuum"}"#, Path::new(".")).unwrap();
        assert_relative_eq!(
            law.energy(FluxDensity::new(1.0, 0.0, 0.0)).unwrap(),
            1.0 / (2.0 * MU0),
            max_relative = 1e-15
        );
    }

    #[test]
    fn unknown_key_rejected() {
        let err = load_law_from_str(r#"{"type":"vacuum","extra":1}"#, Path::new(".")).err().unwrap();
        assert!(matches!(err, Error::LawDoc { .. }), "{err}");
        let err = load_law_from_str(
            r#"{"type":"laminated","f1":0.03,"mode":"exact","inner":{"type":"vacuum","x":0}}"#,
            Path::new("."),
        )
        .err().unwrap();
        assert!(err.to_string().contains("law.inner"), "{err}");
    }

    #[test]
    fn unknown_type_rejected() {
        let err = load_law_from_str(r#"{"type":"unobtainium"}"#, Path::new(".")).err().unwrap();
        assert!(matches!(err, Error::LawDoc { .. }));
    }

    #[test]
    fn linear_document_symmetric_nu() {
        let text = r#"{"type":"linear","nu":[[2000,100,0],[100,1500,0],[0,0,2500]]}"#;
        let law = load_law_from_str(text, Path::new(".")).unwrap();
        let nu = law.reluctivity(FluxDensity::ZERO).unwrap();
        assert_eq!(nu.xx, 2000.0);
        assert_eq!(nu.xy, 100.0);
    }

    #[test]
    fn asymmetric_nu_rejected_not_symmetrized() {
        let text = r#"{"type":"linear","nu":[[2000,100,0],[101,1500,0],[0,0,2500]]}"#;
        assert!(matches!(
            load_law_from_str(text, Path::new(".")),
            Err(Error::AsymmetricTensor { .. })
        ));
    }

    #[test]
    fn isotropic_document_resolves_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        write_fixture_csvs(dir.path());
        let text = r#"{"type":"isotropic","curve":"mild.csv"}"#;
        let law = load_law_from_str(text, dir.path()).unwrap();
        let direct = crate::law::IsotropicLaw::new(fixtures::mild_steel());
        let b = FluxDensity::new(0.8, 0.3, 0.1);
        assert_relative_eq!(
            law.energy(b).unwrap(),
            direct.energy(b).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn nested_laminated_grain_oriented_document() {
        let dir = tempfile::tempdir().unwrap();
        write_fixture_csvs(dir.path());
        let text = r#"{
            "type": "laminated",
            "f1": 0.03,
            "mode": "exact",
            "inner": {
                "type": "grain_oriented",
                "rolling": "roll.csv",
                "transverse": "trans.csv",
                "normal": "roll.csv",
                "extrapolation": {
                    "rolling": {"bsat": 2.2, "mode": "rolling"},
                    "transverse": {"bsat": 1.9, "mode": "transverse", "tau": 5000},
                    "normal": {"bsat": 2.2, "mode": "rolling"}
                }
            }
        }"#;
        let law = load_law_from_str(text, dir.path()).unwrap();
        let w = law.energy(FluxDensity::new(0.8, 0.4, 0.3)).unwrap();
        assert!(w > 0.0);
        assert!(law.describe().starts_with("laminated"));
    }

    #[test]
    fn missing_curve_file_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let text = r#"{"type":"isotropic","curve":"nope.csv"}"#;
        assert!(matches!(
            load_law_from_str(text, dir.path()),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn invalid_json_reported() {
        assert!(matches!(
            load_law_from_str("{not json", Path::new(".")),
            Err(Error::Json(_))
        ));
    }
}
