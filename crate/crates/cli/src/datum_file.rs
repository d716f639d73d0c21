//! JSON datum files. Every scalar is a string so that no value passes
//! through floating point.

use std::path::Path;

use ahaut_core::curves::{CurveModel, CurvePoint, ECPoint, EllipticCurve, P1Point};
use ahaut_core::datum::{validate_datum, AHDatum, RawCoefficient, RawDatum};
use ahaut_core::polyhedra::RationalVector;
use ahaut_core::scalar::parse_rational;
use ahaut_core::CoreError;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub torus_rank: usize,
    pub tail_cone: TailSpec,
    pub curve: CurveSpec,
    #[serde(default)]
    pub coefficients: Vec<CoefficientSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real: Option<RealSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSpec {
    pub rays: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    P1,
    P1Minus,
    Elliptic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    #[serde(rename = "type")]
    pub kind: CurveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub punctures: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    pub point: String,
    pub vertices: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealSpec {
    pub enabled: bool,
}

/// A validated datum and whether the file asks for a real structure.
#[derive(Debug, Clone)]
pub struct LoadedDatum {
    pub datum: AHDatum,
    pub real: bool,
    pub file: DatumFile,
}

pub fn load(path: &Path) -> Result<LoadedDatum, CliError> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(&label, "", format!("cannot read file: {e}")))?;
    parse(&text, &label)
}

pub fn parse(text: &str, label: &str) -> Result<LoadedDatum, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: DatumFile = serde_path_to_error::deserialize(de)
        .map_err(|e| CliError::input(label, &e.path().to_string(), e.inner().to_string()))?;
    let datum = to_datum(&file, label)?;
    let real = file.real.as_ref().is_some_and(|r| r.enabled);
    Ok(LoadedDatum { datum, real, file })
}

fn rational(label: &str, path: &str, s: &str) -> Result<ahaut_core::Q, CliError> {
    parse_rational(s).map_err(|e| CliError::input(label, path, e.to_string()))
}

fn curve_model(spec: &CurveSpec, label: &str) -> Result<CurveModel, CliError> {
    match spec.kind {
        CurveKind::P1 => {
            if spec.punctures.as_ref().is_some_and(|p| !p.is_empty()) {
                return Err(CliError::input(label, "curve.punctures", "type \"p1\" takes no punctures; use \"p1-minus\""));
            }
            Ok(CurveModel::P1)
        }
        CurveKind::P1Minus => {
            let raw = spec.punctures.as_deref().unwrap_or_default();
            let mut pts = Vec::with_capacity(raw.len());
            for (i, s) in raw.iter().enumerate() {
                let p: P1Point = s
                    .parse()
                    .map_err(|e: CoreError| CliError::input(label, &format!("curve.punctures[{i}]"), e.to_string()))?;
                if pts.contains(&p) {
                    return Err(CliError::input(label, &format!("curve.punctures[{i}]"), format!("duplicate puncture {p}")));
                }
                pts.push(p);
            }
            CurveModel::p1_minus(pts).map_err(|e| CliError::input(label, "curve.punctures", e.to_string()))
        }
        CurveKind::Elliptic => {
            if spec.punctures.as_ref().is_some_and(|p| !p.is_empty()) {
                return Err(CliError::Unsupported(CoreError::UnsupportedModel(
                    "elliptic curves minus points are not supported".into(),
                ).to_string()));
            }
            let a = rational(label, "curve.a", spec.a.as_deref().unwrap_or("0"))?;
            let b = rational(label, "curve.b", spec.b.as_deref().unwrap_or("0"))?;
            let e = EllipticCurve::new(a, b).map_err(|e| CliError::input(label, "curve", e.to_string()))?;
            Ok(CurveModel::Elliptic(e))
        }
    }
}

fn curve_point(model: &CurveModel, s: &str) -> Result<CurvePoint, CoreError> {
    match model {
        CurveModel::Elliptic(_) => Ok(CurvePoint::Elliptic(ECPoint::parse(s)?)),
        _ => Ok(CurvePoint::Line(s.parse()?)),
    }
}

fn to_datum(file: &DatumFile, label: &str) -> Result<AHDatum, CliError> {
    let curve = curve_model(&file.curve, label)?;
    let n = file.torus_rank;
    let mut coefficients = Vec::with_capacity(file.coefficients.len());
    for (i, c) in file.coefficients.iter().enumerate() {
        let base = format!("coefficients[{i}]");
        let point = curve_point(&curve, &c.point)
            .map_err(|e| CliError::input(label, &format!("{base}.point"), e.to_string()))?;
        let mut vertices = Vec::with_capacity(c.vertices.len());
        for (j, v) in c.vertices.iter().enumerate() {
            if v.len() != n {
                return Err(CliError::input(
                    label,
                    &format!("{base}.vertices[{j}]"),
                    format!("expected {n} coordinates, found {}", v.len()),
                ));
            }
            let coords = v
                .iter()
                .enumerate()
                .map(|(k, s)| rational(label, &format!("{base}.vertices[{j}][{k}]"), s))
                .collect::<Result<Vec<_>, _>>()?;
            vertices.push(RationalVector(coords));
        }
        coefficients.push(RawCoefficient { point, vertices, rays: c.rays.clone() });
    }
    let raw = RawDatum { torus_rank: n, tail_rays: file.tail_cone.rays.clone(), curve, coefficients };
    validate_datum(&raw).map_err(|e| locate(label, &raw, e))
}

/// Attaches the field path of the offending coefficient to a validation error.
fn locate(label: &str, raw: &RawDatum, e: CoreError) -> CliError {
    let point = match &e {
        CoreError::TailMismatch(p) | CoreError::PointNotOnCurve(p) | CoreError::DuplicatePoint(p) => Some(p),
        _ => None,
    };
    let path = match point {
        Some(p) => raw
            .coefficients
            .iter()
            .rposition(|c| c.point.to_string() == *p)
            .map(|i| format!("coefficients[{i}]"))
            .unwrap_or_default(),
        None => match e {
            CoreError::NotPointed => "tail_cone.rays".to_string(),
            _ => String::new(),
        },
    };
    CliError::from_core(label, &path, e)
}
