//! JSON file formats for models and polytopes.
//!
//! Every exact number is written as a rational string `"p/q"` (or `"p"`).
//! Readers also accept JSON integers and decimal strings.

use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, RatMatrix, RatVector, Rational};
use crate::model::{LinearModel, PartialLinearModel};
use crate::polytope::{Equation, Halfspace, Polytope};

/// Rational that (de)serializes as a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rat(pub Rational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational such as \"-5/324\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
                parse_rational(v)
                    .map(Rat)
                    .ok_or_else(|| E::custom(format!("invalid rational {:?}", v)))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
                Ok(Rat(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
                Ok(Rat(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

fn unwrap_vec(v: Vec<Rat>) -> RatVector {
    v.into_iter().map(|r| r.0).collect()
}

pub fn rat_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAffine {
    normal: Vec<Rat>,
    offset: Rat,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolytope {
    ambient_dim: Option<usize>,
    #[serde(default)]
    vertices: Vec<Vec<Rat>>,
    #[serde(default)]
    halfspaces: Vec<RawAffine>,
    #[serde(default)]
    equations: Vec<RawAffine>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(default)]
    name: Option<String>,
    n: usize,
    d: usize,
    c: Vec<Rat>,
    #[serde(rename = "B")]
    b: Vec<Vec<Rat>>,
    #[serde(default)]
    theta: Option<RawPolytope>,
}

/// Contents of a model file: a linear model, optionally restricted to a
/// polytope `theta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub model: LinearModel,
    pub theta: Option<Polytope>,
}

impl ModelFile {
    pub fn partial(&self) -> Result<PartialLinearModel> {
        match &self.theta {
            Some(t) => PartialLinearModel::new(self.model.clone(), t.clone()),
            None => Err(Error::InvalidModel("model file has no theta block".into())),
        }
    }
}

fn json_error(context: &str, e: serde_json::Error) -> Error {
    Error::parse(context, e.to_string())
}

fn build_polytope(raw: RawPolytope, context: &str, ambient: Option<usize>) -> Result<Polytope> {
    let k = match (raw.ambient_dim, ambient) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::parse(context, format!("ambient_dim {} but model dimension {}", a, b)))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => {
            return Err(Error::parse(context, "missing field `ambient_dim`"));
        }
    };
    let check = |what: &str, i: usize, len: usize| -> Result<()> {
        if len != k {
            Err(Error::parse(context, format!("{}[{}] has {} entries, expected {}", what, i, len, k)))
        } else {
            Ok(())
        }
    };
    for (i, v) in raw.vertices.iter().enumerate() {
        check("vertices", i, v.len())?;
    }
    for (i, h) in raw.halfspaces.iter().enumerate() {
        check("halfspaces", i, h.normal.len())?;
    }
    for (i, h) in raw.equations.iter().enumerate() {
        check("equations", i, h.normal.len())?;
    }
    if !raw.vertices.is_empty() {
        let pts: Vec<RatVector> = raw.vertices.into_iter().map(unwrap_vec).collect();
        return Polytope::from_vertices(&pts);
    }
    let hs: Vec<Halfspace> = raw
        .halfspaces
        .into_iter()
        .map(|h| Halfspace::new(unwrap_vec(h.normal), h.offset.0))
        .collect();
    let eqs: Vec<Equation> = raw
        .equations
        .into_iter()
        .map(|h| Equation::new(unwrap_vec(h.normal), h.offset.0))
        .collect();
    Polytope::from_halfspaces(&hs, &eqs, k)
}

pub fn parse_polytope(text: &str) -> Result<Polytope> {
    let raw: RawPolytope = serde_json::from_str(text).map_err(|e| json_error("polytope", e))?;
    build_polytope(raw, "polytope", None)
}

pub fn polytope_to_json(p: &Polytope) -> Value {
    let affine = |normal: &[Rational], offset: &Rational| {
        json!({"normal": rat_strings(normal), "offset": format_rational(offset)})
    };
    json!({
        "ambient_dim": p.ambient_dim(),
        "vertices": p.vertices().iter().map(|v| rat_strings(v)).collect::<Vec<_>>(),
        "halfspaces": p.halfspaces().iter().map(|h| affine(&h.normal, &h.offset)).collect::<Vec<_>>(),
        "equations": p.equations().iter().map(|h| affine(&h.normal, &h.offset)).collect::<Vec<_>>(),
    })
}

pub fn write_polytope(p: &Polytope) -> String {
    to_pretty(&polytope_to_json(p))
}

/// Parses a model file. Only the shape is checked here; call
/// [`LinearModel::validate`] for the model invariants.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let raw: RawModel = serde_json::from_str(text).map_err(|e| json_error("model", e))?;
    if raw.c.len() != raw.n {
        return Err(Error::parse("model.c", format!("{} entries but n = {}", raw.c.len(), raw.n)));
    }
    if raw.b.len() != raw.n {
        return Err(Error::parse("model.B", format!("{} rows but n = {}", raw.b.len(), raw.n)));
    }
    if let Some(i) = raw.b.iter().position(|r| r.len() != raw.d) {
        return Err(Error::parse(
            format!("model.B[{}]", i),
            format!("{} entries but d = {}", raw.b[i].len(), raw.d),
        ));
    }
    let rows: Vec<RatVector> = raw.b.into_iter().map(unwrap_vec).collect();
    let b = RatMatrix::from_rows(&rows, raw.d)?;
    let model = LinearModel::new(raw.name.unwrap_or_else(|| "model".into()), b, unwrap_vec(raw.c))?;
    let theta = match raw.theta {
        Some(t) => Some(build_polytope(t, "model.theta", Some(raw.d))?),
        None => None,
    };
    Ok(ModelFile { model, theta })
}

pub fn read_model(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path)?;
    parse_model(&text).map_err(|e| match e {
        Error::Parse { context, message } => Error::Parse {
            context: format!("{}: {}", path.display(), context),
            message,
        },
        other => other,
    })
}

pub fn read_polytope(path: &Path) -> Result<Polytope> {
    parse_polytope(&std::fs::read_to_string(path)?)
}

pub fn model_to_json(model: &LinearModel, theta: Option<&Polytope>) -> Value {
    let mut v = json!({
        "name": model.name,
        "n": model.n(),
        "d": model.d(),
        "c": rat_strings(model.c()),
        "B": model.b().rows().map(rat_strings).collect::<Vec<_>>(),
    });
    if let Some(t) = theta {
        v["theta"] = polytope_to_json(t);
    }
    v
}

pub fn write_model(file: &ModelFile) -> String {
    to_pretty(&model_to_json(&file.model, file.theta.as_ref()))
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
