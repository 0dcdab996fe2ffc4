//! Bundled example models.

use crate::error::{Error, Result};
use crate::io::{parse_model, ModelFile};
use crate::model::{LinearModel, PartialLinearModel};

/// `(name, file contents)` for every bundled model.
pub const BUNDLED: &[(&str, &str)] = &[
    ("triangle", include_str!("../data/models/triangle.json")),
    ("quadrilateral", include_str!("../data/models/quadrilateral.json")),
    ("cube1", include_str!("../data/models/cube1.json")),
    ("cube2", include_str!("../data/models/cube2.json")),
    ("partial_triangle", include_str!("../data/models/partial_triangle.json")),
    ("d1_triangles", include_str!("../data/models/d1_triangles.json")),
    ("d1_quads", include_str!("../data/models/d1_quads.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

/// Raw bytes of a bundled model file.
pub fn source(name: &str) -> Result<&'static str> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| {
            Error::OutOfDomain(format!(
                "no bundled model named {:?}; available: {}",
                name,
                names().collect::<Vec<_>>().join(", ")
            ))
        })
}

pub fn model_file(name: &str) -> Result<ModelFile> {
    parse_model(source(name)?)
}

fn full(name: &str) -> LinearModel {
    let m = model_file(name).expect("bundled model parses").model;
    m.ensure_valid().expect("bundled model is valid");
    m
}

/// `B = (1, -5, 2, 2)^T` with uniform `c`; the cell at the centre is a
/// triangle.
pub fn triangle() -> LinearModel {
    full("triangle")
}

/// `B = (1, 5, -3, -3)^T` with uniform `c`; cells are quadrilaterals.
pub fn quadrilateral() -> LinearModel {
    full("quadrilateral")
}

/// Transversal two-dimensional model on six states.
pub fn cube_model_1() -> LinearModel {
    full("cube1")
}

/// Two-dimensional model on six states with one degenerate vertex.
pub fn cube_model_2() -> LinearModel {
    full("cube2")
}

pub fn d1_triangles() -> LinearModel {
    full("d1_triangles")
}

pub fn d1_quads() -> LinearModel {
    full("d1_quads")
}

/// Triangle with image vertices `(1/5,1/5,1/5,2/5)`, `(1/5,1/5,2/5,1/5)` and
/// the uniform distribution, inside the plane `p_1 = p_2`.
pub fn partial_example() -> PartialLinearModel {
    model_file("partial_triangle")
        .and_then(|f| f.partial())
        .expect("bundled partial model is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_model_is_valid() {
        for name in names() {
            let f = model_file(name).unwrap();
            assert!(f.model.validate().is_empty(), "{}", name);
            if f.theta.is_some() {
                f.partial().unwrap();
            }
        }
        assert!(source("nope").is_err());
    }
}
