//! CSV export of cell vertices for external rendering.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::linalg::{rat, to_f64, RatVector, Rational};
use crate::logvor::cell_interior;
use crate::model::{LinearModel, PointKind};
use crate::polytope::Polytope;

/// Sampled interior parameters: `points` evenly spaced interior points for
/// `d = 1`, otherwise a `points`-per-axis grid over the bounding box of
/// `Theta'` keeping the points whose image is interior to the simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub points: usize,
}

pub fn parameter_names(d: usize) -> Vec<String> {
    match d {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=d).map(|i| format!("x{}", i)).collect(),
    }
}

pub fn grid(m: &LinearModel, spec: GridSpec) -> Result<Vec<RatVector>> {
    let theta = m.parameter_polytope()?;
    let d = m.d();
    let k = spec.points as i64;
    let lo: Vec<Rational> = (0..d).map(|j| theta.vertices().iter().map(|v| v[j].clone()).min().unwrap()).collect();
    let hi: Vec<Rational> = (0..d).map(|j| theta.vertices().iter().map(|v| v[j].clone()).max().unwrap()).collect();
    let mut out = Vec::new();
    let mut idx = vec![0i64; d];
    if d == 0 || k == 0 {
        return Ok(if d == 0 { vec![Vec::new()] } else { out });
    }
    loop {
        let x: RatVector = (0..d)
            .map(|j| &lo[j] + (&hi[j] - &lo[j]) * rat(idx[j] + 1, k + 1))
            .collect();
        if m.point_at(&x).is_ok_and(|p| p.kind == PointKind::Interior) {
            out.push(x);
        }
        let mut j = 0;
        loop {
            if j == d {
                return Ok(out);
            }
            idx[j] += 1;
            if idx[j] < k {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn fmt_f64(v: f64) -> String {
    serde_json::to_string(&v).expect("finite")
}

pub fn csv_header(n: usize, d: usize) -> String {
    let mut h = String::from("sample");
    for name in parameter_names(d) {
        h.push(',');
        h.push_str(&name);
    }
    h.push_str(",vertex");
    for i in 1..=n {
        let _ = write!(h, ",u{}", i);
    }
    h.push('\n');
    h
}

pub fn csv_rows(out: &mut String, sample: usize, x: &[Rational], cell: &Polytope) {
    for (k, v) in cell.vertices().iter().enumerate() {
        let _ = write!(out, "{}", sample);
        for xi in x {
            let _ = write!(out, ",{}", fmt_f64(to_f64(xi)));
        }
        let _ = write!(out, ",{}", k);
        for vi in v {
            let _ = write!(out, ",{}", fmt_f64(to_f64(vi)));
        }
        out.push('\n');
    }
}

/// One row per cell vertex per sampled parameter. Only `n = 3` and `n = 4`
/// are supported since the output is meant for plotting in the triangle or
/// the tetrahedron.
pub fn export_plot(m: &LinearModel, spec: GridSpec) -> Result<String> {
    if m.n() != 3 && m.n() != 4 {
        return Err(Error::Unsupported(format!("plot export needs n = 3 or 4, model has n = {}", m.n())));
    }
    let mut out = csv_header(m.n(), m.d());
    for (s, x) in grid(m, spec)?.iter().enumerate() {
        let cell = cell_interior(m, x)?;
        csv_rows(&mut out, s, x, &cell);
    }
    Ok(out)
}
