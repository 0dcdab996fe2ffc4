//! Logarithmic Voronoi cells of linear models.
//!
//! At an interior point `p = c - Bx` the cell is
//! `{u in simplex : u diag(p)^-1 B = 0}`. Its vertices are `z diag(p)` for the
//! positive co-circuits `z` of `B` normalized by `z . c = 1`, so each vertex is
//! an affine function of `x`. Boundary cells are obtained by evaluating those
//! functions at the boundary parameter.

mod boundary;
mod realize;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, dot, format_rational, primitive_integer, RatMatrix, RatVector, Rational};
use crate::model::{LinearModel, ModelPoint, PointKind};
use crate::polytope::{Halfspace, Polytope};
use crate::util::for_each_combination;

pub use boundary::{
    cell_endpoints_d1, degeneration_witness, predicted_zeros, DegenerationWitness, EndpointCells,
};
pub use realize::{realize, RealizationData};

/// A nonnegative vector in the left kernel of `B` with minimal support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cocircuit {
    pub support: Vec<usize>,
    #[serde(serialize_with = "ser_rats")]
    pub coeffs: RatVector,
    /// `coeffs . c = 1` when set; otherwise `coeffs` is a primitive integer
    /// vector.
    pub normalized: bool,
}

fn ser_rats<S: serde::Serializer>(v: &RatVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

impl Cocircuit {
    /// Rescales so that `coeffs . c = 1`.
    pub fn normalized(&self, c: &[Rational]) -> Cocircuit {
        let s = dot(&self.coeffs, c);
        assert!(s.is_positive(), "positive co-circuit has z . c = {}", s);
        Cocircuit {
            support: self.support.clone(),
            coeffs: self.coeffs.iter().map(|v| v / &s).collect(),
            normalized: true,
        }
    }
}

/// All positive co-circuits of `b`, as primitive integer vectors sorted by
/// support.
pub fn positive_cocircuits(b: &RatMatrix) -> Vec<Cocircuit> {
    let n = b.nrows();
    let d = b.ncols();
    let all_cols: Vec<usize> = (0..d).collect();
    let mut out = Vec::new();
    for k in 1..=(d + 1).min(n) {
        for_each_combination(n, k, |s| {
            let sub = b.submatrix(s, &all_cols);
            if linalg::rank(&sub) + 1 != k {
                return true;
            }
            let kernel = linalg::left_kernel_basis(&sub);
            debug_assert_eq!(kernel.len(), 1);
            let g = &kernel[0];
            let positive = g.iter().all(Signed::is_positive);
            let negative = g.iter().all(Signed::is_negative);
            if positive || negative {
                let mut coeffs = vec![Rational::zero(); n];
                for (&i, v) in s.iter().zip(g) {
                    coeffs[i] = if positive { v.clone() } else { -v };
                }
                out.push(Cocircuit {
                    support: s.to_vec(),
                    coeffs: primitive_integer(&coeffs),
                    normalized: false,
                });
            }
            true
        });
    }
    out.sort_by(|a, b| a.support.cmp(&b.support));
    out
}

/// `V_z(x) = offset - linear x`, with `offset_i = z_i c_i` and
/// `linear_ij = z_i b_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexFunction {
    pub z: Cocircuit,
    pub linear: RatMatrix,
    pub offset: RatVector,
}

impl VertexFunction {
    pub fn eval(&self, x: &[Rational]) -> RatVector {
        linalg::vsub(&self.offset, &self.linear.mul_vec(x))
    }

    /// Human-readable affine expression per coordinate, e.g. `16x-4y+2/3`.
    pub fn describe(&self, names: &[String]) -> Vec<String> {
        (0..self.offset.len())
            .map(|i| {
                let mut s = String::new();
                for (j, name) in names.iter().enumerate() {
                    let coef = -self.linear[(i, j)].clone();
                    if coef.is_zero() {
                        continue;
                    }
                    push_term(&mut s, &coef, name);
                }
                let off = &self.offset[i];
                if !off.is_zero() || s.is_empty() {
                    push_term(&mut s, off, "");
                }
                s
            })
            .collect()
    }
}

fn push_term(s: &mut String, coef: &Rational, name: &str) {
    let neg = coef.is_negative();
    if neg {
        s.push('-');
    } else if !s.is_empty() {
        s.push('+');
    }
    let a = coef.abs();
    if !(a.is_one() && !name.is_empty()) {
        s.push_str(&format_rational(&a));
    }
    s.push_str(name);
}

pub fn vertex_functions(m: &LinearModel) -> Vec<VertexFunction> {
    let n = m.n();
    let d = m.d();
    positive_cocircuits(m.b())
        .into_iter()
        .map(|z| {
            let z = z.normalized(m.c());
            let mut linear = RatMatrix::zeros(n, d);
            for i in 0..n {
                for j in 0..d {
                    linear[(i, j)] = &z.coeffs[i] * &m.b()[(i, j)];
                }
            }
            let offset = (0..n).map(|i| &z.coeffs[i] * &m.c()[i]).collect();
            VertexFunction { z, linear, offset }
        })
        .collect()
}

/// `u_i >= 0` for every coordinate, used as facet candidates for cells.
fn orthant_hints(n: usize) -> Vec<Halfspace> {
    (0..n)
        .map(|i| {
            let mut normal = vec![Rational::zero(); n];
            normal[i] = -Rational::one();
            Halfspace::new(normal, Rational::zero())
        })
        .collect()
}

fn cell_from_points(n: usize, mut points: Vec<RatVector>) -> Result<Polytope> {
    points.sort();
    points.dedup();
    Polytope::from_vertices_with_hints(&points, &orthant_hints(n))
}

/// Cell at an interior parameter `x`.
pub fn cell_interior(m: &LinearModel, x: &[Rational]) -> Result<Polytope> {
    let pt = m.point_at(x)?;
    if pt.kind != PointKind::Interior {
        return Err(Error::NotInterior(format!(
            "c - Bx has zero coordinates {:?}; use the boundary cell instead",
            pt.zeros()
        )));
    }
    let pts: Vec<RatVector> = vertex_functions(m).iter().map(|f| f.eval(x)).collect();
    cell_from_points(m.n(), pts)
}

/// Cell at a parameter whose image lies on the boundary of the simplex,
/// computed by evaluating the vertex functions there. Works at interior
/// parameters as well.
pub fn cell_boundary(m: &LinearModel, x: &[Rational]) -> Result<Polytope> {
    m.point_at(x)?;
    let pts: Vec<RatVector> = vertex_functions(m).iter().map(|f| f.eval(x)).collect();
    cell_from_points(m.n(), pts)
}

/// Dispatches to [`cell_interior`] or [`cell_boundary`].
pub fn cell_at(m: &LinearModel, x: &[Rational]) -> Result<(ModelPoint, Polytope)> {
    let pt = m.point_at(x)?;
    let cell = match pt.kind {
        PointKind::Interior => cell_interior(m, x)?,
        _ => cell_boundary(m, x)?,
    };
    Ok((pt, cell))
}

/// Exact membership test `u in simplex` and `u diag(p)^-1 B = 0`, for
/// interior `p`.
pub fn in_cell(m: &LinearModel, p: &[Rational], u: &[Rational]) -> bool {
    if u.iter().any(Signed::is_negative) || !linalg::vsum(u).is_one() {
        return false;
    }
    let w: RatVector = u.iter().zip(p).map(|(a, b)| a / b).collect();
    m.b().vec_mul(&w).iter().all(Zero::is_zero)
}
