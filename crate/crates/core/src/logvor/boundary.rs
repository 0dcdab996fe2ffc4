//! Cells at model vertices: zero patterns of the vertex functions and the
//! closed form for one-dimensional models.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, RatVector, Rational};
use crate::model::{LinearModel, ModelPoint};
use crate::polytope::Polytope;
use crate::util::for_each_combination;

use super::{cell_from_points, positive_cocircuits, Cocircuit};

fn zero_set(vertex: &ModelPoint) -> Vec<usize> {
    vertex.zeros()
}

/// Determinant of the rows `rows` of `M = [B | c]`.
fn minor(m: &LinearModel, rows: &[usize]) -> Rational {
    let aug = m.augmented();
    let cols: Vec<usize> = (0..=m.d()).collect();
    linalg::det(&aug.submatrix(rows, &cols)).expect("square minor")
}

/// Zero coordinates of `V_z` at a model vertex with exactly `d` zero
/// coordinates, predicted from `M = [B | c]` without evaluating `V_z`.
///
/// With `I` the support of the vertex and `S` the support of `z`, the result is
/// `([n] \ S) U (S \ I) U {i in S and I : det M_{([n] \ I) U {i}} = 0}`.
pub fn predicted_zeros(m: &LinearModel, vertex: &ModelPoint, z: &Cocircuit) -> Result<Vec<usize>> {
    let zeros = zero_set(vertex);
    if zeros.len() != m.d() {
        return Err(Error::Unsupported(format!(
            "vertex has {} zero coordinates, expected {}; evaluate the vertex functions directly",
            zeros.len(),
            m.d()
        )));
    }
    Ok(predict_with_basis(m, &zeros, z))
}

fn predict_with_basis(m: &LinearModel, basis: &[usize], z: &Cocircuit) -> Vec<usize> {
    (0..m.n())
        .filter(|&i| {
            if z.support.binary_search(&i).is_err() || basis.contains(&i) {
                return true;
            }
            let mut rows = basis.to_vec();
            rows.push(i);
            minor(m, &rows).is_zero()
        })
        .collect()
}

/// Explains a collapse of the cell at a model vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerationWitness {
    /// Coordinates of `c - Bx` that vanish at the vertex.
    pub zero_set: Vec<usize>,
    /// `d` of those coordinates whose rows of `B` are independent.
    pub basis: Vec<usize>,
    /// The remaining zero coordinates; for each, the `(d+1)`-minor of
    /// `[B | c]` on `basis` plus that row vanishes.
    pub dependent: Vec<usize>,
    /// `(co-circuit index, extra zero coordinates)` for every co-circuit
    /// whose vertex function gains zeros beyond those forced by `basis`.
    pub affected: Vec<(usize, Vec<usize>)>,
}

impl DegenerationWitness {
    pub fn is_degenerate(&self) -> bool {
        !self.affected.is_empty()
    }
}

/// Zero pattern analysis at a model vertex with any number of zeros. A
/// transversal vertex yields an empty `affected` list.
pub fn degeneration_witness(m: &LinearModel, vertex: &ModelPoint) -> Result<DegenerationWitness> {
    let zeros = zero_set(vertex);
    let d = m.d();
    let cols: Vec<usize> = (0..d).collect();
    let mut basis = None;
    for_each_combination(zeros.len(), d, |idx| {
        let rows: Vec<usize> = idx.iter().map(|&k| zeros[k]).collect();
        if linalg::rank(&m.b().submatrix(&rows, &cols)) == d {
            basis = Some(rows);
            return false;
        }
        true
    });
    let basis = basis.ok_or_else(|| {
        Error::Unsupported(format!("point with zero set {:?} is not a vertex of the model", zeros))
    })?;
    let dependent: Vec<usize> = zeros.iter().copied().filter(|i| !basis.contains(i)).collect();
    let mut affected = Vec::new();
    for (k, z) in positive_cocircuits(m.b()).iter().enumerate() {
        let extra: Vec<usize> = predict_with_basis(m, &basis, z)
            .into_iter()
            .filter(|&i| z.support.binary_search(&i).is_ok() && !basis.contains(&i))
            .collect();
        if !extra.is_empty() {
            affected.push((k, extra));
        }
    }
    Ok(DegenerationWitness { zero_set: zeros, basis, dependent, affected })
}

/// Cells at both ends of the parameter interval of a one-dimensional model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointCells {
    pub left_x: Rational,
    pub left: Polytope,
    pub right_x: Rational,
    pub right: Polytope,
}

fn unit(n: usize, i: usize) -> RatVector {
    let mut e = vec![Rational::zero(); n];
    e[i] = Rational::one();
    e
}

/// Endpoint cells of a model with `d = 1` from the closed form.
///
/// At the right end `x_r = min c_i / b_i` over `b_i > 0`, let `R` be the
/// indices attaining the minimum. The vertices are `e_j` for `b_j < 0`, the
/// points `(b_j p_i e_i - b_i p_j e_j) / (b_j c_i - b_i c_j)` for `b_i > 0`
/// outside `R` and `b_j < 0`, and `e_k` for `b_k = 0`. The left end mirrors
/// this with the roles of the signs swapped.
pub fn cell_endpoints_d1(m: &LinearModel) -> Result<EndpointCells> {
    if m.d() != 1 {
        return Err(Error::Unsupported(format!("closed form needs d = 1, model has d = {}", m.d())));
    }
    let n = m.n();
    let b: RatVector = m.b().column(0);
    let c = m.c();
    let pos: Vec<usize> = (0..n).filter(|&i| b[i].is_positive()).collect();
    let neg: Vec<usize> = (0..n).filter(|&i| b[i].is_negative()).collect();
    let flat: Vec<usize> = (0..n).filter(|&i| b[i].is_zero()).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::InvalidModel("B needs entries of both signs".into()));
    }
    let ratio = |i: usize| &c[i] / &b[i];
    let right_x = pos.iter().map(|&i| ratio(i)).min().expect("nonempty");
    let left_x = neg.iter().map(|&j| ratio(j)).max().expect("nonempty");

    let pair = |i: usize, j: usize, p: &[Rational]| -> RatVector {
        let den = &b[j] * &c[i] - &b[i] * &c[j];
        let mut v = vec![Rational::zero(); n];
        v[i] = &b[j] * &p[i] / &den;
        v[j] = -(&b[i] * &p[j]) / &den;
        v
    };

    let p_r = m.point(std::slice::from_ref(&right_x));
    let mut right: Vec<RatVector> = neg.iter().map(|&j| unit(n, j)).collect();
    for &i in pos.iter().filter(|&&i| ratio(i) != right_x) {
        for &j in &neg {
            right.push(pair(i, j, &p_r));
        }
    }
    right.extend(flat.iter().map(|&k| unit(n, k)));

    let p_l = m.point(std::slice::from_ref(&left_x));
    let mut left: Vec<RatVector> = pos.iter().map(|&i| unit(n, i)).collect();
    for &j in neg.iter().filter(|&&j| ratio(j) != left_x) {
        for &i in &pos {
            left.push(pair(i, j, &p_l));
        }
    }
    left.extend(flat.iter().map(|&k| unit(n, k)));

    Ok(EndpointCells {
        left: cell_from_points(n, left)?,
        left_x,
        right: cell_from_points(n, right)?,
        right_x,
    })
}
