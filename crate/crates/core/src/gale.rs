//! Gale duality between `B` and a point configuration, and the check that
//! interior cells have the combinatorial type of the dual slice.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, vscale, vsub, vsum, RatMatrix, RatVector, Rational};
use crate::logvor::cell_interior;
use crate::model::LinearModel;
use crate::polytope::{combinatorial_isomorphism, Equation, Halfspace, IsoVerdict, Polytope};

/// `A = [1; V]` whose rows span the left kernel of `B`.
///
/// The configuration `V` (columns are points in `R^{n-d-1}`) is only defined up
/// to affine transformation. This one is normalized so that every row of `V`
/// sums to zero and is in reduced echelon form, which puts the centroid of the
/// configuration at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GalePair {
    pub a: RatMatrix,
    pub v: RatMatrix,
    pub b: RatMatrix,
}

pub fn gale_pair(b: &RatMatrix) -> Result<GalePair> {
    let n = b.nrows();
    let d = b.ncols();
    let r = linalg::rank(b);
    if r != d {
        return Err(Error::RankDeficient { rank: r, expected: d });
    }
    if b.column_sums().iter().any(|s| !s.is_zero()) {
        return Err(Error::InvalidModel("columns of B must sum to zero".into()));
    }
    let nn = Rational::from_integer((n as i64).into());
    let centered: Vec<RatVector> = linalg::left_kernel_basis(b)
        .iter()
        .map(|k| vsub(k, &vec![vsum(k) / &nn; n]))
        .collect();
    let v_rows = if centered.is_empty() {
        Vec::new()
    } else {
        linalg::row_space_basis(&RatMatrix::from_rows(&centered, n)?)
    };
    let v = RatMatrix::from_rows(&v_rows, n)?;
    let mut a_rows = vec![vec![Rational::one(); n]];
    a_rows.extend(v_rows);
    let a = RatMatrix::from_rows(&a_rows, n)?;
    debug_assert!(check_gale_pair(&a, b));
    Ok(GalePair { a, v, b: b.clone() })
}

/// `A B = 0`, `rank A = n - d` and the first row of `A` is all ones.
pub fn check_gale_pair(a: &RatMatrix, b: &RatMatrix) -> bool {
    let n = b.nrows();
    let d = b.ncols();
    if a.ncols() != n || a.nrows() == 0 {
        return false;
    }
    a.row(0).iter().all(One::is_one)
        && a.mul(b).is_ok_and(|p| p.is_zero())
        && linalg::rank(a) + d == n
}

/// `{x in R^{n-d} : x_1 = 1, x A >= 0}`.
pub fn dual_slice(a: &RatMatrix) -> Result<Polytope> {
    let k = a.nrows();
    let hs: Vec<Halfspace> = (0..a.ncols())
        .map(|j| Halfspace::new(vscale(&a.column(j), &-Rational::one()), Rational::zero()))
        .collect();
    let mut first = vec![Rational::zero(); k];
    first[0] = Rational::one();
    Polytope::from_halfspaces(&hs, &[Equation::new(first, Rational::one())], k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeCheck {
    pub cell_f_vector: Vec<usize>,
    pub slice_f_vector: Vec<usize>,
    #[serde(skip)]
    pub verdict: IsoVerdict,
}

impl TypeCheck {
    pub fn holds(&self) -> bool {
        self.verdict.is_isomorphic()
    }
}

/// Compares the cell at interior `x` with the dual slice of the Gale
/// transform of `B`.
pub fn verify_type_theorem(m: &LinearModel, x: &[Rational], node_cap: u64) -> Result<TypeCheck> {
    let cell = cell_interior(m, x)?;
    let slice = dual_slice(&gale_pair(m.b())?.a)?;
    Ok(TypeCheck {
        cell_f_vector: cell.f_vector(),
        slice_f_vector: slice.f_vector(),
        verdict: combinatorial_isomorphism(&cell, &slice, node_cap),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::{int, rat, rvec};
    use crate::polytope::DEFAULT_NODE_CAP;

    #[test]
    fn triangle_gale_pair_matches_configuration() {
        let b = catalog::triangle().b().clone();
        let g = gale_pair(&b).unwrap();
        assert_eq!((g.a.nrows(), g.a.ncols()), (3, 4));
        assert!(g.a.mul(&b).unwrap().is_zero());
        let config = RatMatrix::from_i64(&[&[1, 1, 1, 1], &[-1, 1, 3, 0], &[-1, 1, 0, 3]]);
        assert!(check_gale_pair(&config, &b));
        // Same row space, so the configurations are affinely equivalent.
        let mut stacked = g.a.to_rows();
        stacked.extend(config.to_rows());
        assert_eq!(linalg::rank_of_rows(&stacked), 3);
    }

    #[test]
    fn two_state_pair() {
        let g = gale_pair(&RatMatrix::from_i64(&[&[1], &[-1]])).unwrap();
        assert_eq!(g.a, RatMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(g.v.nrows(), 0);
    }

    #[test]
    fn shuffled_columns_fail_the_check() {
        let b = catalog::triangle().b().clone();
        let config = RatMatrix::from_i64(&[&[1, 1, 1, 1], &[1, -1, 3, 0], &[1, -1, 0, 3]]);
        assert!(!check_gale_pair(&config, &b));
    }

    #[test]
    fn slices_have_the_expected_types() {
        let tri = dual_slice(&gale_pair(catalog::triangle().b()).unwrap().a).unwrap();
        assert_eq!(tri.vertices().len(), 3);
        let quad = dual_slice(&gale_pair(catalog::quadrilateral().b()).unwrap().a).unwrap();
        assert_eq!(quad.vertices().len(), 4);
        assert_eq!(quad.dim(), 2);
        let cube = dual_slice(&gale_pair(catalog::cube_model_1().b()).unwrap().a).unwrap();
        assert_eq!(cube.f_vector(), vec![8, 12, 6]);
    }

    #[test]
    fn uncentered_basis_can_be_unbounded() {
        // (5,1,0,0) is a positive kernel vector; putting it in V makes the
        // slice unbounded along it.
        let a = RatMatrix::from_i64(&[&[1, 1, 1, 1], &[5, 1, 0, 0], &[0, 2, 5, 0]]);
        assert!(check_gale_pair(&a, catalog::triangle().b()));
        assert!(matches!(dual_slice(&a), Err(Error::Unbounded { .. })));
    }

    #[test]
    fn type_theorem_on_examples() {
        let t = verify_type_theorem(&catalog::triangle(), &[int(0)], DEFAULT_NODE_CAP).unwrap();
        assert!(t.holds());
        let m = catalog::cube_model_1();
        for x in [rvec(&[(0, 1), (0, 1)]), vec![rat(1, 100), rat(-1, 50)]] {
            assert!(verify_type_theorem(&m, &x, DEFAULT_NODE_CAP).unwrap().holds());
        }
    }
}
