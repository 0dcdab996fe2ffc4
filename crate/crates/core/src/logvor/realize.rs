//! Every polytope occurs as a cell: build a linear model whose interior cells
//! are combinatorially equivalent to a given polytope.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, primitive_integer, rat, RatMatrix, RatVector, Rational};
use crate::model::LinearModel;
use crate::polytope::{Equation, Halfspace, Polytope};

/// The polytope `{x in R^n : M x = b, sum x = 1, x >= 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationData {
    pub m: RatMatrix,
    pub b: RatVector,
}

impl RealizationData {
    pub fn new(m: RatMatrix, b: RatVector) -> Result<Self> {
        if m.nrows() != b.len() {
            return Err(Error::Dimension(format!("M has {} rows, b has {} entries", m.nrows(), b.len())));
        }
        Ok(RealizationData { m, b })
    }

    pub fn n(&self) -> usize {
        self.m.ncols()
    }

    /// `M - b 1^T`, so that the polytope is the slice `sum x = 1` of the cone
    /// `{N x = 0, x >= 0}`.
    pub fn homogeneous(&self) -> RatMatrix {
        let mut out = self.m.clone();
        for i in 0..out.nrows() {
            for j in 0..out.ncols() {
                out[(i, j)] -= &self.b[i];
            }
        }
        out
    }

    pub fn polytope(&self) -> Result<Polytope> {
        let n = self.n();
        let hs: Vec<Halfspace> = (0..n)
            .map(|i| {
                let mut normal = vec![Rational::zero(); n];
                normal[i] = -Rational::one();
                Halfspace::new(normal, Rational::zero())
            })
            .collect();
        let mut eqs: Vec<Equation> = self
            .homogeneous()
            .rows()
            .map(|r| Equation::new(r.to_vec(), Rational::zero()))
            .collect();
        eqs.push(Equation::new(vec![Rational::one(); n], Rational::one()));
        Polytope::from_halfspaces(&hs, &eqs, n)
    }

    /// Projectively equivalent copy of `p` inside a simplex, in facet slack
    /// coordinates: one coordinate per facet of `p`.
    pub fn from_polytope(p: &Polytope) -> Result<Self> {
        if p.dim() < 1 {
            return Err(Error::NotRealizable("polytope must have positive dimension".into()));
        }
        let slacks: Vec<RatVector> = p
            .vertices()
            .iter()
            .map(|v| p.halfspaces().iter().map(|h| -h.slack(v)).collect())
            .collect();
        let n = p.halfspaces().len();
        let s = RatMatrix::from_rows(&slacks, n)?;
        let rows = linalg::right_kernel_basis(&s);
        let m = RatMatrix::from_rows(&rows, n)?;
        Self::new(m, vec![Rational::zero(); rows.len()])
    }
}

/// Builds `(B, c)` with `B = (N diag(x'))^T` where `N` is a row basis of the
/// homogeneous system and `x'` is the average of the polytope's vertices, and
/// `c` uniform. The interior cell at `x = 0` is `{u : u o x' in cone}`, a
/// projective image of the input.
pub fn realize(data: &RealizationData) -> Result<LinearModel> {
    let n = data.n();
    let p = data.polytope()?;
    if p.is_empty() {
        return Err(Error::NotRealizable("the polytope is empty".into()));
    }
    let xp = p.centroid().expect("nonempty");
    if let Some(i) = xp.iter().position(|v| !v.is_positive()) {
        return Err(Error::NotRealizable(format!(
            "coordinate {} vanishes on the whole polytope, so the cone has no strictly positive point",
            i
        )));
    }
    let basis = linalg::row_space_basis(&data.homogeneous());
    let columns: Vec<RatVector> = basis
        .iter()
        .map(|row| primitive_integer(&row.iter().zip(&xp).map(|(a, w)| a * w).collect::<Vec<_>>()))
        .collect();
    let b = RatMatrix::from_columns(&columns, n)?;
    LinearModel::validated("realized", b, vec![rat(1, n as i64); n])
}
