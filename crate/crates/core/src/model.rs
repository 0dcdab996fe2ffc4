//! Linear and partial linear models inside the probability simplex.
//!
//! A linear model is `{c - B x : x in Theta'}` where the columns of `B` sum to
//! zero, `c` sums to one and `Theta' = {x : B x <= c}` is the bounded,
//! full-dimensional region on which every coordinate stays nonnegative.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, format_rational, vsub, vsum, RatMatrix, RatVector, Rational};
use crate::polytope::{Halfspace, Polytope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    Interior,
    BoundaryOfSimplex,
    BoundaryOfTheta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelPoint {
    pub x: RatVector,
    pub p: RatVector,
    pub kind: PointKind,
    /// Indices with `p_i > 0`.
    pub support: Vec<usize>,
}

impl ModelPoint {
    pub fn zeros(&self) -> Vec<usize> {
        (0..self.p.len()).filter(|i| self.support.binary_search(i).is_err()).collect()
    }
}

/// One failed model invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: &'static str,
    pub detail: String,
}

impl Violation {
    fn new(invariant: &'static str, detail: impl Into<String>) -> Self {
        Violation { invariant, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearModel {
    pub name: String,
    b: RatMatrix,
    c: RatVector,
}

impl LinearModel {
    /// Wraps `(B, c)` after a shape check only. Use [`LinearModel::validate`]
    /// or [`LinearModel::validated`] for the model invariants.
    pub fn new(name: impl Into<String>, b: RatMatrix, c: RatVector) -> Result<Self> {
        if b.nrows() != c.len() {
            return Err(Error::Dimension(format!(
                "B has {} rows but c has {} entries",
                b.nrows(),
                c.len()
            )));
        }
        Ok(LinearModel { name: name.into(), b, c })
    }

    /// Like [`LinearModel::new`] but fails with every violated invariant.
    pub fn validated(name: impl Into<String>, b: RatMatrix, c: RatVector) -> Result<Self> {
        let m = Self::new(name, b, c)?;
        m.ensure_valid()?;
        Ok(m)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            let msgs: Vec<String> = v.iter().map(|v| format!("{}: {}", v.invariant, v.detail)).collect();
            Err(Error::InvalidModel(msgs.join("; ")))
        }
    }

    /// Number of states `n`.
    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// Model dimension `d`.
    pub fn d(&self) -> usize {
        self.b.ncols()
    }

    pub fn b(&self) -> &RatMatrix {
        &self.b
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    /// `[B | c]`, the matrix whose maximal minors decide degeneration at
    /// model vertices.
    pub fn augmented(&self) -> RatMatrix {
        self.b.append_column(&self.c).expect("rows match")
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (j, s) in self.b.column_sums().iter().enumerate() {
            if !s.is_zero() {
                out.push(Violation::new(
                    "column-sum",
                    format!("column {} of B sums to {}", j, format_rational(s)),
                ));
            }
        }
        let total = vsum(&self.c);
        if !total.is_one() {
            out.push(Violation::new(
                "coordinate-sum",
                format!("c sums to {}", format_rational(&total)),
            ));
        }
        let r = linalg::rank(&self.b);
        if r != self.d() {
            out.push(Violation::new("rank", format!("rank(B) = {} but d = {}", r, self.d())));
        }
        match self.parameter_polytope() {
            Err(Error::Unbounded { .. }) => {
                out.push(Violation::new("parameter-polytope", "{x : Bx <= c} is unbounded"))
            }
            Err(e) => out.push(Violation::new("parameter-polytope", e.to_string())),
            Ok(theta) if theta.is_empty() => {
                out.push(Violation::new("parameter-polytope", "{x : Bx <= c} is empty"))
            }
            Ok(theta) if theta.dim() != self.d() as isize => out.push(Violation::new(
                "parameter-polytope",
                format!("{{x : Bx <= c}} has dimension {} instead of {}", theta.dim(), self.d()),
            )),
            Ok(_) => {}
        }
        out
    }

    /// `c - B x`.
    pub fn point(&self, x: &[Rational]) -> RatVector {
        vsub(&self.c, &self.b.mul_vec(x))
    }

    /// The halfspaces `b_i . x <= c_i`, one per coordinate.
    pub fn parameter_halfspaces(&self) -> Vec<Halfspace> {
        (0..self.n())
            .map(|i| Halfspace::new(self.b.row(i).to_vec(), self.c[i].clone()))
            .collect()
    }

    /// `Theta' = {x : B x <= c}`.
    pub fn parameter_polytope(&self) -> Result<Polytope> {
        Polytope::from_halfspaces(&self.parameter_halfspaces(), &[], self.d())
    }

    /// Inverse of [`LinearModel::point`] on the model's affine span.
    pub fn parameter_of(&self, p: &[Rational]) -> Option<RatVector> {
        if p.len() != self.n() {
            return None;
        }
        let rhs = vsub(&self.c, p);
        linalg::solve(&self.b, &rhs).ok()?.unique()
    }

    pub fn point_at(&self, x: &[Rational]) -> Result<ModelPoint> {
        if x.len() != self.d() {
            return Err(Error::Dimension(format!(
                "parameter has {} entries, model dimension is {}",
                x.len(),
                self.d()
            )));
        }
        let p = self.point(x);
        if let Some(i) = p.iter().position(Signed::is_negative) {
            return Err(Error::OutOfDomain(format!(
                "coordinate {} of c - Bx is {}",
                i,
                format_rational(&p[i])
            )));
        }
        Ok(classify(x.to_vec(), p, None))
    }

    /// Vertices of `Theta'` mapped into the simplex.
    pub fn model_vertices(&self) -> Result<Vec<ModelPoint>> {
        let theta = self.parameter_polytope()?;
        theta.vertices().iter().map(|x| self.point_at(x)).collect()
    }

    /// Every model vertex should lie on an `(n-d-1)`-dimensional face of the
    /// simplex, i.e. have exactly `n - d` nonzero coordinates.
    pub fn is_transversal(&self) -> Result<Transversality> {
        let target = self.n() - self.d();
        let offenders: Vec<ModelPoint> = self
            .model_vertices()?
            .into_iter()
            .filter(|v| v.support.len() != target)
            .collect();
        Ok(Transversality { transversal: offenders.is_empty(), offenders })
    }

    /// Builds the linear model spanned by points of the simplex: `c` is their
    /// centroid and the columns of `B` are the reduced echelon basis of the
    /// direction space. The result is validated.
    pub fn spanned_by(name: impl Into<String>, points: &[RatVector]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Dimension("no points".into()));
        };
        let n = first.len();
        let c = linalg::centroid(points);
        let diffs: Vec<RatVector> = points[1..].iter().map(|p| vsub(p, first)).collect();
        let dirs = if diffs.is_empty() {
            Vec::new()
        } else {
            linalg::row_space_basis(&RatMatrix::from_rows(&diffs, n)?)
        };
        let b = RatMatrix::from_columns(&dirs, n)?;
        Self::validated(name, b, c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversality {
    pub transversal: bool,
    pub offenders: Vec<ModelPoint>,
}

fn classify(x: RatVector, p: RatVector, theta: Option<&Polytope>) -> ModelPoint {
    let support: Vec<usize> = (0..p.len()).filter(|&i| p[i].is_positive()).collect();
    let kind = if support.len() < p.len() {
        PointKind::BoundaryOfSimplex
    } else if theta.is_some_and(|t| t.halfspaces().iter().any(|h| h.slack(&x).is_zero())) {
        PointKind::BoundaryOfTheta
    } else {
        PointKind::Interior
    };
    ModelPoint { x, p, kind, support }
}

/// A polytope `theta` inside the parameter region of a linear model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialLinearModel {
    pub extension: LinearModel,
    pub theta: Polytope,
}

impl PartialLinearModel {
    pub fn new(extension: LinearModel, theta: Polytope) -> Result<Self> {
        extension.ensure_valid()?;
        let d = extension.d();
        if theta.ambient_dim() != d || theta.dim() != d as isize {
            return Err(Error::InvalidModel(format!(
                "theta must be a full-dimensional polytope in R^{}",
                d
            )));
        }
        if let Some(v) = theta
            .vertices()
            .iter()
            .find(|x| extension.point(x).iter().any(Signed::is_negative))
        {
            return Err(Error::InvalidModel(format!(
                "theta vertex {:?} lies outside the extension's parameter region",
                v.iter().map(format_rational).collect::<Vec<_>>()
            )));
        }
        let pm = PartialLinearModel { extension, theta };
        if (0..pm.theta.halfspaces().len()).all(|f| pm.facet_on_simplex_boundary(f)) {
            return Err(Error::InvalidModel("every facet of theta lies on the simplex boundary".into()));
        }
        Ok(pm)
    }

    /// The partial model whose image is the convex hull of `points` in the
    /// simplex, with extension given by [`LinearModel::spanned_by`].
    pub fn from_image_vertices(name: impl Into<String>, points: &[RatVector]) -> Result<Self> {
        let ext = LinearModel::spanned_by(name, points)?;
        let params: Vec<RatVector> = points
            .iter()
            .map(|p| ext.parameter_of(p).expect("point lies on its own span"))
            .collect();
        let theta = Polytope::from_vertices(&params)?;
        Self::new(ext, theta)
    }

    pub fn d(&self) -> usize {
        self.extension.d()
    }

    pub fn n(&self) -> usize {
        self.extension.n()
    }

    pub fn point_at(&self, x: &[Rational]) -> Result<ModelPoint> {
        if x.len() != self.d() || !self.theta.contains(x) {
            return Err(Error::OutOfDomain("parameter outside theta".into()));
        }
        Ok(classify(x.to_vec(), self.extension.point(x), Some(&self.theta)))
    }

    /// Parameter-space vertices of facet `facet` of theta.
    pub fn facet_vertices(&self, facet: usize) -> Result<Vec<RatVector>> {
        let sets = self.theta.facet_vertex_sets();
        let set = sets.get(facet).ok_or_else(|| {
            Error::OutOfDomain(format!("theta has {} facets, index {} requested", sets.len(), facet))
        })?;
        Ok(set.iter().map(|&i| self.theta.vertices()[i].clone()).collect())
    }

    /// True when the image of the facet has a coordinate that vanishes
    /// identically.
    pub fn facet_on_simplex_boundary(&self, facet: usize) -> bool {
        self.facet_vertices(facet)
            .map(|vs| self.face_on_simplex_boundary(&vs))
            .unwrap_or(false)
    }

    pub fn face_on_simplex_boundary(&self, face: &[RatVector]) -> bool {
        let images: Vec<RatVector> = face.iter().map(|x| self.extension.point(x)).collect();
        (0..self.n()).any(|i| images.iter().all(|p| p[i].is_zero()))
    }

    /// Linear model spanned by the image of a face of theta, given by its
    /// parameter-space vertices.
    pub fn face_extension(&self, face: &[RatVector]) -> Result<LinearModel> {
        if self.face_on_simplex_boundary(face) {
            return Err(Error::Unsupported(
                "face lies on the boundary of the simplex; it has no likelihood extension".into(),
            ));
        }
        let images: Vec<RatVector> = face.iter().map(|x| self.extension.point(x)).collect();
        LinearModel::spanned_by(format!("{}/face", self.extension.name), &images)
    }

    pub fn facet_extension(&self, facet: usize) -> Result<LinearModel> {
        let vs = self.facet_vertices(facet)?;
        self.face_extension(&vs)
    }
}

/// Returns `true` when `p` lies in the relative interior of `face`.
pub fn in_relative_interior(face: &Polytope, p: &[Rational]) -> bool {
    face.contains(p) && face.halfspaces().iter().all(|h| h.slack(p).is_negative())
}
