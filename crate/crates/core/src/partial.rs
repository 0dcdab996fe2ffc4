//! Cells of partial linear models.
//!
//! Inside theta the cell equals the cell of the extension. On a facet `F` the
//! cell of the facet's own extension `F'` is cut in two by the affine span of
//! the extension's cell; the half facing away from the model is the cell. On
//! lower-dimensional faces the same construction is repeated for every face
//! one dimension up and the halves are intersected. That last step is a
//! conjecture and is reported as experimental.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, vdiv, vsub, RatVector, Rational};
use crate::logvor::cell_interior;
use crate::model::{LinearModel, PartialLinearModel, PointKind};
use crate::polytope::{affine_hull, Polytope};

/// How one side of the split meets the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideProbe {
    /// The side meets the line through `p` in the affine span of the larger
    /// face in a segment `[p, end]`.
    pub end: RatVector,
    pub end_parameter: RatVector,
    /// Largest `s` in `[0, 1]` with `p + s (end - p)` in the larger face.
    pub fraction_inside: Rational,
}

impl SideProbe {
    pub fn meets_relative_interior(&self) -> bool {
        self.fraction_inside.is_positive()
    }
}

/// Exact evidence for which half was kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideCertificate {
    /// The cut is `normal . u = 0`; `below` is `normal . u <= 0`.
    pub normal: RatVector,
    pub below: SideProbe,
    pub above: SideProbe,
    /// True when the kept half is `below`.
    pub kept_below: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetCellResult {
    pub facet: usize,
    pub x: RatVector,
    pub p: RatVector,
    /// Cell of the facet's extension at `p`.
    pub f_cell: Polytope,
    /// Cell of the model's extension at `p`.
    pub m_cell: Polytope,
    /// The kept half: the cell of the partial model at `p`.
    pub q: Polytope,
    pub q_bar: Polytope,
    pub certificate: SideCertificate,
}

/// Cell at a parameter strictly inside theta.
pub fn cell_partial_interior(pm: &PartialLinearModel, x: &[Rational]) -> Result<Polytope> {
    let pt = pm.point_at(x)?;
    match pt.kind {
        PointKind::Interior => cell_interior(&pm.extension, x),
        PointKind::BoundaryOfTheta => Err(Error::NotInterior(
            "parameter lies on the boundary of theta; use the facet cell".into(),
        )),
        PointKind::BoundaryOfSimplex => Err(Error::NotInterior("point lies on the boundary of the simplex".into())),
    }
}

/// Indices of the halfspaces of theta that are tight at `x`.
fn tight_facets(pm: &PartialLinearModel, x: &[Rational]) -> Vec<usize> {
    (0..pm.theta.halfspaces().len())
        .filter(|&f| pm.theta.halfspaces()[f].slack(x).is_zero())
        .collect()
}

/// Vertices (parameter space) of the smallest face of theta containing `x`.
pub fn minimal_face(pm: &PartialLinearModel, x: &[Rational]) -> Result<Vec<RatVector>> {
    if !pm.theta.contains(x) {
        return Err(Error::OutOfDomain("parameter outside theta".into()));
    }
    let tight = tight_facets(pm, x);
    Ok(pm
        .theta
        .vertices()
        .iter()
        .filter(|v| tight.iter().all(|&f| pm.theta.halfspaces()[f].slack(v).is_zero()))
        .cloned()
        .collect())
}

/// Splits the cell of `outer` at `p` by the affine span of the cell of
/// `inner` at `p`, and keeps the half that does not reach into the relative
/// interior of `inner_face` (given in the parameters of `pm`).
fn split_and_select(
    pm: &PartialLinearModel,
    outer: &LinearModel,
    inner_face: &[RatVector],
    p: &[Rational],
) -> Result<(Polytope, Polytope, SideCertificate)> {
    let inner_images: Vec<RatVector> = inner_face.iter().map(|v| pm.extension.point(v)).collect();
    let inner = LinearModel::spanned_by("inner", &inner_images)?;
    let y_outer = outer
        .parameter_of(p)
        .ok_or_else(|| Error::OutOfDomain("point is not on the face extension".into()))?;
    let y_inner = inner.parameter_of(p).expect("p lies on the larger face");
    let f_cell = cell_interior(outer, &y_outer)?;
    let m_cell = cell_interior(&inner, &y_inner)?;

    // A direction of the inner model that is not a direction of the outer one
    // gives the one equation of aff(m_cell) missing from aff(f_cell).
    let outer_cols: Vec<RatVector> = (0..outer.d()).map(|j| outer.b().column(j)).collect();
    let base_rank = linalg::rank_of_rows(&outer_cols);
    let g = (0..inner.d())
        .map(|j| inner.b().column(j))
        .find(|col| {
            let mut rows = outer_cols.clone();
            rows.push(col.clone());
            linalg::rank_of_rows(&rows) > base_rank
        })
        .ok_or_else(|| Error::DegenerateSplit("larger face adds no direction".into()))?;
    let normal = vdiv(&g, p);
    let split = f_cell.split_by_hyperplane(&normal, &Rational::zero())?;
    if !split.proper {
        return Err(Error::DegenerateSplit(
            "the extension's cell does not cut the face cell into two full-dimensional parts".into(),
        ));
    }
    debug_assert!(m_cell.vertices().iter().all(|v| dot(&normal, v).is_zero()));

    let face_poly = Polytope::from_vertices(inner_face)?;
    let image_eqs = affine_hull(&inner_images);
    let x_p = pm.extension.parameter_of(p).expect("p on the model");
    let probe = |side: &Polytope| -> Result<SideProbe> {
        let seg = side.intersect_with_affine(&image_eqs)?;
        let end = seg
            .vertices()
            .iter()
            .find(|v| v.as_slice() != p)
            .cloned()
            .ok_or_else(|| Error::DegenerateSplit("side meets the face span only at p".into()))?;
        let end_parameter = pm.extension.parameter_of(&end).expect("segment in the model span");
        let dir = vsub(&end_parameter, &x_p);
        let mut frac = Rational::from_integer(1.into());
        for h in face_poly.halfspaces() {
            let rate = dot(&h.normal, &dir);
            if rate.is_positive() {
                let room = -h.slack(&x_p);
                let s = room / rate;
                if s < frac {
                    frac = s;
                }
            }
        }
        Ok(SideProbe { end, end_parameter, fraction_inside: frac })
    };
    let below = probe(&split.below)?;
    let above = probe(&split.above)?;
    let kept_below = match (below.meets_relative_interior(), above.meets_relative_interior()) {
        (false, true) => true,
        (true, false) => false,
        (b, a) => {
            return Err(Error::DegenerateSplit(format!(
                "side selection is ambiguous: below meets the face {}, above meets it {}",
                b, a
            )))
        }
    };
    let (q, q_bar) = if kept_below { (split.below, split.above) } else { (split.above, split.below) };
    Ok((q, q_bar, SideCertificate { normal, below, above, kept_below }))
}

/// Cell at a parameter in the relative interior of facet `facet` of theta.
pub fn cell_partial_facet(pm: &PartialLinearModel, facet: usize, x: &[Rational]) -> Result<FacetCellResult> {
    let facet_vertices = pm.facet_vertices(facet)?;
    if pm.face_on_simplex_boundary(&facet_vertices) {
        return Err(Error::Unsupported(format!("facet {} lies on the boundary of the simplex", facet)));
    }
    if tight_facets(pm, x) != vec![facet] || !pm.theta.contains(x) {
        return Err(Error::OutOfDomain(format!(
            "parameter is not in the relative interior of facet {}",
            facet
        )));
    }
    let p = pm.extension.point(x);
    let f_ext = pm.face_extension(&facet_vertices)?;
    let y = f_ext.parameter_of(&p).expect("p on facet span");
    let f_cell = cell_interior(&f_ext, &y)?;
    let m_cell = cell_interior(&pm.extension, x)?;
    let (q, q_bar, certificate) = split_and_select(pm, &f_ext, pm.theta.vertices(), &p)?;
    Ok(FacetCellResult { facet, x: x.to_vec(), p, f_cell, m_cell, q, q_bar, certificate })
}

/// Candidate cell at a parameter on a face of any dimension (experimental
/// for faces of codimension two or more).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureResult {
    pub x: RatVector,
    pub p: RatVector,
    pub face: Vec<RatVector>,
    pub face_dim: isize,
    /// Faces one dimension up that contain the face.
    pub cofaces: Vec<Vec<RatVector>>,
    pub halves: Vec<(Polytope, SideCertificate)>,
    pub candidate: Polytope,
    /// `(n - 1) - dim face`, the predicted dimension for models in general
    /// position.
    pub predicted_dim: isize,
    /// Whether the extension passes the transversality check, used as the
    /// stand-in for general position.
    pub general_position_proxy: bool,
}

pub fn cell_partial_face_conjecture(pm: &PartialLinearModel, x: &[Rational]) -> Result<ConjectureResult> {
    let face = minimal_face(pm, x)?;
    let face_dim = linalg::affine_dim(&face);
    if face_dim == pm.d() as isize {
        return Err(Error::OutOfDomain("parameter is interior to theta; use the interior cell".into()));
    }
    if pm.face_on_simplex_boundary(&face) {
        return Err(Error::Unsupported("face lies on the boundary of the simplex".into()));
    }
    let p = pm.extension.point(x);
    let f_ext = pm.face_extension(&face)?;
    let lattice = pm.theta.face_lattice();
    let face_idx: Vec<usize> = face
        .iter()
        .map(|v| pm.theta.vertex_index(v).expect("face vertex is a theta vertex"))
        .collect();
    let cofaces: Vec<Vec<RatVector>> = lattice
        .faces_of_dim(face_dim + 1)
        .filter(|g| face_idx.iter().all(|i| g.vertices.binary_search(i).is_ok()))
        .map(|g| g.vertices.iter().map(|&i| pm.theta.vertices()[i].clone()).collect())
        .collect();
    let mut halves = Vec::new();
    let mut candidate: Option<Polytope> = None;
    for g in &cofaces {
        let (q, _, cert) = split_and_select(pm, &f_ext, g, &p)?;
        candidate = Some(match candidate {
            None => q.clone(),
            Some(c) => c.intersection(&q)?,
        });
        halves.push((q, cert));
    }
    let candidate = candidate.ok_or_else(|| Error::DegenerateSplit("face has no cofaces".into()))?;
    let general_position_proxy = pm.extension.is_transversal()?.transversal;
    Ok(ConjectureResult {
        x: x.to_vec(),
        p,
        face,
        face_dim,
        cofaces,
        halves,
        candidate,
        predicted_dim: pm.n() as isize - 1 - face_dim,
        general_position_proxy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::{rat, rvec};

    fn midpoint_facet(pm: &PartialLinearModel) -> (usize, RatVector) {
        let target = rvec(&[(1, 5), (1, 5), (3, 10), (3, 10)]);
        for f in 0..pm.theta.halfspaces().len() {
            let vs = pm.facet_vertices(f).unwrap();
            let mid = linalg::centroid(&vs);
            if pm.extension.point(&mid) == target {
                return (f, mid);
            }
        }
        panic!("facet not found");
    }

    #[test]
    fn interior_cell_equals_extension_cell() {
        let pm = catalog::partial_example();
        let x = pm.theta.centroid().unwrap();
        let cell = cell_partial_interior(&pm, &x).unwrap();
        assert_eq!(cell, cell_interior(&pm.extension, &x).unwrap());
        assert_eq!(cell.dim(), 1);
    }

    #[test]
    fn boundary_parameter_is_rejected_by_interior_cell() {
        let pm = catalog::partial_example();
        let (_, mid) = midpoint_facet(&pm);
        assert!(matches!(cell_partial_interior(&pm, &mid), Err(Error::NotInterior(_))));
    }

    #[test]
    fn facet_cell_on_example() {
        let pm = catalog::partial_example();
        let (f, mid) = midpoint_facet(&pm);
        let r = cell_partial_facet(&pm, f, &mid).unwrap();
        assert_eq!(r.f_cell.dim(), 2);
        assert_eq!(r.m_cell.dim(), 1);
        assert_eq!(r.q.dim(), 2);
        assert_eq!(r.q_bar.dim(), 2);
        for v in r.m_cell.vertices() {
            assert!(r.q.contains(v));
        }
        // Kept half does not reach into the model, the other one does.
        let (kept, other) = if r.certificate.kept_below {
            (&r.certificate.below, &r.certificate.above)
        } else {
            (&r.certificate.above, &r.certificate.below)
        };
        assert!(!kept.meets_relative_interior());
        assert!(other.meets_relative_interior());
    }

    #[test]
    fn facet_cell_near_a_vertex_stays_full() {
        let pm = catalog::partial_example();
        let (f, _) = midpoint_facet(&pm);
        let vs = pm.facet_vertices(f).unwrap();
        let t = rat(1, 50);
        let x: RatVector = vs[0].iter().zip(&vs[1]).map(|(a, b)| a * (Rational::from_integer(1.into()) - &t) + b * &t).collect();
        assert_eq!(cell_partial_facet(&pm, f, &x).unwrap().q.dim(), 2);
    }

    #[test]
    fn wrong_facet_or_point_is_rejected() {
        let pm = catalog::partial_example();
        let (f, mid) = midpoint_facet(&pm);
        let other = (f + 1) % pm.theta.halfspaces().len();
        assert!(cell_partial_facet(&pm, other, &mid).is_err());
        let centre = pm.theta.centroid().unwrap();
        assert!(cell_partial_facet(&pm, f, &centre).is_err());
    }

    #[test]
    fn conjecture_at_codimension_one_matches_facet_cell() {
        let pm = catalog::partial_example();
        let (f, mid) = midpoint_facet(&pm);
        let r = cell_partial_facet(&pm, f, &mid).unwrap();
        let c = cell_partial_face_conjecture(&pm, &mid).unwrap();
        assert_eq!(c.cofaces.len(), 1);
        assert_eq!(c.candidate, r.q);
    }

    #[test]
    fn conjecture_at_vertices_has_predicted_dimension() {
        let pm = catalog::partial_example();
        for v in pm.theta.vertices() {
            let c = cell_partial_face_conjecture(&pm, v).unwrap();
            assert_eq!(c.cofaces.len(), 2);
            assert_eq!(c.predicted_dim, 3);
            assert_eq!(c.candidate.dim(), 3, "vertex {:?}", v);
        }
    }
}
