//! Exact polytopes with both representations.
//!
//! A [`Polytope`] always carries its vertex list (sorted lexicographically),
//! the equations of its affine hull and an irredundant list of facet
//! halfspaces `normal . x <= offset`. The face lattice is derived lazily from
//! the vertex-facet incidences.
//!
//! All constructions are brute force over small subsets. That is the right
//! trade-off for the desk-scale instances this crate targets, and it keeps
//! every degenerate tie exact.

mod iso;
mod lattice;

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    self, affine_dim, dot, primitive_integer, rank_of_rows, vadd, vscale, vsub, RatMatrix,
    RatVector, Rational, Solution,
};
use crate::util::for_each_combination;

pub use iso::{combinatorial_isomorphism, IsoVerdict, DEFAULT_NODE_CAP};
pub use lattice::{Face, FaceLattice};

/// `normal . x <= offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: RatVector,
    pub offset: Rational,
}

/// `normal . x = offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub normal: RatVector,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: RatVector, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    /// `normal . x - offset`; nonpositive inside.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x) - &self.offset
    }

    pub fn flipped(&self) -> Self {
        Halfspace {
            normal: self.normal.iter().map(|v| -v).collect(),
            offset: -self.offset.clone(),
        }
    }

    fn normalized(&self) -> Self {
        let mut joined = self.normal.clone();
        joined.push(self.offset.clone());
        let mut p = primitive_integer(&joined);
        let offset = p.pop().expect("nonempty");
        Halfspace { normal: p, offset }
    }
}

impl Equation {
    pub fn new(normal: RatVector, offset: Rational) -> Self {
        Equation { normal, offset }
    }

    pub fn residual(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x) - &self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub below: Polytope,
    pub above: Polytope,
    /// True when the hyperplane meets the relative interior, so that both
    /// sides keep the full dimension.
    pub proper: bool,
}

#[derive(Debug, Clone)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<RatVector>,
    halfspaces: Vec<Halfspace>,
    equations: Vec<Equation>,
    lattice: OnceLock<FaceLattice>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Polytope {
    pub fn empty(ambient_dim: usize) -> Self {
        Polytope {
            ambient_dim,
            vertices: Vec::new(),
            halfspaces: Vec::new(),
            equations: Vec::new(),
            lattice: OnceLock::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension; `-1` for the empty polytope.
    pub fn dim(&self) -> isize {
        affine_dim(&self.vertices)
    }

    pub fn vertex_index(&self, v: &[Rational]) -> Option<usize> {
        self.vertices.binary_search_by(|w| w.as_slice().cmp(v)).ok()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        if self.is_empty() || x.len() != self.ambient_dim {
            return false;
        }
        self.equations.iter().all(|e| e.residual(x).is_zero())
            && self.halfspaces.iter().all(|h| !h.slack(x).is_positive())
    }

    pub fn centroid(&self) -> Option<RatVector> {
        (!self.is_empty()).then(|| linalg::centroid(&self.vertices))
    }

    /// Convex hull of a point set. Duplicates and non-extreme points are
    /// dropped; facets are found by testing every affinely independent
    /// subset of the right size.
    pub fn from_vertices(points: &[RatVector]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Dimension("from_vertices needs at least one point".into()));
        };
        let ambient = first.len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(Error::Dimension("points of differing dimension".into()));
        }
        let pts: Vec<RatVector> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let facets = brute_force_facets(&pts);
        let extreme = extreme_points(&pts, &facets);
        Ok(Self::assemble(ambient, extreme, facets))
    }

    /// Like [`Polytope::from_vertices`], but first tries `hints` as the facet
    /// candidates. The hints are accepted only if the region they cut out of
    /// the affine hull has exactly the given vertices; otherwise this falls
    /// back to the brute-force hull.
    pub fn from_vertices_with_hints(points: &[RatVector], hints: &[Halfspace]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Dimension("from_vertices needs at least one point".into()));
        };
        let ambient = first.len();
        let pts: Vec<RatVector> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let eqs = affine_hull(&pts);
        if hints.iter().all(|h| pts.iter().all(|p| !h.slack(p).is_positive())) {
            if let Ok(hull) = Self::from_halfspaces(hints, &eqs, ambient) {
                if hull.vertices == pts {
                    return Ok(hull);
                }
            }
        }
        Self::from_vertices(&pts)
    }

    /// Vertex enumeration of `{x : hs, eqs}` by solving every maximal tight
    /// subsystem inside the affine subspace cut out by `eqs`.
    pub fn from_halfspaces(hs: &[Halfspace], eqs: &[Equation], ambient_dim: usize) -> Result<Self> {
        if hs.iter().any(|h| h.normal.len() != ambient_dim)
            || eqs.iter().any(|e| e.normal.len() != ambient_dim)
        {
            return Err(Error::Dimension("constraint normal has wrong length".into()));
        }
        // Parametrize the affine subspace as x0 + K y.
        let (x0, basis) = if eqs.is_empty() {
            (
                vec![Rational::zero(); ambient_dim],
                RatMatrix::identity(ambient_dim).to_rows(),
            )
        } else {
            let rows: Vec<RatVector> = eqs.iter().map(|e| e.normal.clone()).collect();
            let e = RatMatrix::from_rows(&rows, ambient_dim)?;
            let rhs: RatVector = eqs.iter().map(|e| e.offset.clone()).collect();
            let x0 = match linalg::solve(&e, &rhs)? {
                Solution::Inconsistent => return Ok(Self::empty(ambient_dim)),
                Solution::Unique(x) | Solution::NonUnique(x) => x,
            };
            (x0, linalg::right_kernel_basis(&e))
        };
        let m = basis.len();
        let lift = |y: &[Rational]| -> RatVector {
            let mut x = x0.clone();
            for (coef, k) in y.iter().zip(&basis) {
                if !coef.is_zero() {
                    x = vadd(&x, &vscale(k, coef));
                }
            }
            x
        };

        let mut g_rows = Vec::new();
        let mut h_rhs = Vec::new();
        for h in hs {
            let g: RatVector = basis.iter().map(|k| dot(&h.normal, k)).collect();
            let rhs = &h.offset - dot(&h.normal, &x0);
            if g.iter().all(Zero::is_zero) {
                if rhs.is_negative() {
                    return Ok(Self::empty(ambient_dim));
                }
                continue;
            }
            g_rows.push(g);
            h_rhs.push(rhs);
        }

        if m == 0 {
            return Ok(Self::assemble(ambient_dim, vec![x0], hs.to_vec()));
        }

        let r = rank_of_rows(&g_rows);
        if r < m {
            // Lineality: the region is empty or unbounded.
            let gm = RatMatrix::from_rows(&g_rows, m)?;
            let line = linalg::right_kernel_basis(&gm)
                .into_iter()
                .next()
                .expect("rank deficiency gives a kernel vector");
            let reduced_feasible = if r == 0 {
                true
            } else {
                let w = linalg::row_space_basis(&gm);
                let gr: Vec<RatVector> = g_rows
                    .iter()
                    .map(|g| w.iter().map(|wk| dot(g, wk)).collect())
                    .collect();
                !enumerate_vertices(&gr, &h_rhs, r).is_empty()
            };
            if reduced_feasible {
                let ray = basis_combination(&basis, &line, ambient_dim);
                return Err(Error::Unbounded { ray });
            }
            return Ok(Self::empty(ambient_dim));
        }

        let ys = enumerate_vertices(&g_rows, &h_rhs, m);
        if ys.is_empty() {
            return Ok(Self::empty(ambient_dim));
        }
        if let Some(dir) = recession_ray(&g_rows, m) {
            let ray = basis_combination(&basis, &dir, ambient_dim);
            return Err(Error::Unbounded { ray });
        }
        let vertices: Vec<RatVector> = ys.iter().map(|y| lift(y)).collect();
        Ok(Self::assemble(ambient_dim, vertices, hs.to_vec()))
    }

    /// Builds a polytope from its (extreme) vertices and a candidate list of
    /// valid inequalities that contains every facet. Candidates that are not
    /// facets are dropped.
    pub(crate) fn assemble(ambient_dim: usize, vertices: Vec<RatVector>, candidates: Vec<Halfspace>) -> Self {
        let vertices: Vec<RatVector> = vertices
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if vertices.is_empty() {
            return Self::empty(ambient_dim);
        }
        let equations = affine_hull(&vertices);
        let m = affine_dim(&vertices);
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut facets: Vec<(Vec<usize>, Halfspace)> = Vec::new();
        for h in candidates {
            debug_assert!(vertices.iter().all(|v| !h.slack(v).is_positive()), "invalid candidate");
            let tight: Vec<usize> = (0..vertices.len())
                .filter(|&i| h.slack(&vertices[i]).is_zero())
                .collect();
            if tight.is_empty() || tight.len() == vertices.len() || seen.contains(&tight) {
                continue;
            }
            let pts: Vec<RatVector> = tight.iter().map(|&i| vertices[i].clone()).collect();
            if affine_dim(&pts) != m - 1 {
                continue;
            }
            seen.insert(tight.clone());
            facets.push((tight, h.normalized()));
        }
        facets.sort_by(|a, b| a.0.cmp(&b.0));
        Polytope {
            ambient_dim,
            vertices,
            halfspaces: facets.into_iter().map(|(_, h)| h).collect(),
            equations,
            lattice: OnceLock::new(),
        }
    }

    /// Facet vertex sets, aligned with [`Polytope::halfspaces`].
    pub fn facet_vertex_sets(&self) -> Vec<Vec<usize>> {
        self.halfspaces
            .iter()
            .map(|h| {
                (0..self.vertices.len())
                    .filter(|&i| h.slack(&self.vertices[i]).is_zero())
                    .collect()
            })
            .collect()
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        self.lattice.get_or_init(|| FaceLattice::build(self))
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.face_lattice().f_vector()
    }

    /// Edges as vertex index pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.face_lattice()
            .faces
            .iter()
            .filter(|f| f.dim == 1)
            .map(|f| (f.vertices[0], f.vertices[1]))
            .collect()
    }

    /// Cuts the polytope by `normal . x = offset`. `below` is the part with
    /// `normal . x <= offset`.
    pub fn split_by_hyperplane(&self, normal: &[Rational], offset: &Rational) -> Result<Split> {
        if normal.len() != self.ambient_dim {
            return Err(Error::Dimension("hyperplane normal has wrong length".into()));
        }
        let cut = Halfspace::new(normal.to_vec(), offset.clone());
        let values: Vec<Rational> = self.vertices.iter().map(|v| cut.slack(v)).collect();
        let crossings = self.edge_crossings(&values);
        let side = |keep: fn(&Rational) -> bool, extra: Halfspace| -> Polytope {
            let mut pts: Vec<RatVector> = self
                .vertices
                .iter()
                .zip(&values)
                .filter(|(_, s)| keep(s))
                .map(|(v, _)| v.clone())
                .collect();
            pts.extend(crossings.iter().cloned());
            let mut cands = self.halfspaces.clone();
            cands.push(extra);
            Polytope::assemble(self.ambient_dim, pts, cands)
        };
        let below = side(|s| !s.is_positive(), cut.clone());
        let above = side(|s| !s.is_negative(), cut.flipped());
        let d = self.dim();
        let proper = below.dim() == d && above.dim() == d;
        Ok(Split { below, above, proper })
    }

    /// Intersection with the affine subspace `eqs`.
    pub fn intersect_with_affine(&self, eqs: &[Equation]) -> Result<Polytope> {
        let mut current = self.clone();
        for e in eqs {
            if e.normal.len() != self.ambient_dim {
                return Err(Error::Dimension("equation normal has wrong length".into()));
            }
            if current.is_empty() {
                break;
            }
            let values: Vec<Rational> = current.vertices.iter().map(|v| e.residual(v)).collect();
            let mut pts: Vec<RatVector> = current
                .vertices
                .iter()
                .zip(&values)
                .filter(|(_, s)| s.is_zero())
                .map(|(v, _)| v.clone())
                .collect();
            pts.extend(current.edge_crossings(&values));
            current = Polytope::assemble(self.ambient_dim, pts, current.halfspaces.clone());
        }
        Ok(current)
    }

    /// Intersection of two polytopes in the same space.
    pub fn intersection(&self, other: &Polytope) -> Result<Polytope> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::Dimension("polytopes live in different spaces".into()));
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Polytope::empty(self.ambient_dim));
        }
        let hs: Vec<Halfspace> = self.halfspaces.iter().chain(&other.halfspaces).cloned().collect();
        let eqs: Vec<Equation> = self.equations.iter().chain(&other.equations).cloned().collect();
        Polytope::from_halfspaces(&hs, &eqs, self.ambient_dim)
    }

    fn edge_crossings(&self, values: &[Rational]) -> Vec<RatVector> {
        let mut out = Vec::new();
        if self.dim() < 1 {
            return out;
        }
        for (a, b) in self.edges() {
            let (sa, sb) = (&values[a], &values[b]);
            if (sa.is_negative() && sb.is_positive()) || (sa.is_positive() && sb.is_negative()) {
                let t = sa / (sa - sb);
                let dir = vsub(&self.vertices[b], &self.vertices[a]);
                out.push(vadd(&self.vertices[a], &vscale(&dir, &t)));
            }
        }
        out
    }
}

/// Equations of the affine hull of a nonempty point set, in reduced echelon
/// form.
pub fn affine_hull(points: &[RatVector]) -> Vec<Equation> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let k = first.len();
    let rows: Vec<RatVector> = points
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(-Rational::one());
            r
        })
        .collect();
    let m = RatMatrix::from_rows(&rows, k + 1).expect("rectangular");
    linalg::right_kernel_basis(&m)
        .into_iter()
        .map(|mut v| {
            let offset = v.pop().expect("nonempty");
            Equation::new(v, offset)
        })
        .collect()
}

fn basis_combination(basis: &[RatVector], coeffs: &[Rational], ambient: usize) -> RatVector {
    let mut x = vec![Rational::zero(); ambient];
    for (c, k) in coeffs.iter().zip(basis) {
        x = vadd(&x, &vscale(k, c));
    }
    x
}

/// Solves every `m`-subset of `g y <= h` as equalities and keeps the feasible
/// unique solutions.
fn enumerate_vertices(g: &[RatVector], h: &[Rational], m: usize) -> Vec<RatVector> {
    let mut found: BTreeSet<RatVector> = BTreeSet::new();
    for_each_combination(g.len(), m, |subset| {
        let rows: Vec<RatVector> = subset.iter().map(|&i| g[i].clone()).collect();
        let rhs: Vec<Rational> = subset.iter().map(|&i| h[i].clone()).collect();
        let mat = RatMatrix::from_rows(&rows, m).expect("rectangular");
        if let Ok(Solution::Unique(y)) = linalg::solve(&mat, &rhs) {
            if !found.contains(&y)
                && g.iter().zip(h).all(|(gi, hi)| dot(gi, &y) <= *hi)
            {
                found.insert(y);
            }
        }
        true
    });
    found.into_iter().collect()
}

/// An extreme ray of the pointed cone `{y : g y <= 0}`, if the cone is not
/// just the origin.
fn recession_ray(g: &[RatVector], m: usize) -> Option<RatVector> {
    let mut ray = None;
    for_each_combination(g.len(), m - 1, |subset| {
        let dir = if subset.is_empty() {
            vec![Rational::one()]
        } else {
            let rows: Vec<RatVector> = subset.iter().map(|&i| g[i].clone()).collect();
            let mat = RatMatrix::from_rows(&rows, m).expect("rectangular");
            let k = linalg::right_kernel_basis(&mat);
            if k.len() != 1 {
                return true;
            }
            k.into_iter().next().expect("one vector")
        };
        for cand in [dir.clone(), dir.iter().map(|v| -v).collect::<RatVector>()] {
            if g.iter().all(|gi| !dot(gi, &cand).is_positive()) {
                ray = Some(cand);
                return false;
            }
        }
        true
    });
    ray
}

/// Facet-defining inequalities of `conv(pts)` by subset enumeration in a
/// coordinate projection on which the affine hull projects injectively.
fn brute_force_facets(pts: &[RatVector]) -> Vec<Halfspace> {
    let ambient = pts[0].len();
    let m = affine_dim(pts);
    if m <= 0 {
        return Vec::new();
    }
    let m = m as usize;
    let diffs: Vec<RatVector> = pts[1..].iter().map(|p| vsub(p, &pts[0])).collect();
    let (_, coords) = linalg::rref(&RatMatrix::from_rows(&diffs, ambient).expect("rectangular"));
    let proj: Vec<RatVector> = pts
        .iter()
        .map(|p| coords.iter().map(|&c| p[c].clone()).collect())
        .collect();

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for_each_combination(pts.len(), m, |subset| {
        let rows: Vec<RatVector> = subset
            .iter()
            .map(|&i| {
                let mut r = proj[i].clone();
                r.push(-Rational::one());
                r
            })
            .collect();
        let mat = RatMatrix::from_rows(&rows, m + 1).expect("rectangular");
        let kernel = linalg::right_kernel_basis(&mat);
        if kernel.len() != 1 {
            return true;
        }
        let mut a = kernel.into_iter().next().expect("one vector");
        let beta = a.pop().expect("nonempty");
        if a.iter().all(Zero::is_zero) {
            return true;
        }
        let slacks: Vec<Rational> = proj.iter().map(|y| dot(&a, y) - &beta).collect();
        let (normal, offset) = if slacks.iter().all(|s| !s.is_positive()) {
            (a, beta)
        } else if slacks.iter().all(|s| !s.is_negative()) {
            (a.iter().map(|v| -v).collect(), -beta)
        } else {
            return true;
        };
        let tight: Vec<usize> = (0..pts.len()).filter(|&i| slacks[i].is_zero()).collect();
        if seen.insert(tight) {
            let mut full = vec![Rational::zero(); ambient];
            for (c, v) in coords.iter().zip(normal) {
                full[*c] = v;
            }
            out.push(Halfspace::new(full, offset));
        }
        true
    });
    out
}

/// Points that are the only member of the intersection of the facets
/// containing them.
fn extreme_points(pts: &[RatVector], facets: &[Halfspace]) -> Vec<RatVector> {
    if pts.len() == 1 {
        return pts.to_vec();
    }
    let tight: Vec<Vec<bool>> = facets
        .iter()
        .map(|h| pts.iter().map(|p| h.slack(p).is_zero()).collect())
        .collect();
    (0..pts.len())
        .filter(|&i| {
            let containing: Vec<&Vec<bool>> = tight.iter().filter(|t| t[i]).collect();
            if containing.is_empty() {
                return false;
            }
            (0..pts.len()).filter(|&j| containing.iter().all(|t| t[j])).count() == 1
        })
        .map(|i| pts[i].clone())
        .collect()
}
