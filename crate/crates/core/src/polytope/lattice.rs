use std::collections::{BTreeSet, VecDeque};

use crate::linalg::{affine_dim, RatVector};

use super::Polytope;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// `-1` for the empty face.
    pub dim: isize,
    /// Sorted vertex indices into the owning polytope.
    pub vertices: Vec<usize>,
}

/// Face lattice built by closing the facet vertex sets under intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceLattice {
    /// Sorted by dimension, then by vertex set.
    pub faces: Vec<Face>,
    /// Cover relations `(lower, upper)` between faces whose dimensions differ
    /// by one.
    pub covers: Vec<(usize, usize)>,
}

impl FaceLattice {
    pub(crate) fn build(p: &Polytope) -> Self {
        if p.is_empty() {
            return FaceLattice {
                faces: vec![Face { dim: -1, vertices: Vec::new() }],
                covers: Vec::new(),
            };
        }
        let n = p.vertices().len();
        let facets = p.facet_vertex_sets();
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        sets.insert((0..n).collect());
        sets.insert(Vec::new());
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        for f in &facets {
            if sets.insert(f.clone()) {
                queue.push_back(f.clone());
            }
        }
        while let Some(face) = queue.pop_front() {
            for f in &facets {
                let meet: Vec<usize> = face.iter().copied().filter(|v| f.binary_search(v).is_ok()).collect();
                if sets.insert(meet.clone()) {
                    queue.push_back(meet);
                }
            }
        }
        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|vs| {
                let pts: Vec<RatVector> = vs.iter().map(|&i| p.vertices()[i].clone()).collect();
                Face { dim: affine_dim(&pts), vertices: vs }
            })
            .collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));

        let mut covers = Vec::new();
        for (i, lo) in faces.iter().enumerate() {
            for (j, hi) in faces.iter().enumerate() {
                if hi.dim == lo.dim + 1 && lo.vertices.iter().all(|v| hi.vertices.binary_search(v).is_ok()) {
                    covers.push((i, j));
                }
            }
        }
        FaceLattice { faces, covers }
    }

    pub fn dim(&self) -> isize {
        self.faces.last().map_or(-1, |f| f.dim)
    }

    /// Face counts in dimensions `0..dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let d = self.dim();
        (0..d.max(0))
            .map(|k| self.faces.iter().filter(|f| f.dim == k).count())
            .collect()
    }

    pub fn faces_of_dim(&self, k: isize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == k)
    }
}
