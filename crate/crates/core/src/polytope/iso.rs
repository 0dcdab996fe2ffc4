//! Combinatorial isomorphism through vertex-facet incidences.

use std::collections::HashSet;

use super::Polytope;

pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    /// `witness[i]` is the vertex of the second polytope matched to vertex
    /// `i` of the first.
    Isomorphic { witness: Vec<usize> },
    NotIsomorphic,
    /// The search hit the node cap before deciding.
    Inconclusive { nodes: u64 },
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic { .. })
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match self {
            IsoVerdict::Isomorphic { witness } => Some(witness),
            _ => None,
        }
    }
}

struct Incidence {
    facets: Vec<Vec<usize>>,
    degree: Vec<usize>,
    /// Number of facets shared by each vertex pair.
    common: Vec<Vec<usize>>,
}

impl Incidence {
    fn new(p: &Polytope) -> Self {
        let n = p.vertices().len();
        let facets = p.facet_vertex_sets();
        let mut member = vec![vec![false; facets.len()]; n];
        for (f, vs) in facets.iter().enumerate() {
            for &v in vs {
                member[v][f] = true;
            }
        }
        let degree = member.iter().map(|m| m.iter().filter(|&&b| b).count()).collect();
        let common = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..facets.len()).filter(|&f| member[a][f] && member[b][f]).count())
                    .collect()
            })
            .collect();
        Incidence { facets, degree, common }
    }
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut s = v.to_vec();
    s.sort();
    s
}

/// Decides whether two polytopes have isomorphic vertex-facet incidence
/// structures. Backtracks over vertex assignments, pruning on vertex degree
/// and on the number of shared facets for every already-matched pair.
pub fn combinatorial_isomorphism(p: &Polytope, q: &Polytope, node_cap: u64) -> IsoVerdict {
    if p.dim() != q.dim() || p.vertices().len() != q.vertices().len() {
        return IsoVerdict::NotIsomorphic;
    }
    if p.is_empty() {
        return IsoVerdict::Isomorphic { witness: Vec::new() };
    }
    let a = Incidence::new(p);
    let b = Incidence::new(q);
    if a.facets.len() != b.facets.len()
        || sorted(&a.degree) != sorted(&b.degree)
        || sorted(&a.facets.iter().map(Vec::len).collect::<Vec<_>>())
            != sorted(&b.facets.iter().map(Vec::len).collect::<Vec<_>>())
    {
        return IsoVerdict::NotIsomorphic;
    }
    let target: HashSet<Vec<usize>> = b.facets.iter().cloned().collect();

    // Most constrained vertices first.
    let n = a.degree.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.degree[y].cmp(&a.degree[x]).then(x.cmp(&y)));

    let mut search = Search {
        a: &a,
        b: &b,
        order,
        target,
        assign: vec![usize::MAX; n],
        used: vec![false; n],
        nodes: 0,
        cap: node_cap,
    };
    match search.run(0) {
        Some(true) => IsoVerdict::Isomorphic { witness: search.assign },
        Some(false) => IsoVerdict::NotIsomorphic,
        None => IsoVerdict::Inconclusive { nodes: search.nodes },
    }
}

struct Search<'a> {
    a: &'a Incidence,
    b: &'a Incidence,
    order: Vec<usize>,
    target: HashSet<Vec<usize>>,
    assign: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    /// `None` when the node cap is exceeded.
    fn run(&mut self, depth: usize) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return None;
        }
        if depth == self.order.len() {
            return Some(self.facets_match());
        }
        let v = self.order[depth];
        for w in 0..self.assign.len() {
            if self.used[w] || self.a.degree[v] != self.b.degree[w] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&u| self.a.common[u][v] == self.b.common[self.assign[u]][w]);
            if !consistent {
                continue;
            }
            self.assign[v] = w;
            self.used[w] = true;
            match self.run(depth + 1) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.used[w] = false;
            self.assign[v] = usize::MAX;
        }
        Some(false)
    }

    fn facets_match(&self) -> bool {
        self.a.facets.iter().all(|f| {
            let mut image: Vec<usize> = f.iter().map(|&v| self.assign[v]).collect();
            image.sort();
            self.target.contains(&image)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ivec;

    fn square() -> Polytope {
        Polytope::from_vertices(&[ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1])]).unwrap()
    }

    #[test]
    fn self_isomorphic_with_identity_available() {
        let sq = square();
        let v = combinatorial_isomorphism(&sq, &sq, DEFAULT_NODE_CAP);
        assert!(v.is_isomorphic());
        assert_eq!(v.witness().unwrap().len(), 4);
    }

    #[test]
    fn square_is_not_a_triangle() {
        let tri = Polytope::from_vertices(&[ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1])]).unwrap();
        assert_eq!(combinatorial_isomorphism(&square(), &tri, DEFAULT_NODE_CAP), IsoVerdict::NotIsomorphic);
    }

    #[test]
    fn square_pyramid_vs_bipyramid_like_shapes() {
        // Square pyramid (5 vertices, 5 facets) vs triangular bipyramid
        // (5 vertices, 6 facets).
        let pyr = Polytope::from_vertices(&[
            ivec(&[0, 0, 0]),
            ivec(&[2, 0, 0]),
            ivec(&[0, 2, 0]),
            ivec(&[2, 2, 0]),
            ivec(&[1, 1, 1]),
        ])
        .unwrap();
        let bip = Polytope::from_vertices(&[
            ivec(&[0, 0, 0]),
            ivec(&[3, 0, 0]),
            ivec(&[0, 3, 0]),
            ivec(&[1, 1, 2]),
            ivec(&[1, 1, -2]),
        ])
        .unwrap();
        assert_eq!(pyr.f_vector(), vec![5, 8, 5]);
        assert_eq!(bip.f_vector(), vec![5, 9, 6]);
        assert!(!combinatorial_isomorphism(&pyr, &bip, DEFAULT_NODE_CAP).is_isomorphic());
    }

    #[test]
    fn node_cap_gives_inconclusive() {
        let sq = square();
        assert!(matches!(
            combinatorial_isomorphism(&sq, &sq, 1),
            IsoVerdict::Inconclusive { .. }
        ));
    }
}
