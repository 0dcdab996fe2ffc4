#![allow(dead_code)]

use logvor::linalg::{int, rat, RatMatrix, RatVector, Rational};
use logvor::logvor::RealizationData;
use logvor::model::LinearModel;
use logvor::polytope::Polytope;
use rand::Rng;

/// Random validated model: integer `B` with entries in `[-4, 4]`, last row
/// fixed so columns sum to zero, uniform `c`. Retries until `B` has full
/// column rank.
pub fn random_model<R: Rng>(rng: &mut R, n: usize, d: usize) -> LinearModel {
    loop {
        let mut rows: Vec<Vec<i64>> = (0..n - 1).map(|_| (0..d).map(|_| rng.random_range(-4..=4)).collect()).collect();
        let last: Vec<i64> = (0..d).map(|j| -rows.iter().map(|r| r[j]).sum::<i64>()).collect();
        rows.push(last);
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let b = RatMatrix::from_i64(&refs);
        if let Ok(m) = LinearModel::validated(format!("random-{}x{}", n, d), b, vec![rat(1, n as i64); n]) {
            return m;
        }
    }
}

/// Random polytope `{Mx = b, sum x = 1, x >= 0}` of dimension at least 2,
/// with a strictly positive point so that it is not empty.
pub fn random_realization<R: Rng>(rng: &mut R, n: usize) -> RealizationData {
    loop {
        let k = rng.random_range(1..=n - 3);
        let weights: Vec<i64> = (0..n).map(|_| rng.random_range(1..=9)).collect();
        let total: i64 = weights.iter().sum();
        let x0: RatVector = weights.iter().map(|&w| rat(w, total)).collect();
        let rows: Vec<RatVector> = (0..k).map(|_| (0..n).map(|_| int(rng.random_range(-3..=3))).collect()).collect();
        let m = RatMatrix::from_rows(&rows, n).unwrap();
        let b: RatVector = m.mul_vec(&x0);
        let mut with_ones = rows.clone();
        with_ones.push(vec![int(1); n]);
        if logvor::linalg::rank_of_rows(&with_ones) != k + 1 {
            continue;
        }
        if let Ok(data) = RealizationData::new(m, b) {
            return data;
        }
    }
}

/// Random relative-interior point of a polytope: a strictly positive
/// integer-weighted combination of its vertices.
pub fn random_interior_point<R: Rng>(rng: &mut R, p: &Polytope) -> RatVector {
    let weights: Vec<i64> = p.vertices().iter().map(|_| rng.random_range(1..=100)).collect();
    let total: i64 = weights.iter().sum();
    let mut x = vec![Rational::from_integer(0.into()); p.ambient_dim()];
    for (w, v) in weights.iter().zip(p.vertices()) {
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += vi * rat(*w, total);
        }
    }
    x
}

pub fn random_interior_parameter<R: Rng>(rng: &mut R, m: &LinearModel) -> RatVector {
    random_interior_point(rng, &m.parameter_polytope().unwrap())
}
