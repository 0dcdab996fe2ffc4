mod common;

use logvor::gale::verify_type_theorem;
use logvor::io::{model_to_json, parse_model, parse_polytope, polytope_to_json, to_pretty};
use logvor::linalg::{left_kernel_basis, rat, to_f64, vec_to_f64, RatMatrix, RatVector, Rational};
use logvor::logvor::{cell_interior, in_cell, positive_cocircuits, vertex_functions};
use logvor::model::LinearModel;
use logvor::oracle::{mle_full, MleOptions};
use logvor::polytope::DEFAULT_NODE_CAP;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Integer matrix with columns summing to zero, as rows of length `d`.
fn b_entries() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (3usize..=6, 1usize..=2).prop_flat_map(|(n, d)| (Just(n), Just(d), prop::collection::vec(-4i64..=4, (n - 1) * d)))
}

fn build(n: usize, d: usize, free: &[i64]) -> RatMatrix {
    let mut rows: Vec<Vec<i64>> = free.chunks(d).map(<[i64]>::to_vec).collect();
    let last: Vec<i64> = (0..d).map(|j| -rows.iter().map(|r| r[j]).sum::<i64>()).collect();
    rows.push(last);
    assert_eq!(rows.len(), n);
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    RatMatrix::from_i64(&refs)
}

fn model_strategy() -> impl Strategy<Value = LinearModel> {
    (b_entries(), prop::collection::vec(1i64..=5, 6)).prop_filter_map("rank-deficient B", |((n, d, free), w)| {
        let total: i64 = w[..n].iter().sum();
        let c: RatVector = w[..n].iter().map(|&x| rat(x, total)).collect();
        LinearModel::validated("prop", build(n, d, &free), c).ok()
    })
}

/// All positive co-circuits by brute force over every subset of rows: a
/// support `S` qualifies when the rows in `S` have a one-dimensional left
/// kernel whose generator is nonzero on all of `S` with a single sign.
fn brute_force_cocircuits(b: &RatMatrix) -> Vec<(Vec<usize>, RatVector)> {
    let n = b.nrows();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let ker = left_kernel_basis(&b.select_rows(&s));
        if ker.len() != 1 {
            continue;
        }
        let g = &ker[0];
        let pos = g.iter().all(|v| v.is_positive());
        let neg = g.iter().all(|v| v.is_negative());
        if !(pos || neg) {
            continue;
        }
        let mut z = vec![Rational::zero(); n];
        for (k, &i) in s.iter().enumerate() {
            z[i] = g[k].abs();
        }
        out.push((s, z));
    }
    out
}

fn scale_to_first(v: &RatVector) -> RatVector {
    let first = v.iter().find(|x| !x.is_zero()).unwrap().clone();
    v.iter().map(|x| x / &first).collect()
}

fn interior_point(m: &LinearModel, seed: u64) -> RatVector {
    common::random_interior_parameter(&mut ChaCha8Rng::seed_from_u64(seed), m)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn cocircuits_match_brute_force(m in model_strategy()) {
        let mut got: Vec<(Vec<usize>, RatVector)> = positive_cocircuits(m.b())
            .into_iter()
            .map(|z| (z.support.clone(), scale_to_first(&z.coeffs)))
            .collect();
        let mut want: Vec<(Vec<usize>, RatVector)> = brute_force_cocircuits(m.b())
            .into_iter()
            .map(|(s, z)| (s, scale_to_first(&z)))
            .collect();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn cocircuit_supports_form_an_antichain(m in model_strategy()) {
        let cs = positive_cocircuits(m.b());
        for a in &cs {
            for b in &cs {
                if a.support != b.support {
                    prop_assert!(!a.support.iter().all(|i| b.support.contains(i)));
                }
            }
        }
    }

    #[test]
    fn vertex_functions_are_cell_points(m in model_strategy(), seed in 0u64..1000) {
        let x = interior_point(&m, seed);
        let p = m.point(&x);
        for f in vertex_functions(&m) {
            let v = f.eval(&x);
            prop_assert!(v.iter().fold(Rational::zero(), |a, b| a + b).is_one());
            prop_assert!(in_cell(&m, &p, &v));
        }
    }

    #[test]
    fn euler_relation_holds_for_cells(m in model_strategy(), seed in 0u64..1000) {
        let cell = cell_interior(&m, &interior_point(&m, seed)).unwrap();
        let k = cell.dim() as i64;
        let alt: i64 = cell.f_vector().iter().enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum();
        prop_assert_eq!(alt, 1 - (-1i64).pow(k as u32));
    }

    #[test]
    fn cell_points_map_back_to_their_point(m in model_strategy(), seed in 0u64..1000) {
        let x = interior_point(&m, seed);
        let p = vec_to_f64(&m.point(&x));
        let cell = cell_interior(&m, &x).unwrap();
        // Midpoints between p and each vertex are positive, so the MLE is
        // unique there. Vertices themselves can carry zeros that make it
        // ambiguous.
        let exact = m.point(&x);
        let mids: Vec<RatVector> = cell
            .vertices()
            .iter()
            .map(|v| v.iter().zip(&exact).map(|(a, b)| (a + b) / rat(2, 1)).collect())
            .chain(std::iter::once(exact.clone()))
            .collect();
        for u in &mids {
            let r = mle_full(&m, &vec_to_f64(u), MleOptions::default()).unwrap();
            prop_assert!(r.converged);
            for (a, b) in r.p_hat.iter().zip(&p) {
                prop_assert!((a - b).abs() < 1e-7, "{:?} vs {:?}", r.p_hat, p);
            }
            for (a, b) in r.x_hat.iter().zip(&x) {
                prop_assert!((a - to_f64(b)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn cells_at_distinct_points_meet_only_on_the_boundary(m in model_strategy(), s1 in 0u64..1000, s2 in 1000u64..2000) {
        let x1 = interior_point(&m, s1);
        let x2 = interior_point(&m, s2);
        prop_assume!(x1 != x2);
        let a = cell_interior(&m, &x1).unwrap();
        let b = cell_interior(&m, &x2).unwrap();
        // Data on the boundary of the simplex can have several maximizers,
        // so closed cells may meet there but never inside.
        let both = a.intersection(&b).unwrap();
        let n = m.n();
        prop_assert!(both.is_empty() || (0..n).any(|i| both.vertices().iter().all(|v| v[i].is_zero())));
        prop_assert!(both.dim() < (n - 1 - m.d()) as isize);
    }

    #[test]
    fn model_json_round_trips(m in model_strategy()) {
        let text = to_pretty(&model_to_json(&m, None));
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(back.model.b(), m.b());
        prop_assert_eq!(back.model.c(), m.c());
        prop_assert!(back.theta.is_none());
    }

    #[test]
    fn polytope_json_round_trips(m in model_strategy(), seed in 0u64..1000) {
        let cell = cell_interior(&m, &interior_point(&m, seed)).unwrap();
        let back = parse_polytope(&to_pretty(&polytope_to_json(&cell))).unwrap();
        prop_assert_eq!(back.vertices(), cell.vertices());
        prop_assert_eq!(back.f_vector(), cell.f_vector());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn type_theorem_on_random_models(m in model_strategy(), seed in 0u64..1000) {
        let t = verify_type_theorem(&m, &interior_point(&m, seed), DEFAULT_NODE_CAP).unwrap();
        prop_assert!(t.holds(), "{:?} vs {:?}", t.cell_f_vector, t.slice_f_vector);
    }
}
