//! Acceptance criteria. Prints one line per criterion and exits non-zero if a
//! gating criterion fails.

mod common;

use std::time::{Duration, Instant};

use logvor::catalog;
use logvor::gale::{dual_slice, gale_pair, verify_type_theorem};
use logvor::linalg::{int, rat, RatVector, Rational};
use logvor::logvor::{
    cell_boundary, cell_endpoints_d1, cell_interior, positive_cocircuits, predicted_zeros, realize,
    vertex_functions, Cocircuit,
};
use logvor::model::LinearModel;
use logvor::oracle::{self, mle_partial, sample_polytope, sample_rng, MleOptions, Target};
use logvor::partial::{cell_partial_face_conjecture, cell_partial_facet, cell_partial_interior};
use logvor::polytope::{combinatorial_isomorphism, Polytope, DEFAULT_NODE_CAP};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Id, runtime budget, whether it gates the run, and the check.
type Criterion = (u32, Duration, bool, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn full_models() -> Vec<LinearModel> {
    catalog::names()
        .map(|n| catalog::model_file(n).unwrap())
        .filter(|f| f.theta.is_none())
        .map(|f| f.model)
        .collect()
}

fn names(d: usize) -> Vec<String> {
    logvor::plot::parameter_names(d)
}

fn criterion_1() -> Outcome {
    let m = catalog::triangle();
    let cs = positive_cocircuits(m.b());
    check(cs.len() == 3, || format!("{} co-circuits", cs.len()))?;
    let cell = cell_interior(&m, &[int(0)]).map_err(|e| e.to_string())?;
    let mut want = vec![
        vec![rat(5, 6), rat(1, 6), int(0), int(0)],
        vec![int(0), rat(2, 7), rat(5, 7), int(0)],
        vec![int(0), rat(2, 7), int(0), rat(5, 7)],
    ];
    want.sort();
    check(cell.vertices() == want.as_slice(), || format!("cell vertices {:?}", cell.vertices()))?;
    let fs = vertex_functions(&m);
    let displayed = |x: &Rational| -> Vec<RatVector> {
        let s7 = |v: [Rational; 4]| v.into_iter().map(|a| a / int(7)).collect::<RatVector>();
        let s6 = |v: [Rational; 4]| v.into_iter().map(|a| a / int(6)).collect::<RatVector>();
        let mut out = vec![
            s7([int(0), int(40) * x + int(2), int(0), int(-40) * x + int(5)]),
            s7([int(0), int(40) * x + int(2), int(-40) * x + int(5), int(0)]),
            s6([int(-20) * x + int(5), int(20) * x + int(1), int(0), int(0)]),
        ];
        out.sort();
        out
    };
    let mut samples = 0;
    for k in 1..40 {
        // x = -1/20 + k (7/40) / 40 runs over the open interval.
        let x = rat(-1, 20) + rat(7 * k, 1600);
        let mut got: Vec<RatVector> = fs.iter().map(|f| f.eval(std::slice::from_ref(&x))).collect();
        got.sort();
        check(got == displayed(&x), || format!("vertex functions differ at x = {}", x))?;
        samples += 1;
    }
    Ok(format!("3 co-circuits, exact cell at x=0, formulas agree at {} rational x", samples))
}

fn criterion_2() -> Outcome {
    let m = catalog::quadrilateral();
    let cell = cell_interior(&m, &[int(0)]).map_err(|e| e.to_string())?;
    check(cell.f_vector() == vec![4, 4], || format!("cell f-vector {:?}", cell.f_vector()))?;
    let g = gale_pair(m.b()).map_err(|e| e.to_string())?;
    let slice = dual_slice(&g.a).map_err(|e| e.to_string())?;
    let square =
        Polytope::from_vertices(&[vec![int(0), int(0)], vec![int(1), int(0)], vec![int(1), int(1)], vec![int(0), int(1)]])
            .unwrap();
    let iso = combinatorial_isomorphism(&slice, &square, DEFAULT_NODE_CAP);
    check(iso.is_isomorphic(), || format!("dual slice f-vector {:?} is not a quadrilateral", slice.f_vector()))?;
    Ok("cell (4,4), dual slice is a quadrilateral".into())
}

const CUBE_FORMULAS: [[&str; 6]; 8] = [
    ["0", "0", "16x - 4y + 2/3", "-8x + 4/3y + 1/9", "-8x + 8/3y + 2/9", "0"],
    ["0", "0", "84/5x - 21/5y + 7/10", "-72/5x + 12/5y + 1/5", "0", "-12/5x + 9/5y + 1/10"],
    ["0", "4/3x - 4/3y + 2/9", "32/3x - 8/3y + 4/9", "0", "-12x + 4y + 1/3", "0"],
    ["0", "4x - 4y + 2/3", "2x - 1/2y + 1/12", "0", "0", "-6x + 9/2y + 1/4"],
    ["40/17x - 12/17y + 1/51", "72/17x - 72/17y + 12/17", "0", "0", "0", "-112/17x + 84/17y + 14/51"],
    ["30x - 9y + 1/4", "0", "0", "-6x + y + 1/12", "-24x + 8y + 2/3", "0"],
    ["240/11x - 72/11y + 2/11", "12/11x - 12/11y + 2/11", "0", "0", "-252/11x + 84/11y + 7/11", "0"],
    ["35x - 21/2y + 7/24", "0", "0", "-27x + 9/2y + 3/8", "0", "-8x + 6y + 1/3"],
];

fn criterion_3() -> Outcome {
    let m = catalog::cube_model_1();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let x = common::random_interior_parameter(&mut rng, &m);
        let cell = cell_interior(&m, &x).map_err(|e| e.to_string())?;
        check(cell.f_vector() == vec![8, 12, 6], || format!("f-vector {:?} at {:?}", cell.f_vector(), x))?;
    }
    let mut listed: Vec<Vec<String>> = vertex_functions(&m).iter().map(|f| f.describe(&names(2))).collect();
    let mut want: Vec<Vec<String>> =
        CUBE_FORMULAS.iter().map(|r| r.iter().map(|s| s.replace(' ', "")).collect()).collect();
    listed.sort();
    want.sort();
    check(listed == want, || format!("vertex formulas {:?}", listed))?;
    let theta = m.parameter_polytope().map_err(|e| e.to_string())?;
    check(theta.vertices().len() == 3, || "parameter polytope is not a triangle".into())?;
    for v in theta.vertices() {
        let cell = cell_boundary(&m, v).map_err(|e| e.to_string())?;
        check(cell.f_vector() == vec![8, 12, 6], || format!("boundary f-vector {:?} at {:?}", cell.f_vector(), v))?;
    }
    let t = m.is_transversal().map_err(|e| e.to_string())?;
    check(t.transversal, || "not transversal".into())?;
    Ok("5 interior cubes, 8 formulas, 3 boundary cubes, transversal".into())
}

fn criterion_4() -> Outcome {
    let m = catalog::cube_model_2();
    let offender = vec![rat(-5, 324), rat(1, 81)];
    let t = m.is_transversal().map_err(|e| e.to_string())?;
    check(!t.transversal, || "reported transversal".into())?;
    check(t.offenders.iter().any(|o| o.x == offender), || "(-5/324, 1/81) not among offenders".into())?;
    let cell = cell_boundary(&m, &offender).map_err(|e| e.to_string())?;
    check(cell.dim() == 2 && cell.vertices().len() == 4, || format!("cell f-vector {:?}", cell.f_vector()))?;
    Ok(format!("not transversal ({} offenders), quadrilateral at (-5/324, 1/81)", t.offenders.len()))
}

fn criterion_5() -> Outcome {
    let mut models = full_models();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    use rand::Rng;
    for _ in 0..20 {
        let d = rng.random_range(1..=3);
        let n = rng.random_range(d + 2..=8);
        models.push(common::random_model(&mut rng, n, d));
    }
    for m in &models {
        let x0 = m.parameter_polytope().unwrap().centroid().unwrap();
        let t = verify_type_theorem(m, &x0, DEFAULT_NODE_CAP).map_err(|e| format!("{}: {}", m.name, e))?;
        check(t.holds(), || format!("{}: cell {:?} vs slice {:?}", m.name, t.cell_f_vector, t.slice_f_vector))?;
    }
    for m in full_models() {
        let cells: Vec<Polytope> = (0..5)
            .map(|_| cell_interior(&m, &common::random_interior_parameter(&mut rng, &m)).unwrap())
            .collect();
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                let iso = combinatorial_isomorphism(&cells[i], &cells[j], DEFAULT_NODE_CAP);
                check(iso.is_isomorphic(), || format!("{}: cells {} and {} differ", m.name, i, j))?;
            }
        }
    }
    Ok(format!("{} models agree with their dual slice, interior cells pairwise isomorphic", models.len()))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut models = 0;
    for name in catalog::names() {
        let m = catalog::model_file(name).unwrap().model;
        if !m.is_transversal().map_err(|e| e.to_string())?.transversal {
            continue;
        }
        models += 1;
        let fs = vertex_functions(&m);
        for v in m.model_vertices().map_err(|e| e.to_string())? {
            for f in &fs {
                let z: &Cocircuit = &f.z;
                let got = predicted_zeros(&m, &v, z).map_err(|e| format!("{}: {}", name, e))?;
                let value = f.eval(&v.x);
                let want: Vec<usize> = (0..m.n()).filter(|&i| value[i].is_zero()).collect();
                check(got == want, || format!("{} at {:?}: predicted {:?}, actual {:?}", name, v.x, got, want))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{} vertex/co-circuit pairs over {} transversal models", checked, models))
}

fn criterion_7() -> Outcome {
    for m in [catalog::d1_triangles(), catalog::d1_quads()] {
        let e = cell_endpoints_d1(&m).map_err(|e| e.to_string())?;
        let left = cell_boundary(&m, std::slice::from_ref(&e.left_x)).map_err(|e| e.to_string())?;
        let right = cell_boundary(&m, std::slice::from_ref(&e.right_x)).map_err(|e| e.to_string())?;
        check(e.left == left, || format!("{}: left endpoint differs", m.name))?;
        check(e.right == right, || format!("{}: right endpoint differs", m.name))?;
    }
    Ok("closed form matches both endpoints of both models".into())
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    use rand::Rng;
    let mut dims = Vec::new();
    for _ in 0..10 {
        let n = rng.random_range(4..=8);
        let data = common::random_realization(&mut rng, n);
        let input = data.polytope().map_err(|e| e.to_string())?;
        let m = realize(&data).map_err(|e| e.to_string())?;
        check(m.validate().is_empty(), || "realized model is invalid".into())?;
        let cell = cell_interior(&m, &vec![int(0); m.d()]).map_err(|e| e.to_string())?;
        let iso = combinatorial_isomorphism(&cell, &input, DEFAULT_NODE_CAP);
        check(iso.is_isomorphic(), || format!("f-vectors {:?} vs {:?}", cell.f_vector(), input.f_vector()))?;
        dims.push(input.dim());
    }
    Ok(format!("10 polytopes of dimensions {:?} realized", dims))
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    for m in full_models() {
        let start = Instant::now();
        let r = oracle::tessellation_check(Target::Full(&m), 1000, 42, 1e-7).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        check(r.passed == 1000 && r.non_converged == 0, || {
            format!("{}: {} passed, {} non-converged, worst residual {:e}", m.name, r.passed, r.non_converged, r.worst_residual)
        })?;
        check(took < Duration::from_secs(30), || format!("{} took {:.1?}", m.name, took))?;
        parts.push(format!("{} {:.1?}", m.name, took));
    }
    Ok(format!("1000/1000 per model ({})", parts.join(", ")))
}

fn criterion_10() -> Outcome {
    let pm = catalog::partial_example();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..5 {
        let x = common::random_interior_point(&mut rng, &pm.theta);
        let a = cell_partial_interior(&pm, &x).map_err(|e| e.to_string())?;
        let b = cell_interior(&pm.extension, &x).map_err(|e| e.to_string())?;
        check(a == b, || format!("interior cell differs at {:?}", x))?;
    }
    let target = vec![rat(1, 5), rat(1, 5), rat(3, 10), rat(3, 10)];
    let (facet, mid) = (0..pm.theta.halfspaces().len())
        .filter(|&f| !pm.facet_on_simplex_boundary(f))
        .map(|f| (f, logvor::linalg::centroid(&pm.facet_vertices(f).unwrap())))
        .find(|(_, mid)| pm.extension.point(mid) == target)
        .ok_or("no facet with midpoint (1/5,1/5,3/10,3/10)")?;
    let r = cell_partial_facet(&pm, facet, &mid).map_err(|e| e.to_string())?;
    check(r.q.dim() == 2, || format!("Q has dim {}", r.q.dim()))?;
    check(r.m_cell.vertices().iter().all(|v| r.q.contains(v)), || "model cell not inside Q".into())?;
    let p: Vec<f64> = logvor::linalg::vec_to_f64(&r.p);
    let hits = |u: &[f64]| -> Result<bool, String> {
        let e = mle_partial(&pm, u, MleOptions::default()).map_err(|e| e.to_string())?;
        Ok(e.p_hat.iter().zip(&p).all(|(a, b)| (a - b).abs() < 1e-6))
    };
    for i in 0..100 {
        let u = sample_polytope(&r.q, &mut sample_rng(10, i));
        check(hits(&u)?, || format!("sample {} of Q does not map to p", i))?;
    }
    let mut outside = 0;
    let mut i = 1000;
    while outside < 100 {
        let u = sample_polytope(&r.q_bar, &mut sample_rng(10, i));
        i += 1;
        if oracle::membership(&r.q, &u, 1e-9) {
            continue;
        }
        check(!hits(&u)?, || format!("sample {} of Q-bar minus Q maps to p", i))?;
        outside += 1;
    }
    Ok("interior cells exact, Q of dim 2 contains the model cell, 100/100 in Q hit p, 100/100 outside miss".into())
}

fn criterion_11() -> Outcome {
    let pm = catalog::partial_example();
    let mut parts = Vec::new();
    let mut ok = true;
    for v in [vec![int(0), int(0)], vec![rat(-1, 10), rat(-1, 20)]] {
        let c = cell_partial_face_conjecture(&pm, &v).map_err(|e| e.to_string())?;
        let a = oracle::conjecture_agreement(&pm, &c, 200, 11, 1e-6).map_err(|e| e.to_string())?;
        let p: Vec<String> = c.p.iter().map(logvor::linalg::format_rational).collect();
        ok &= c.candidate.dim() == 3 && a.agreement_rate >= 0.95;
        parts.push(format!("p=({}) dim {} agreement {:.3}", p.join(","), c.candidate.dim(), a.agreement_rate));
    }
    let s = parts.join("; ");
    if ok {
        Ok(s)
    } else {
        Err(s)
    }
}

fn criterion_12() -> Option<Outcome> {
    let path = std::env::var_os("LOGVOR_M06_FIXTURE")?;
    Some((|| {
        let m = logvor::io::read_model(std::path::Path::new(&path)).map_err(|e| e.to_string())?.model;
        m.ensure_valid().map_err(|e| e.to_string())?;
        let x = m.parameter_polytope().map_err(|e| e.to_string())?.centroid().unwrap();
        let cell = cell_interior(&m, &x).map_err(|e| e.to_string())?;
        check(cell.f_vector() == vec![7, 19, 26, 19, 7], || format!("f-vector {:?}", cell.f_vector()))?;
        let t = m.is_transversal().map_err(|e| e.to_string())?;
        check(!t.transversal, || "reported transversal".into())?;
        Ok("f-vector (7,19,26,19,7), not transversal".into())
    })())
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, Duration::from_secs(1), true, criterion_1),
        (2, Duration::from_secs(1), true, criterion_2),
        (3, Duration::from_secs(5), true, criterion_3),
        (4, Duration::from_secs(5), true, criterion_4),
        (5, Duration::from_secs(60), true, criterion_5),
        (6, Duration::from_secs(10), true, criterion_6),
        (7, Duration::from_secs(1), true, criterion_7),
        (8, Duration::from_secs(60), true, criterion_8),
        (9, Duration::from_secs(30 * full_models().len() as u64), true, criterion_9),
        (10, Duration::from_secs(60), true, criterion_10),
        (11, Duration::from_secs(600), false, criterion_11),
    ];
    let mut failed = Vec::new();
    for (id, budget, gating, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(s) if took > budget => Err(format!("{} (over the {:?} budget)", s, budget)),
            o => o,
        };
        let tag = if gating { "" } else { " [reported, not gating]" };
        match outcome {
            Ok(s) => println!("criterion {:>2}: PASS in {:.2?}{}: {}", id, took, tag, s),
            Err(s) => {
                println!("criterion {:>2}: FAIL in {:.2?}{}: {}", id, took, tag, s);
                if gating {
                    failed.push(id);
                }
            }
        }
    }
    let start = Instant::now();
    match criterion_12() {
        None => println!("criterion 12: SKIP: set LOGVOR_M06_FIXTURE to a model file to run it"),
        Some(Ok(s)) => println!("criterion 12: PASS in {:.2?}: {}", start.elapsed(), s),
        Some(Err(s)) => {
            println!("criterion 12: FAIL in {:.2?}: {}", start.elapsed(), s);
            failed.push(12);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {:?}", failed);
        std::process::exit(1);
    }
}
