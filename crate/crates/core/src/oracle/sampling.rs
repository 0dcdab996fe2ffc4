//! Seeded Monte-Carlo checks. Each sample gets its own generator stream, so
//! reports do not depend on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::vec_to_f64;
use crate::model::{LinearModel, PartialLinearModel};
use crate::partial::ConjectureResult;
use crate::polytope::Polytope;

use super::{floor_zeros, membership, mle_full, MleOptions, MleResult, PartialOracle};

/// Worker count: `LOGVOR_THREADS` when set to a positive integer, otherwise
/// the available parallelism.
pub fn thread_count() -> usize {
    std::env::var("LOGVOR_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point of the simplex with `n` vertices.
pub fn dirichlet_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// Random point of a polytope: a flat-Dirichlet combination of its vertices.
pub fn sample_polytope<R: Rng + ?Sized>(p: &Polytope, rng: &mut R) -> Vec<f64> {
    let w = dirichlet_sample(p.vertices().len(), rng);
    let mut out = vec![0.0; p.ambient_dim()];
    for (wi, v) in w.iter().zip(p.vertices()) {
        for (o, x) in out.iter_mut().zip(vec_to_f64(v)) {
            *o += wi * x;
        }
    }
    out
}

fn pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .expect("thread pool")
}

/// Runs `f` on every sample index in parallel and returns results in index
/// order.
fn par_samples<T: Send>(samples: usize, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    pool().install(|| (0..samples as u64).into_par_iter().map(&f).collect())
}

pub enum Target<'a> {
    Full(&'a LinearModel),
    Partial(&'a PartialLinearModel),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TessellationReport {
    pub model: String,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub passed: usize,
    pub pass_rate: f64,
    pub worst_residual: f64,
    pub non_converged: usize,
    /// `by_active[k]` counts samples whose maximizer has `k` tight facets of
    /// theta (always index 0 for full models).
    pub by_active: Vec<usize>,
}

/// Draws uniform points of the simplex, computes their MLE and checks the
/// likelihood equations at the estimate.
pub fn tessellation_check(target: Target, samples: usize, seed: u64, tol: f64) -> Result<TessellationReport> {
    let opts = MleOptions::default();
    let (name, n) = match &target {
        Target::Full(m) => (m.name.clone(), m.n()),
        Target::Partial(pm) => (pm.extension.name.clone(), pm.n()),
    };
    let partial = match &target {
        Target::Partial(pm) => Some(PartialOracle::new(pm)?),
        Target::Full(_) => None,
    };
    let results: Vec<Result<(MleResult, bool)>> = par_samples(samples, |i| {
        let u = dirichlet_sample(n, &mut sample_rng(seed, i));
        match (&target, &partial) {
            (Target::Full(m), _) => {
                let r = mle_full(m, &u, opts)?;
                let ok = r.converged && r.p_hat.iter().all(|&v| v > 0.0) && full_residual(m, &u, &r.p_hat) < tol;
                Ok((r, ok))
            }
            (Target::Partial(_), Some(oracle)) => {
                let r = oracle.mle(&u, opts)?;
                let x = nalgebra::DVector::from_vec(r.x_hat.clone());
                let ok = r.converged && r.residual < tol && oracle.violation(&x) <= tol;
                Ok((r, ok))
            }
            (Target::Partial(_), None) => unreachable!(),
        }
    });
    let mut report = TessellationReport {
        model: name,
        samples,
        seed,
        tol,
        passed: 0,
        pass_rate: 0.0,
        worst_residual: 0.0,
        non_converged: 0,
        by_active: Vec::new(),
    };
    for r in results {
        let (r, ok) = r?;
        if ok {
            report.passed += 1;
        }
        if !r.converged {
            report.non_converged += 1;
        }
        report.worst_residual = report.worst_residual.max(r.residual);
        let k = r.active_constraints.len();
        if report.by_active.len() <= k {
            report.by_active.resize(k + 1, 0);
        }
        report.by_active[k] += 1;
    }
    report.pass_rate = if samples == 0 { 1.0 } else { report.passed as f64 / samples as f64 };
    Ok(report)
}

/// `max_j |sum_i u_i b_ij / p_i|`.
pub fn full_residual(m: &LinearModel, u: &[f64], p: &[f64]) -> f64 {
    let u = floor_zeros(u);
    (0..m.d())
        .map(|j| {
            (0..m.n())
                .map(|i| u[i] * crate::linalg::to_f64(&m.b()[(i, j)]) / p[i])
                .sum::<f64>()
                .abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub seed: u64,
    /// Points drawn from the candidate cell, and how many of them the oracle
    /// maps to `p`.
    pub candidate_samples: usize,
    pub candidate_agree: usize,
    /// Uniform points of the simplex, and how many of them get the same
    /// verdict from the candidate and the oracle.
    pub uniform_samples: usize,
    pub uniform_agree: usize,
    pub uniform_in_candidate: usize,
    pub agreement_rate: f64,
}

/// Compares candidate-cell membership with the partial MLE oracle. Half of
/// the samples come from the candidate itself, half from the whole simplex.
pub fn conjecture_agreement(
    pm: &PartialLinearModel,
    result: &ConjectureResult,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<AgreementReport> {
    let oracle = PartialOracle::new(pm)?;
    let p = vec_to_f64(&result.p);
    let n = pm.n();
    let from_candidate = samples / 2;
    let verdicts: Vec<Result<(bool, bool, bool)>> = par_samples(samples, |i| {
        let mut rng = sample_rng(seed, i);
        let own = (i as usize) < from_candidate;
        let u = if own { sample_polytope(&result.candidate, &mut rng) } else { dirichlet_sample(n, &mut rng) };
        let r = oracle.mle(&u, MleOptions::default())?;
        let oracle_says = r.p_hat.iter().zip(&p).all(|(a, b)| (a - b).abs() < tol);
        Ok((own, oracle_says, membership(&result.candidate, &u, 1e-9)))
    });
    let mut rep = AgreementReport {
        seed,
        candidate_samples: 0,
        candidate_agree: 0,
        uniform_samples: 0,
        uniform_agree: 0,
        uniform_in_candidate: 0,
        agreement_rate: 0.0,
    };
    for v in verdicts {
        let (own, oracle_says, inside) = v?;
        if own {
            rep.candidate_samples += 1;
            rep.candidate_agree += usize::from(oracle_says);
        } else {
            rep.uniform_samples += 1;
            rep.uniform_in_candidate += usize::from(inside);
            rep.uniform_agree += usize::from(oracle_says == inside);
        }
    }
    let total = rep.candidate_samples + rep.uniform_samples;
    rep.agreement_rate = if total == 0 { 1.0 } else { (rep.candidate_agree + rep.uniform_agree) as f64 / total as f64 };
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn dirichlet_mean_is_uniform() {
        let n = 4;
        let k = 4000;
        let mut mean = vec![0.0; n];
        for i in 0..k {
            let s = dirichlet_sample(n, &mut sample_rng(7, i));
            assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (m, v) in mean.iter_mut().zip(s) {
                *m += v / k as f64;
            }
        }
        // Var of one coordinate of a flat Dirichlet(4) is 3/80.
        let se = (3.0f64 / 80.0 / k as f64).sqrt();
        for m in mean {
            assert!((m - 0.25).abs() < 3.0 * se, "{}", m);
        }
    }

    #[test]
    fn streams_are_reproducible() {
        assert_eq!(dirichlet_sample(5, &mut sample_rng(1, 3)), dirichlet_sample(5, &mut sample_rng(1, 3)));
        assert_ne!(dirichlet_sample(5, &mut sample_rng(1, 3)), dirichlet_sample(5, &mut sample_rng(1, 4)));
    }

    #[test]
    fn triangle_tessellation_small() {
        let m = catalog::triangle();
        let r = tessellation_check(Target::Full(&m), 100, 42, 1e-7).unwrap();
        assert_eq!(r.passed, 100);
        assert_eq!(r.non_converged, 0);
    }

    #[test]
    fn partial_tessellation_small() {
        let pm = catalog::partial_example();
        let r = tessellation_check(Target::Partial(&pm), 100, 42, 1e-7).unwrap();
        assert_eq!(r.passed, 100);
        // Most uniform data lands outside the small model and maps to its
        // boundary.
        assert!(r.by_active.iter().skip(1).sum::<usize>() > 0);
    }
}
