//! Floating-point maximum likelihood estimation, used as an independent check
//! on the exact cell constructions.

mod sampling;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, to_f64, vec_to_f64, RatMatrix, RatVector};
use crate::model::{LinearModel, PartialLinearModel};
use crate::polytope::Polytope;

pub use sampling::{
    conjecture_agreement, dirichlet_sample, sample_polytope, sample_rng, tessellation_check, thread_count, AgreementReport,
    TessellationReport, Target,
};

/// Zero entries of `u` are raised to this before taking logarithms.
pub const ZERO_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleOptions {
    /// Bound on the likelihood-equation residual.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MleOptions {
    fn default() -> Self {
        MleOptions { tol: 1e-10, max_iter: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MleResult {
    pub x_hat: Vec<f64>,
    pub p_hat: Vec<f64>,
    /// `max_j |sum_i u_i b_ij / p_i|` over the directions of the face that
    /// holds the maximizer.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Facets of theta that are tight at the maximizer.
    pub active_constraints: Vec<usize>,
    pub log_likelihood: f64,
}

/// Replaces zeros by [`ZERO_FLOOR`] and renormalizes.
pub fn floor_zeros(u: &[f64]) -> Vec<f64> {
    let v: Vec<f64> = u.iter().map(|&x| if x > 0.0 { x } else { ZERO_FLOOR }).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

pub fn log_likelihood(u: &[f64], p: &[f64]) -> f64 {
    u.iter().zip(p).map(|(a, b)| if *a == 0.0 { 0.0 } else { a * b.ln() }).sum()
}

/// The affine map `t -> c - B t` in floating point.
#[derive(Debug, Clone)]
struct Chart {
    c: DVector<f64>,
    b: DMatrix<f64>,
}

impl Chart {
    fn point(&self, t: &DVector<f64>) -> DVector<f64> {
        &self.c - &self.b * t
    }

    fn gradient(&self, u: &[f64], p: &DVector<f64>) -> DVector<f64> {
        let w = DVector::from_iterator(p.len(), u.iter().zip(p.iter()).map(|(a, b)| a / b));
        -(self.b.transpose() * w)
    }

    fn hessian(&self, u: &[f64], p: &DVector<f64>) -> DMatrix<f64> {
        let k = self.b.ncols();
        let mut h = DMatrix::zeros(k, k);
        for i in 0..p.len() {
            let wgt = u[i] / (p[i] * p[i]);
            let row = self.b.row(i);
            h -= wgt * row.transpose() * row;
        }
        h
    }
}

struct Ascent {
    t: DVector<f64>,
    p: DVector<f64>,
    residual: f64,
    iterations: usize,
    converged: bool,
    value: f64,
    trace: Vec<f64>,
}

/// Damped Newton ascent of `sum u_i log p_i(t)` from a strictly feasible start.
fn newton(chart: &Chart, u: &[f64], start: DVector<f64>, opts: MleOptions) -> Ascent {
    let mut t = start;
    let mut p = chart.point(&t);
    let mut value = log_likelihood(u, p.as_slice());
    let mut trace = vec![value];
    let mut iterations = 0;
    let residual_of = |p: &DVector<f64>| chart.gradient(u, p).amax();
    if chart.b.ncols() == 0 {
        return Ascent { residual: 0.0, t, p, iterations, converged: true, value, trace };
    }
    loop {
        let g = chart.gradient(u, &p);
        let residual = g.amax();
        if residual < opts.tol {
            return Ascent { t, p, residual, iterations, converged: true, value, trace };
        }
        if iterations >= opts.max_iter {
            return Ascent { t, p, residual, iterations, converged: false, value, trace };
        }
        iterations += 1;
        let h = chart.hessian(u, &p);
        let step = match (-h).cholesky() {
            Some(ch) => ch.solve(&g),
            None => g.clone(),
        };
        let mut alpha = 1.0;
        let mut moved = false;
        // Near the optimum the change in the likelihood drops below rounding
        // error; there a step is accepted when it shrinks the gradient.
        let noise = 8.0 * f64::EPSILON * (1.0 + value.abs());
        for _ in 0..80 {
            let cand = &t + alpha * &step;
            let pc = chart.point(&cand);
            if pc.iter().all(|&v| v > 0.0) {
                let vc = log_likelihood(u, pc.as_slice());
                if vc > value || (vc >= value - noise && residual_of(&pc) < residual) {
                    t = cand;
                    p = pc;
                    value = vc;
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        trace.push(value);
        if !moved {
            let residual = residual_of(&p);
            return Ascent { t, p, residual, iterations, converged: residual < opts.tol, value, trace };
        }
    }
}

fn dmatrix(m: &RatMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| to_f64(&m[(i, j)]))
}

fn check_u(u: &[f64], n: usize) -> Result<()> {
    if u.len() != n {
        return Err(Error::Dimension(format!("u has {} entries, model has {} states", u.len(), n)));
    }
    if u.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::OutOfDomain("u must be a nonnegative finite vector".into()));
    }
    Ok(())
}

/// Start point for the full model: the average of the vertices of `Theta'`.
fn full_start(m: &LinearModel) -> Result<Vec<f64>> {
    let theta = m.parameter_polytope()?;
    Ok(vec_to_f64(&theta.centroid().ok_or_else(|| Error::InvalidModel("empty parameter region".into()))?))
}

/// MLE over the whole linear model.
pub fn mle_full(m: &LinearModel, u: &[f64], opts: MleOptions) -> Result<MleResult> {
    check_u(u, m.n())?;
    let u = floor_zeros(u);
    let chart = Chart { c: DVector::from_vec(vec_to_f64(m.c())), b: dmatrix(m.b()) };
    let start = DVector::from_vec(full_start(m)?);
    let a = newton(&chart, &u, start, opts);
    Ok(MleResult {
        x_hat: a.t.as_slice().to_vec(),
        p_hat: a.p.as_slice().to_vec(),
        residual: a.residual,
        iterations: a.iterations,
        converged: a.converged,
        active_constraints: Vec::new(),
        log_likelihood: a.value,
    })
}

/// Log-likelihood values of every accepted Newton iterate, for checking
/// monotone ascent.
pub fn mle_full_trace(m: &LinearModel, u: &[f64], opts: MleOptions) -> Result<Vec<f64>> {
    check_u(u, m.n())?;
    let u = floor_zeros(u);
    let chart = Chart { c: DVector::from_vec(vec_to_f64(m.c())), b: dmatrix(m.b()) };
    Ok(newton(&chart, &u, DVector::from_vec(full_start(m)?), opts).trace)
}

/// One face of theta, parametrized as `x = x0 + Z t`.
#[derive(Debug, Clone)]
struct FaceChart {
    x0: DVector<f64>,
    z: DMatrix<f64>,
    chart: Chart,
    tight: Vec<usize>,
}

/// Precomputed face charts of a partial model, reusable across many data
/// points.
#[derive(Debug, Clone)]
pub struct PartialOracle {
    faces: Vec<FaceChart>,
    normals: DMatrix<f64>,
    offsets: DVector<f64>,
    n: usize,
}

impl PartialOracle {
    pub fn new(pm: &PartialLinearModel) -> Result<Self> {
        let theta = &pm.theta;
        let d = pm.d();
        let b = dmatrix(pm.extension.b());
        let c = DVector::from_vec(vec_to_f64(pm.extension.c()));
        let mut faces = Vec::new();
        for face in &theta.face_lattice().faces {
            if face.dim < 0 {
                continue;
            }
            let verts: Vec<RatVector> = face.vertices.iter().map(|&i| theta.vertices()[i].clone()).collect();
            if pm.face_on_simplex_boundary(&verts) {
                continue;
            }
            let centre = linalg::centroid(&verts);
            let dirs: Vec<RatVector> = verts[1..].iter().map(|v| linalg::vsub(v, &verts[0])).collect();
            let basis = if dirs.is_empty() {
                Vec::new()
            } else {
                linalg::row_space_basis(&RatMatrix::from_rows(&dirs, d)?)
            };
            let z = DMatrix::from_fn(d, basis.len(), |i, j| to_f64(&basis[j][i]));
            let x0 = DVector::from_vec(vec_to_f64(&centre));
            let chart = Chart { c: &c - &b * &x0, b: &b * &z };
            let tight = (0..theta.halfspaces().len())
                .filter(|&h| verts.iter().all(|v| theta.halfspaces()[h].slack(v) == num_traits::Zero::zero()))
                .collect();
            faces.push(FaceChart { x0, z, chart, tight });
        }
        let hs = theta.halfspaces();
        let normals = DMatrix::from_fn(hs.len(), d, |i, j| to_f64(&hs[i].normal[j]));
        let offsets = DVector::from_iterator(hs.len(), hs.iter().map(|h| to_f64(&h.offset)));
        Ok(PartialOracle { faces, normals, offsets, n: pm.n() })
    }

    /// Largest violation of the theta halfspaces, scaled by normal length.
    fn violation(&self, x: &DVector<f64>) -> f64 {
        let s = &self.normals * x - &self.offsets;
        (0..s.len())
            .map(|i| s[i] / self.normals.row(i).norm())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mle(&self, u: &[f64], opts: MleOptions) -> Result<MleResult> {
        check_u(u, self.n)?;
        let u = floor_zeros(u);
        let mut best: Option<MleResult> = None;
        for f in &self.faces {
            if f.chart.c.iter().any(|&v| v <= 0.0) {
                continue;
            }
            let start = DVector::zeros(f.z.ncols());
            let a = newton(&f.chart, &u, start, opts);
            let x = &f.x0 + &f.z * &a.t;
            if self.violation(&x) > 1e-9 {
                continue;
            }
            if best.as_ref().is_some_and(|b| b.log_likelihood >= a.value) {
                continue;
            }
            best = Some(MleResult {
                x_hat: x.as_slice().to_vec(),
                p_hat: a.p.as_slice().to_vec(),
                residual: a.residual,
                iterations: a.iterations,
                converged: a.converged,
                active_constraints: f.tight.clone(),
                log_likelihood: a.value,
            });
        }
        best.ok_or_else(|| Error::OutOfDomain("no face of theta carries a finite likelihood".into()))
    }
}

/// MLE over a partial model: damped Newton on the affine span of every face
/// of theta, keeping the best candidate that lies in its face.
pub fn mle_partial(pm: &PartialLinearModel, u: &[f64], opts: MleOptions) -> Result<MleResult> {
    PartialOracle::new(pm)?.mle(u, opts)
}

/// All halfspace and equation residuals of `cell` at `u` are within `tol`
/// (measured as distances).
pub fn membership(cell: &Polytope, u: &[f64], tol: f64) -> bool {
    if u.len() != cell.ambient_dim() || cell.is_empty() {
        return false;
    }
    let value = |normal: &[crate::linalg::Rational], offset: &crate::linalg::Rational| {
        let nv = vec_to_f64(normal);
        let norm = nv.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        (nv.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() - to_f64(offset)) / norm
    };
    cell.halfspaces().iter().all(|h| value(&h.normal, &h.offset) <= tol)
        && cell.equations().iter().all(|e| value(&e.normal, &e.offset).abs() <= tol)
}
