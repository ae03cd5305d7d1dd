//! Pointwise analysis of a Riemannian submersion: vertical/horizontal
//! splitting, O'Neill tensors T and A, mean curvature of the fibers, the
//! delta(N) divergence term, component norms, the curvature-relation sign
//! audit, and the tau/Ric scalar block.
//!
//! Frame fields are built by projecting fixed coordinate vector fields onto
//! the vertical/horizontal sub-bundles pointwise and orthonormalizing in a
//! fixed order; where the rank is stable this is smooth, so covariant
//! derivatives of frame vectors can be taken by Richardson finite differences.

use crate::chart::ChartManifold;
use crate::curvature::{christoffel, covariant_derivative, riemann, Christoffel, CurvatureAt, DiffBackend};
use crate::error::{Error, Result};
use crate::expr::{eval_jet2, Expression};
use crate::fd;
use crate::linalg::{Frame, Mat, SymMat, Vector};
use crate::scalar::Real;

/// Outer step for differentiating quantities that are themselves computed
/// with inner finite differences (tensor fields built from frame fields).
const OUTER_FD_H: f64 = 1e-3;

/// Audit tolerance: residual <= AUDIT_TOL * scale must hold for some sign.
pub const AUDIT_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SubmersionProblem<S> {
    pub source: ChartManifold<S>,
    pub target: ChartManifold<S>,
    pub map: Vec<Expression<S>>,
}

impl<S: Real> SubmersionProblem<S> {
    pub fn fiber_dim(&self) -> usize {
        self.source.dim - self.target.dim
    }

    pub fn horizontal_dim(&self) -> usize {
        self.target.dim
    }

    pub fn validate(&self) -> Result<()> {
        self.source.validate()?;
        self.target.validate()?;
        if self.map.len() != self.target.dim {
            return Err(Error::InvalidProblem(format!(
                "map has {} components for target dimension {}",
                self.map.len(),
                self.target.dim
            )));
        }
        for e in &self.map {
            if e.n_vars() > self.source.dim {
                return Err(Error::InvalidProblem(
                    "map expression uses more variables than the source dimension".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn map_at(&self, p: &[S]) -> Result<Vec<S>> {
        self.map.iter().map(|e| e.eval(p)).collect()
    }

    /// Differential F_* as an m2 x m1 matrix of exact jet gradients.
    pub fn differential(&self, p: &[S]) -> Result<Mat<S>> {
        let m1 = self.source.dim;
        let m2 = self.map.len();
        let mut jac = Mat::zeros(m2, m1);
        for (row, e) in self.map.iter().enumerate() {
            let jet = eval_jet2(e, p)?;
            for col in 0..m1 {
                jac[(row, col)] = *jet.grad.get(col).unwrap_or(&S::zero());
            }
        }
        Ok(jac)
    }

    pub fn push(&self, p: &[S], v: &Vector<S>) -> Result<Vector<S>> {
        Ok(self.differential(p)?.matvec(v))
    }
}

/// Frozen seed indices for reproducible, smoothly varying frames.
#[derive(Debug, Clone)]
pub struct SeededSplit {
    pub rank: usize,
    pub kernel_seeds: Vec<usize>,
    pub complement_seeds: Vec<usize>,
}

impl SeededSplit {
    /// Choose coordinate seeds at a base point.
    pub fn prepare<S: Real>(
        source: &ChartManifold<S>,
        map: &[Expression<S>],
        expected_rank: usize,
        p: &[S],
    ) -> Result<Self> {
        let jac = differential_of(map, source.dim, p)?;
        let g = source.metric_at(p)?;
        let ks = crate::linalg::kernel_split(&jac, &g)?;
        if ks.rank != expected_rank {
            return Err(Error::RankDeficiency { expected: expected_rank, found: ks.rank });
        }
        Ok(Self {
            rank: ks.rank,
            kernel_seeds: ks.kernel_seeds,
            complement_seeds: ks.complement_seeds,
        })
    }

    /// Evaluate the (vertical, horizontal) frames at a nearby point.
    pub fn frames<S: Real>(
        &self,
        source: &ChartManifold<S>,
        map: &[Expression<S>],
        q: &[S],
    ) -> Result<(Frame<S>, Frame<S>)> {
        let jac = differential_of(map, source.dim, q)?;
        let g = source.metric_at(q)?;
        crate::linalg::kernel_split_with_seeds(
            &jac,
            &g,
            self.rank,
            &self.kernel_seeds,
            &self.complement_seeds,
        )
    }
}

pub(crate) fn differential_of<S: Real>(
    map: &[Expression<S>],
    m1: usize,
    p: &[S],
) -> Result<Mat<S>> {
    let m2 = map.len();
    let mut jac = Mat::zeros(m2, m1);
    for (row, e) in map.iter().enumerate() {
        let jet = eval_jet2(e, p)?;
        for col in 0..m1 {
            jac[(row, col)] = *jet.grad.get(col).unwrap_or(&S::zero());
        }
    }
    Ok(jac)
}

/// Vertical/horizontal splitting at a point, frames g1-orthonormal.
pub fn split<S: Real>(
    prob: &SubmersionProblem<S>,
    p: &[S],
) -> Result<(Frame<S>, Frame<S>)> {
    let seeds = SeededSplit::prepare(&prob.source, &prob.map, prob.horizontal_dim(), p)?;
    seeds.frames(&prob.source, &prob.map, p)
}

/// Sign profile of the curvature relations, established empirically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignProfile<S> {
    pub s23: i8,
    pub s24: i8,
    pub s25: i8,
    /// Best residual achieved per relation (relative to its scale).
    pub residuals: [S; 3],
    /// Whether the sign was actually pinned by a nonzero correction block.
    pub determined: [bool; 3],
}

impl<S: Real> Default for SignProfile<S> {
    fn default() -> Self {
        // Ties keep the sign that matches the fixed pairing convention.
        Self { s23: -1, s24: -1, s25: -1, residuals: [S::zero(); 3], determined: [false; 3] }
    }
}

/// Intrinsic curvature of the fibers, when known independently.
#[derive(Debug, Clone, Copy)]
pub enum FiberCurvature<S> {
    Flat,
    ConstSec(S),
    /// Constant sectional curvature depending on the base point of the fiber.
    SecAt(fn(&[f64]) -> f64, std::marker::PhantomData<S>),
}

impl<S: Real> FiberCurvature<S> {
    pub fn sec(&self, p: &[S]) -> S {
        match self {
            FiberCurvature::Flat => S::zero(),
            FiberCurvature::ConstSec(k) => *k,
            FiberCurvature::SecAt(f, _) => {
                let pf: Vec<f64> = p.iter().map(|x| x.as_f64()).collect();
                S::of(f(&pf))
            }
        }
    }
}

/// Options for a pointwise analysis.
#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions<S> {
    pub v1_index: usize,
    pub h1_index: usize,
    pub fiber: Option<FiberCurvature<S>>,
}

impl<S: Real> Default for AnalysisOptions<S> {
    fn default() -> Self {
        Self { v1_index: 0, h1_index: 0, fiber: None }
    }
}

/// Everything the inequality suite needs at one point.
#[derive(Debug, Clone)]
pub struct SubmersionAnalysis<S> {
    pub point: Vec<S>,
    pub n: usize,
    pub r: usize,
    pub v1: usize,
    pub h1: usize,
    pub g: SymMat<S>,
    pub vertical: Frame<S>,
    pub horizontal: Frame<S>,
    /// T_ij^t = g1(T_{v_i} v_j, h_t), flattened [i][j][t].
    pub t_comp: Vec<S>,
    /// A_ij^a = g1(A_{h_i} h_j, v_a), flattened [i][j][a].
    pub a_comp: Vec<S>,
    /// g1(T_{v_j} h_i, v_k), flattened [j][i][k].
    pub t_vh: Vec<S>,
    /// g1(A_{h_i} v_j, h_t), flattened [i][j][t].
    pub a_hv: Vec<S>,
    /// Worst violation of the four O'Neill tensor identities.
    pub property_residual: S,
    /// H = (1/n) sum_i T_{v_i} v_i, in chart coordinates.
    pub mean_curvature: Vector<S>,
    pub h_norm_sq: S,
    pub delta_n: S,
    pub norm_tv_sq: S,
    pub norm_ah_sq: S,
    pub tau_v_ker: S,
    pub tau_v_m1: S,
    pub tau_h_perp: S,
    pub tau_h_m1: S,
    pub ric_v_ker: S,
    pub ric_v_m1: S,
    pub ric_h_perp: S,
    pub ric_h_m1: S,
    /// Fiber Ricci from an explicit fiber-curvature oracle, when available.
    pub ric_v_ker_direct: Option<S>,
    /// sum_{i,j} R^{M1}(h_i, v_j, v_j, h_i)
    pub mixed_sum: S,
    pub sign_profile: SignProfile<S>,
}

impl<S: Real> SubmersionAnalysis<S> {
    #[inline]
    pub fn t(&self, i: usize, j: usize, t: usize) -> S {
        self.t_comp[(i * self.n + j) * self.r + t]
    }

    #[inline]
    pub fn a(&self, i: usize, j: usize, alpha: usize) -> S {
        self.a_comp[(i * self.r + j) * self.n + alpha]
    }

    /// g1(T_{v_a} v_b, T_{v_c} v_d) from components.
    pub fn t_inner(&self, a: usize, b: usize, c: usize, d: usize) -> S {
        (0..self.r).fold(S::zero(), |s, t| s + self.t(a, b, t) * self.t(c, d, t))
    }

    /// g1(A_{h_a} h_b, A_{h_c} h_d) from components.
    pub fn a_inner(&self, a: usize, b: usize, c: usize, d: usize) -> S {
        (0..self.n).fold(S::zero(), |s, al| s + self.a(a, b, al) * self.a(c, d, al))
    }

    /// 3 * sum_alpha sum_{j != h1} (A_{h1 j}^alpha)^2, the horizontal defect.
    pub fn a_h1_defect(&self) -> S {
        let mut s = S::zero();
        for j in 0..self.r {
            if j == self.h1 {
                continue;
            }
            for al in 0..self.n {
                s += self.a(self.h1, j, al) * self.a(self.h1, j, al);
            }
        }
        S::of(3.0) * s
    }

    /// Equality conditions of the vertical Chen-Ricci bound:
    /// T_{11}^t = sum_{j>=2} T_{jj}^t and T_{1j}^t = 0, indices relative to v1.
    pub fn t_equality_conditions(&self, tol: S) -> bool {
        let one = self.v1;
        for t in 0..self.r {
            let mut rest = S::zero();
            for j in 0..self.n {
                if j != one {
                    rest += self.t(j, j, t);
                }
            }
            if (self.t(one, one, t) - rest).abs() > tol {
                return false;
            }
            for j in 0..self.n {
                if j != one && self.t(one, j, t).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Equality condition of the horizontal bound: A_{1j}^alpha = 0.
    pub fn a_equality_conditions(&self, tol: S) -> bool {
        for j in 0..self.r {
            if j == self.h1 {
                continue;
            }
            for al in 0..self.n {
                if self.a(self.h1, j, al).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn max_t_abs(&self) -> S {
        self.t_comp.iter().fold(S::zero(), |m, x| m.max(x.abs()))
    }

    pub fn max_a_abs(&self) -> S {
        self.a_comp.iter().fold(S::zero(), |m, x| m.max(x.abs()))
    }
}

/// Working context shared by the tensor computations at one point.
struct Workspace<'a, S: Real> {
    prob: &'a SubmersionProblem<S>,
    seeds: SeededSplit,
    p: Vec<S>,
    g: SymMat<S>,
    ch: Christoffel<S>,
    vertical: Frame<S>,
    horizontal: Frame<S>,
    n: usize,
    r: usize,
}

impl<'a, S: Real> Workspace<'a, S> {
    fn new(prob: &'a SubmersionProblem<S>, p: &[S]) -> Result<Self> {
        prob.validate()?;
        if !prob.source.contains(p) {
            return Err(Error::Domain(format!("point {p:?} outside the source chart domain")));
        }
        let seeds = SeededSplit::prepare(&prob.source, &prob.map, prob.horizontal_dim(), p)?;
        let (vertical, horizontal) = seeds.frames(&prob.source, &prob.map, p)?;
        let g = prob.source.metric_at(p)?;
        let ch = christoffel(&prob.source, p, DiffBackend::Jet)?;
        let n = vertical.len();
        let r = horizontal.len();
        Ok(Self { prob, seeds, p: p.to_vec(), g, ch, vertical, horizontal, n, r })
    }

    fn vertical_field(&self, j: usize) -> impl Fn(&[S]) -> Result<Vec<S>> + '_ {
        move |q: &[S]| {
            let (v, _) = self.seeds.frames(&self.prob.source, &self.prob.map, q)?;
            Ok(v.vectors[j].c.clone())
        }
    }

    fn horizontal_field(&self, i: usize) -> impl Fn(&[S]) -> Result<Vec<S>> + '_ {
        move |q: &[S]| {
            let (_, h) = self.seeds.frames(&self.prob.source, &self.prob.map, q)?;
            Ok(h.vectors[i].c.clone())
        }
    }

    /// nabla_dir (field) at the base point.
    fn cov_at_p<F>(&self, field: &F, dir: &Vector<S>) -> Result<Vector<S>>
    where
        F: Fn(&[S]) -> Result<Vec<S>>,
    {
        covariant_derivative(&self.ch, field, dir, &self.p)
    }

    /// nabla_dir (field) at an arbitrary nearby point.
    fn cov_at<F>(&self, field: &F, dir: &Vector<S>, q: &[S]) -> Result<Vector<S>>
    where
        F: Fn(&[S]) -> Result<Vec<S>>,
    {
        let ch = christoffel(&self.prob.source, q, DiffBackend::Jet)?;
        covariant_derivative(&ch, field, dir, q)
    }

    fn project_h(&self, v: &Vector<S>) -> Vector<S> {
        crate::linalg::project(v, &self.horizontal, &self.g)
    }

    fn project_v(&self, v: &Vector<S>) -> Vector<S> {
        crate::linalg::project(v, &self.vertical, &self.g)
    }

    /// T_{v_i} v_j as a full coordinate vector (horizontal part of the
    /// covariant derivative of the j-th vertical frame field).
    fn t_vv(&self, i: usize, j: usize) -> Result<Vector<S>> {
        let f = self.vertical_field(j);
        let w = self.cov_at_p(&f, &self.vertical.vectors[i])?;
        Ok(self.project_h(&w))
    }

    /// T_{v_j} h_i = vertical part of nabla_{v_j} (h_i field).
    fn t_vh(&self, j: usize, i: usize) -> Result<Vector<S>> {
        let f = self.horizontal_field(i);
        let w = self.cov_at_p(&f, &self.vertical.vectors[j])?;
        Ok(self.project_v(&w))
    }

    /// A_{h_i} h_j = vertical part of nabla_{h_i} (h_j field).
    fn a_hh(&self, i: usize, j: usize) -> Result<Vector<S>> {
        let f = self.horizontal_field(j);
        let w = self.cov_at_p(&f, &self.horizontal.vectors[i])?;
        Ok(self.project_v(&w))
    }

    /// A_{h_i} v_j = horizontal part of nabla_{h_i} (v_j field).
    fn a_hv(&self, i: usize, j: usize) -> Result<Vector<S>> {
        let f = self.vertical_field(j);
        let w = self.cov_at_p(&f, &self.horizontal.vectors[i])?;
        Ok(self.project_h(&w))
    }

    /// The field q -> T_{v_b(q)} v_d(q) as a full coordinate vector.
    fn t_vv_field(&self, b: usize, d: usize) -> impl Fn(&[S]) -> Result<Vec<S>> + '_ {
        move |q: &[S]| {
            let (v, h) = self.seeds.frames(&self.prob.source, &self.prob.map, q)?;
            let g = self.prob.source.metric_at(q)?;
            let f = self.vertical_field(d);
            let w = self.cov_at(&f, &v.vectors[b], q)?;
            Ok(crate::linalg::project(&w, &h, &g).c)
        }
    }

    /// The field q -> A_{h_a(q)} h_c(q).
    fn a_hh_field(&self, a: usize, c: usize) -> impl Fn(&[S]) -> Result<Vec<S>> + '_ {
        move |q: &[S]| {
            let (v, h) = self.seeds.frames(&self.prob.source, &self.prob.map, q)?;
            let g = self.prob.source.metric_at(q)?;
            let f = self.horizontal_field(c);
            let w = self.cov_at(&f, &h.vectors[a], q)?;
            Ok(crate::linalg::project(&w, &v, &g).c)
        }
    }
}

/// Raw O'Neill tensor data at a point.
#[derive(Debug, Clone)]
pub struct OneillTensors<S> {
    pub n: usize,
    pub r: usize,
    pub t_comp: Vec<S>,
    pub a_comp: Vec<S>,
    pub t_vh: Vec<S>,
    pub a_hv: Vec<S>,
    pub property_residual: S,
}

/// Component arrays of T and A per their defining formulas
/// T_E F = h nabla_{vE} vF + v nabla_{vE} hF and
/// A_E F = v nabla_{hE} hF + h nabla_{hE} vF.
pub fn oneill_tensors<S: Real>(
    prob: &SubmersionProblem<S>,
    p: &[S],
) -> Result<OneillTensors<S>> {
    let ws = Workspace::new(prob, p)?;
    compute_oneill(&ws)
}

fn compute_oneill<S: Real>(ws: &Workspace<S>) -> Result<OneillTensors<S>> {
    let (n, r) = (ws.n, ws.r);
    let mut t_comp = vec![S::zero(); n * n * r];
    let mut a_comp = vec![S::zero(); r * r * n];
    let mut t_vh = vec![S::zero(); n * r * n];
    let mut a_hv = vec![S::zero(); r * n * r];
    for i in 0..n {
        for j in 0..n {
            let tv = ws.t_vv(i, j)?;
            for t in 0..r {
                t_comp[(i * n + j) * r + t] = ws.g.inner(&tv, &ws.horizontal.vectors[t]);
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            let av = ws.a_hh(i, j)?;
            for al in 0..n {
                a_comp[(i * r + j) * n + al] = ws.g.inner(&av, &ws.vertical.vectors[al]);
            }
        }
    }
    for j in 0..n {
        for i in 0..r {
            let tv = ws.t_vh(j, i)?;
            for k in 0..n {
                t_vh[(j * r + i) * n + k] = ws.g.inner(&tv, &ws.vertical.vectors[k]);
            }
        }
    }
    for i in 0..r {
        for j in 0..n {
            let av = ws.a_hv(i, j)?;
            for t in 0..r {
                a_hv[(i * n + j) * r + t] = ws.g.inner(&av, &ws.horizontal.vectors[t]);
            }
        }
    }
    // The four O'Neill identities, checked numerically rather than assumed.
    let mut worst = S::zero();
    for i in 0..n {
        for j in 0..n {
            for t in 0..r {
                worst = worst
                    .max((t_comp[(i * n + j) * r + t] - t_comp[(j * n + i) * r + t]).abs());
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            for al in 0..n {
                worst = worst
                    .max((a_comp[(i * r + j) * n + al] + a_comp[(j * r + i) * n + al]).abs());
            }
        }
    }
    for j in 0..n {
        for i in 0..r {
            for k in 0..n {
                // g(T_{v_j} h_i, v_k) = -g(T_{v_j} v_k, h_i)
                worst = worst
                    .max((t_vh[(j * r + i) * n + k] + t_comp[(j * n + k) * r + i]).abs());
            }
        }
    }
    for i in 0..r {
        for j in 0..n {
            for t in 0..r {
                // g(A_{h_i} v_j, h_t) = -g(A_{h_i} h_t, v_j)
                worst = worst
                    .max((a_hv[(i * n + j) * r + t] + a_comp[(i * r + t) * n + j]).abs());
            }
        }
    }
    Ok(OneillTensors { n, r, t_comp, a_comp, t_vh, a_hv, property_residual: worst })
}

/// Mean curvature of the fiber, reconstructed from T components:
/// H = (1/n) sum_i sum_t T_ii^t h_t.
pub fn mean_curvature<S: Real>(
    tensors: &OneillTensors<S>,
    horizontal: &Frame<S>,
) -> Vector<S> {
    let (n, r) = (tensors.n, tensors.r);
    let dim = horizontal.vectors.first().map_or(0, |v| v.dim());
    let mut h = Vector::zeros(dim);
    for i in 0..n {
        for t in 0..r {
            h.axpy(tensors.t_comp[(i * n + i) * r + t], &horizontal.vectors[t]);
        }
    }
    h.scale(S::one() / S::of(n as f64))
}

/// delta(N) = sum_i sum_j g1((nabla_{h_i} T)(v_j, v_j), h_i) with
/// (nabla_X T)(U,V) = nabla_X (T_U V) - T_{nabla_X U} V - T_U (nabla_X V).
pub fn delta_n<S: Real>(prob: &SubmersionProblem<S>, p: &[S]) -> Result<S> {
    let ws = Workspace::new(prob, p)?;
    let tensors = compute_oneill(&ws)?;
    delta_n_with(&ws, &tensors)
}

fn delta_n_with<S: Real>(ws: &Workspace<S>, tensors: &OneillTensors<S>) -> Result<S> {
    let mut sum = S::zero();
    for i in 0..ws.r {
        for j in 0..ws.n {
            let grad = nabla_t(ws, tensors, &ws.horizontal.vectors[i].clone(), j, j)?;
            sum += ws.g.inner(&grad, &ws.horizontal.vectors[i]);
        }
    }
    Ok(sum)
}

/// (nabla_X T)(v_b, v_d) at the base point, X a vector at p.
fn nabla_t<S: Real>(
    ws: &Workspace<S>,
    tensors: &OneillTensors<S>,
    x: &Vector<S>,
    b: usize,
    d: usize,
) -> Result<Vector<S>> {
    // term 1: nabla_X of the field q -> T_{v_b(q)} v_d(q)
    let t_field = ws.t_vv_field(b, d);
    let term1 = {
        let ch = &ws.ch;
        let dv = fd::dir_derivative(&t_field, &ws.p, &x.c, S::of(OUTER_FD_H))?;
        let v0 = t_field(&ws.p)?;
        let mut out = Vector::new(dv);
        for k in 0..ch.dim {
            let mut s = S::zero();
            for i in 0..ch.dim {
                for j in 0..ch.dim {
                    s += ch.get(k, i, j) * x.c[i] * v0[j];
                }
            }
            out.c[k] += s;
        }
        out
    };
    // term 2: T(nabla_X v_b, v_d) - T is tensorial, so only the vertical part
    // of the derivative enters: T_W v_d = h nabla_{vW} (v_d field).
    let fb = ws.vertical_field(b);
    let w_b = ws.cov_at_p(&fb, x)?;
    let term2 = t_vector_arg(ws, &ws.project_v(&w_b), d)?;
    // term 3: T_{v_b}(nabla_X v_d), expanded on the frame by tensoriality.
    let fdl = ws.vertical_field(d);
    let w_d = ws.cov_at_p(&fdl, x)?;
    let term3 = t_frame_expand(ws, tensors, b, &w_d)?;
    Ok(term1.sub(&term2).sub(&term3))
}

/// T_W v_d for an arbitrary vector W at p (only vW contributes).
fn t_vector_arg<S: Real>(ws: &Workspace<S>, w_vert: &Vector<S>, d: usize) -> Result<Vector<S>> {
    let f = ws.vertical_field(d);
    let der = ws.cov_at_p(&f, w_vert)?;
    Ok(ws.project_h(&der))
}

/// T_{v_b} W by expanding W on the frame: T_{v_b} h_i from t_vh components,
/// T_{v_b} v_j from t_comp.
fn t_frame_expand<S: Real>(
    ws: &Workspace<S>,
    tensors: &OneillTensors<S>,
    b: usize,
    w: &Vector<S>,
) -> Result<Vector<S>> {
    let mut out = Vector::zeros(w.dim());
    for i in 0..ws.r {
        let ci = ws.g.inner(w, &ws.horizontal.vectors[i]);
        if ci.abs() > S::zero() {
            // T_{v_b} h_i is vertical with components t_vh[b][i][k]
            for k in 0..ws.n {
                out.axpy(ci * tensors.t_vh[(b * ws.r + i) * ws.n + k], &ws.vertical.vectors[k]);
            }
        }
    }
    for j in 0..ws.n {
        let dj = ws.g.inner(w, &ws.vertical.vectors[j]);
        if dj.abs() > S::zero() {
            // T_{v_b} v_j is horizontal with components t_comp[b][j][t]
            for t in 0..ws.r {
                out.axpy(dj * tensors.t_comp[(b * ws.n + j) * ws.r + t], &ws.horizontal.vectors[t]);
            }
        }
    }
    Ok(out)
}

/// (nabla_U A)(h_a, h_c) at the base point, U a vector at p.
fn nabla_a<S: Real>(
    ws: &Workspace<S>,
    tensors: &OneillTensors<S>,
    u: &Vector<S>,
    a: usize,
    c: usize,
) -> Result<Vector<S>> {
    let a_field = ws.a_hh_field(a, c);
    let term1 = {
        let ch = &ws.ch;
        let dv = fd::dir_derivative(&a_field, &ws.p, &u.c, S::of(OUTER_FD_H))?;
        let v0 = a_field(&ws.p)?;
        let mut out = Vector::new(dv);
        for k in 0..ch.dim {
            let mut s = S::zero();
            for i in 0..ch.dim {
                for j in 0..ch.dim {
                    s += ch.get(k, i, j) * u.c[i] * v0[j];
                }
            }
            out.c[k] += s;
        }
        out
    };
    // A(W, h_c): only hW contributes, expanded as A_{h_i} h_c.
    let fa = ws.horizontal_field(a);
    let w_a = ws.cov_at_p(&fa, u)?;
    let term2 = {
        let mut out = Vector::zeros(w_a.dim());
        for i in 0..ws.r {
            let ci = ws.g.inner(&w_a, &ws.horizontal.vectors[i]);
            for al in 0..ws.n {
                out.axpy(ci * tensors.a_comp[(i * ws.r + c) * ws.n + al], &ws.vertical.vectors[al]);
            }
        }
        out
    };
    // A_{h_a}(W): expand W on the frame; A_{h_a} h_j from a_comp,
    // A_{h_a} v_j from a_hv.
    let fc = ws.horizontal_field(c);
    let w_c = ws.cov_at_p(&fc, u)?;
    let term3 = {
        let mut out = Vector::zeros(w_c.dim());
        for j in 0..ws.r {
            let cj = ws.g.inner(&w_c, &ws.horizontal.vectors[j]);
            for al in 0..ws.n {
                out.axpy(cj * tensors.a_comp[(a * ws.r + j) * ws.n + al], &ws.vertical.vectors[al]);
            }
        }
        for j in 0..ws.n {
            let dj = ws.g.inner(&w_c, &ws.vertical.vectors[j]);
            for t in 0..ws.r {
                out.axpy(dj * tensors.a_hv[(a * ws.n + j) * ws.r + t], &ws.horizontal.vectors[t]);
            }
        }
        out
    };
    Ok(term1.sub(&term2).sub(&term3))
}

/// Both sides of the component identity
/// sum (T_ij^t)^2 = n^2 |H|^2 / 2 + (1/2) sum_t (T_11^t - T_22^t - ... - T_nn^t)^2
///                 + 2 sum_t sum_{j>=2} (T_1j^t)^2
///                 - 2 sum_t sum_{2<=i<j} { T_ii^t T_jj^t - (T_ij^t)^2 }.
///
/// Pure component algebra; geometry-independent.
pub fn identity_3_5<S: Real>(t_comp: &[S], n: usize, r: usize) -> (S, S) {
    let t = |i: usize, j: usize, k: usize| t_comp[(i * n + j) * r + k];
    let mut lhs = S::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..r {
                lhs += t(i, j, k) * t(i, j, k);
            }
        }
    }
    let mut rhs = S::zero();
    for k in 0..r {
        let trace: S = (0..n).fold(S::zero(), |s, i| s + t(i, i, k));
        rhs += S::of(0.5) * trace * trace; // (1/2) n^2 |H|^2 contribution per t
        let alt = t(0, 0, k) - (1..n).fold(S::zero(), |s, i| s + t(i, i, k));
        rhs += S::of(0.5) * alt * alt;
        for j in 1..n {
            rhs += S::of(2.0) * t(0, j, k) * t(0, j, k);
        }
        for i in 1..n {
            for j in (i + 1)..n {
                rhs -= S::of(2.0) * (t(i, i, k) * t(j, j, k) - t(i, j, k) * t(i, j, k));
            }
        }
    }
    (lhs, rhs)
}

/// Residual |lhs - rhs| of the component identity, relative to scale.
pub fn identity_3_5_check<S: Real>(t_comp: &[S], n: usize, r: usize) -> S {
    let (lhs, rhs) = identity_3_5(t_comp, n, r);
    (lhs - rhs).abs() / (S::one() + lhs.abs() + rhs.abs())
}

/// Full pointwise analysis: frames, tensors, audit, scalar block.
pub fn analyze<S: Real>(
    prob: &SubmersionProblem<S>,
    p: &[S],
    opts: &AnalysisOptions<S>,
) -> Result<SubmersionAnalysis<S>> {
    let ws = Workspace::new(prob, p)?;
    let (n, r) = (ws.n, ws.r);
    if opts.v1_index >= n.max(1) || opts.h1_index >= r.max(1) {
        return Err(Error::InvalidProblem("designated frame index out of range".into()));
    }
    let tensors = compute_oneill(&ws)?;

    // isometry-on-horizontal residual (submersion invariant)
    let jac = prob.differential(p)?;
    let fp = prob.map_at(p)?;
    let g2 = prob.target.metric_at(&fp)?;
    for i in 0..r {
        for j in 0..r {
            let want = if i == j { S::one() } else { S::zero() };
            let fi = jac.matvec(&ws.horizontal.vectors[i]);
            let fj = jac.matvec(&ws.horizontal.vectors[j]);
            if (g2.inner(&fi, &fj) - want).abs() > S::of(1e-8) {
                return Err(Error::InvalidProblem(format!(
                    "map is not a Riemannian submersion at {p:?}: horizontal isometry violated"
                )));
            }
        }
    }

    let hvec = mean_curvature(&tensors, &ws.horizontal);
    let h_norm_sq = ws.g.inner(&hvec, &hvec);
    let delta = delta_n_with(&ws, &tensors)?;

    let mut norm_tv_sq = S::zero();
    for j in 0..n {
        for i in 0..r {
            for k in 0..n {
                let v = tensors.t_vh[(j * r + i) * n + k];
                norm_tv_sq += v * v;
            }
        }
    }
    let mut norm_ah_sq = S::zero();
    for i in 0..r {
        for j in 0..n {
            for t in 0..r {
                let v = tensors.a_hv[(i * n + j) * r + t];
                norm_ah_sq += v * v;
            }
        }
    }

    // Source curvature at p, target curvature at F(p).
    let curv1 = riemann(&prob.source, p, DiffBackend::Jet)?;
    let curv2 = riemann(&prob.target, &fp, DiffBackend::Jet)?;
    let pushed: Vec<Vector<S>> =
        (0..r).map(|i| jac.matvec(&ws.horizontal.vectors[i])).collect();

    let r_m1 = |a: &Vector<S>, b: &Vector<S>, c: &Vector<S>, d: &Vector<S>| curv1.pair(a, b, c, d);
    let r_perp = |i: usize, j: usize, k: usize, l: usize| {
        curv2.pair(&pushed[i], &pushed[j], &pushed[k], &pushed[l])
    };

    let vv = &ws.vertical.vectors;
    let hv = &ws.horizontal.vectors;

    let mut tau_v_m1 = S::zero();
    for i in 0..n {
        for j in 0..n {
            tau_v_m1 += r_m1(&vv[i], &vv[j], &vv[j], &vv[i]);
        }
    }
    tau_v_m1 *= S::of(0.5);
    let mut tau_h_m1 = S::zero();
    for i in 0..r {
        for j in 0..r {
            tau_h_m1 += r_m1(&hv[i], &hv[j], &hv[j], &hv[i]);
        }
    }
    tau_h_m1 *= S::of(0.5);
    let mut tau_h_perp = S::zero();
    for i in 0..r {
        for j in 0..r {
            tau_h_perp += r_perp(i, j, j, i);
        }
    }
    tau_h_perp *= S::of(0.5);
    let mut mixed_sum = S::zero();
    for i in 0..r {
        for j in 0..n {
            mixed_sum += r_m1(&hv[i], &vv[j], &vv[j], &hv[i]);
        }
    }
    let v1 = opts.v1_index;
    let h1 = opts.h1_index;
    let mut ric_v_m1 = S::zero();
    for j in 0..n {
        ric_v_m1 += r_m1(&vv[v1], &vv[j], &vv[j], &vv[v1]);
    }
    let mut ric_h_m1 = S::zero();
    let mut ric_h_perp = S::zero();
    for j in 0..r {
        ric_h_m1 += r_m1(&hv[h1], &hv[j], &hv[j], &hv[h1]);
        ric_h_perp += r_perp(h1, j, j, h1);
    }

    // Sign audit.
    let sign_profile = audit_signs(&ws, &tensors, &curv1, &r_perp, opts.fiber.as_ref())?;
    let s23 = S::of(sign_profile.s23 as f64);

    // Fiber-intrinsic curvature along the audited Gauss-style relation:
    // R^{ker}(a,b,c,d) = R^{M1}(a,b,c,d) - s23 * [g(T_a d, T_b c) - g(T_b d, T_a c)].
    let t_inner = |a: usize, b: usize, c: usize, d: usize| {
        (0..r).fold(S::zero(), |s, t| {
            s + tensors.t_comp[(a * n + b) * r + t] * tensors.t_comp[(c * n + d) * r + t]
        })
    };
    let r_ker = |a: usize, b: usize, c: usize, d: usize| {
        let corr = t_inner(a, d, b, c) - t_inner(b, d, a, c);
        r_m1(&vv[a], &vv[b], &vv[c], &vv[d]) - s23 * corr
    };
    let mut tau_v_ker = S::zero();
    for i in 0..n {
        for j in 0..n {
            tau_v_ker += r_ker(i, j, j, i);
        }
    }
    tau_v_ker *= S::of(0.5);
    let mut ric_v_ker = S::zero();
    for j in 0..n {
        ric_v_ker += r_ker(v1, j, j, v1);
    }
    let ric_v_ker_direct = opts.fiber.as_ref().map(|f| {
        let kappa = f.sec(p);
        kappa * S::of((n.max(1) - 1) as f64)
    });

    Ok(SubmersionAnalysis {
        point: p.to_vec(),
        n,
        r,
        v1,
        h1,
        g: ws.g.clone(),
        vertical: ws.vertical.clone(),
        horizontal: ws.horizontal.clone(),
        t_comp: tensors.t_comp,
        a_comp: tensors.a_comp,
        t_vh: tensors.t_vh,
        a_hv: tensors.a_hv,
        property_residual: tensors.property_residual,
        mean_curvature: hvec,
        h_norm_sq,
        delta_n: delta,
        norm_tv_sq,
        norm_ah_sq,
        tau_v_ker,
        tau_v_m1,
        tau_h_perp,
        tau_h_m1,
        ric_v_ker,
        ric_v_m1,
        ric_h_perp,
        ric_h_m1,
        ric_v_ker_direct,
        mixed_sum,
        sign_profile,
    })
}

/// Empirically determine the sign on the T/A correction blocks of the three
/// curvature relations. For each relation the sign minimizing the worst
/// residual over sampled index tuples is selected; if neither sign reaches
/// AUDIT_TOL * scale the audit fails.
fn audit_signs<S, FP>(
    ws: &Workspace<S>,
    tensors: &OneillTensors<S>,
    curv1: &CurvatureAt<S>,
    r_perp: &FP,
    fiber: Option<&FiberCurvature<S>>,
) -> Result<SignProfile<S>>
where
    S: Real,
    FP: Fn(usize, usize, usize, usize) -> S,
{
    let (n, r) = (ws.n, ws.r);
    let vv = &ws.vertical.vectors;
    let hv = &ws.horizontal.vectors;
    let mut profile = SignProfile::default();

    let t_inner = |a: usize, b: usize, c: usize, d: usize| {
        (0..r).fold(S::zero(), |s, t| {
            s + tensors.t_comp[(a * n + b) * r + t] * tensors.t_comp[(c * n + d) * r + t]
        })
    };
    let a_inner = |a: usize, b: usize, c: usize, d: usize| {
        (0..n).fold(S::zero(), |s, al| {
            s + tensors.a_comp[(a * r + b) * n + al] * tensors.a_comp[(c * r + d) * n + al]
        })
    };

    // Relation between total and fiber curvature; auditable when the fiber
    // curvature is known independently (or trivially when n < 2).
    if n >= 2 {
        if let Some(f) = fiber {
            let kappa = f.sec(&ws.p);
            let mut worst = [S::zero(); 2];
            let mut scale = S::one();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let lhs = curv1.pair(&vv[a], &vv[b], &vv[c], &vv[d]);
                            let ker = kappa
                                * (delta::<S>(b, c) * delta::<S>(a, d)
                                    - delta::<S>(a, c) * delta::<S>(b, d));
                            let corr = t_inner(a, d, b, c) - t_inner(b, d, a, c);
                            scale = scale.max(lhs.abs()).max(ker.abs()).max(corr.abs());
                            worst[0] = worst[0].max((lhs - (ker + corr)).abs());
                            worst[1] = worst[1].max((lhs - (ker - corr)).abs());
                        }
                    }
                }
            }
            pick_sign(&mut profile, 0, worst, scale)?;
        }
    }

    // Relation between total and base curvature (always auditable).
    {
        let mut worst = [S::zero(); 2];
        let mut scale = S::one();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        let lhs = curv1.pair(&hv[a], &hv[b], &hv[c], &hv[d]);
                        let base = r_perp(a, b, c, d);
                        let corr = -S::of(2.0) * a_inner(a, b, c, d) + a_inner(b, c, a, d)
                            - a_inner(a, c, b, d);
                        scale = scale.max(lhs.abs()).max(base.abs()).max(corr.abs());
                        worst[0] = worst[0].max((lhs - (base + corr)).abs());
                        worst[1] = worst[1].max((lhs - (base - corr)).abs());
                    }
                }
            }
        }
        pick_sign(&mut profile, 1, worst, scale)?;
    }

    // Mixed relation: R^{M1}(Y1, U1, Y2, U2) against the nabla-T, nabla-A and
    // quadratic T/A block, sign applied to the whole right-hand side.
    {
        let mut worst = [S::zero(); 2];
        let mut scale = S::one();
        for a in 0..r {
            for b in 0..n {
                for c in 0..r {
                    for d in 0..n {
                        let lhs = curv1.pair(&hv[a], &vv[b], &hv[c], &vv[d]);
                        let ntv = nabla_t(ws, tensors, &hv[a], b, d)?;
                        let term_t = ws.g.inner(&ntv, &hv[c]);
                        let nav = nabla_a(ws, tensors, &vv[b], a, c)?;
                        let term_a = ws.g.inner(&nav, &vv[d]);
                        let tv_b_a = frame_combo(ws, &tensors.t_vh, b, a, true);
                        let tv_d_c = frame_combo(ws, &tensors.t_vh, d, c, true);
                        let term_tt = ws.g.inner(&tv_b_a, &tv_d_c);
                        let av_c_d = frame_combo(ws, &tensors.a_hv, c, d, false);
                        let av_a_b = frame_combo(ws, &tensors.a_hv, a, b, false);
                        let term_aa = ws.g.inner(&av_c_d, &av_a_b);
                        let rhs = term_t + term_a - term_tt + term_aa;
                        scale = scale.max(lhs.abs()).max(rhs.abs());
                        worst[0] = worst[0].max((lhs - rhs).abs());
                        worst[1] = worst[1].max((lhs + rhs).abs());
                    }
                }
            }
        }
        pick_sign(&mut profile, 2, worst, scale)?;
    }
    Ok(profile)
}

fn delta<S: Real>(i: usize, j: usize) -> S {
    if i == j {
        S::one()
    } else {
        S::zero()
    }
}

/// Reconstruct T_{v_j} h_i (vertical) or A_{h_i} v_j (horizontal) from the
/// stored mixed components.
fn frame_combo<S: Real>(
    ws: &Workspace<S>,
    comps: &[S],
    first: usize,
    second: usize,
    vertical_output: bool,
) -> Vector<S> {
    let dim = ws.p.len();
    let mut out = Vector::zeros(dim);
    if vertical_output {
        // comps = t_vh[j][i][k]; first = j, second = i
        for k in 0..ws.n {
            out.axpy(comps[(first * ws.r + second) * ws.n + k], &ws.vertical.vectors[k]);
        }
    } else {
        // comps = a_hv[i][j][t]; first = i, second = j
        for t in 0..ws.r {
            out.axpy(comps[(first * ws.n + second) * ws.r + t], &ws.horizontal.vectors[t]);
        }
    }
    out
}

fn pick_sign<S: Real>(
    profile: &mut SignProfile<S>,
    which: usize,
    worst: [S; 2],
    scale: S,
) -> Result<()> {
    let tol = S::of(AUDIT_TOL) * scale;
    let tie = (worst[0] - worst[1]).abs() <= tol * S::of(1e-3);
    let (sign, best) = if tie {
        // Degenerate corrections: keep the default sign.
        (profile_sign(profile, which), worst[0].min(worst[1]))
    } else if worst[0] < worst[1] {
        (1, worst[0])
    } else {
        (-1, worst[1])
    };
    if best > tol {
        return Err(Error::AuditFailure(format!(
            "relation {} residual {:?} exceeds tolerance {:?} for both signs",
            [2.3f64, 2.4, 2.5][which],
            best.as_f64(),
            tol.as_f64()
        )));
    }
    match which {
        0 => profile.s23 = sign,
        1 => profile.s24 = sign,
        _ => profile.s25 = sign,
    }
    profile.residuals[which] = best / scale;
    profile.determined[which] = !tie;
    Ok(())
}

fn profile_sign<S: Real>(profile: &SignProfile<S>, which: usize) -> i8 {
    match which {
        0 => profile.s23,
        1 => profile.s24,
        _ => profile.s25,
    }
}
