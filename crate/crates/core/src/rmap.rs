//! Pointwise analysis of a Riemannian map: kernel/horizontal splitting in the
//! source, range/range-perp splitting in the target, the second fundamental
//! form through the pull-back connection, its trace and norms, the Gauss
//! equation residual, and the horizontal/range Ricci pair.

use crate::chart::ChartManifold;
use crate::curvature::{christoffel, covariant_derivative, riemann, DiffBackend};
use crate::error::{Error, Result};
use crate::expr::Expression;
use crate::fd;
use crate::linalg::{project, Frame, FrameLabel, SymMat, Vector};
use crate::scalar::Real;
use crate::submersion::{differential_of, SeededSplit};

#[derive(Debug, Clone)]
pub struct RMapProblem<S> {
    pub source: ChartManifold<S>,
    pub target: ChartManifold<S>,
    pub map: Vec<Expression<S>>,
    /// Declared constant rank r < min(m1, m2); checked, never inferred.
    pub declared_rank: usize,
}

impl<S: Real> RMapProblem<S> {
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
        if self.declared_rank >= self.source.dim.min(self.target.dim) {
            return Err(Error::InvalidProblem(
                "declared rank must be strictly below min(m1, m2)".into(),
            ));
        }
        Ok(())
    }

    pub fn map_at(&self, p: &[S]) -> Result<Vec<S>> {
        self.map.iter().map(|e| e.eval(p)).collect()
    }

    /// Differential F_* as an m2 x m1 matrix of exact jet gradients.
    pub fn differential(&self, p: &[S]) -> Result<crate::linalg::Mat<S>> {
        differential_of(&self.map, self.source.dim, p)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MapAnalysisOptions {
    pub h1_index: usize,
    /// Number of Gauss-equation index tuples is capped at r^4; this many
    /// suffices at the dimensions in play.
    pub gauss_tuples: usize,
}

impl Default for MapAnalysisOptions {
    fn default() -> Self {
        Self { h1_index: 0, gauss_tuples: usize::MAX }
    }
}

#[derive(Debug, Clone)]
pub struct MapAnalysis<S> {
    pub point: Vec<S>,
    pub image: Vec<S>,
    pub m1: usize,
    pub m2: usize,
    pub r: usize,
    pub h1: usize,
    pub g1: SymMat<S>,
    pub g2: SymMat<S>,
    pub kernel: Frame<S>,
    pub horizontal: Frame<S>,
    /// F_* h_i in target coordinates; g2-orthonormal by the defining isometry.
    pub range: Frame<S>,
    pub range_perp: Frame<S>,
    /// B_ij^alpha = g2((nabla F_*)(h_i, h_j), V_alpha), flattened [i][j][alpha].
    pub b_comp: Vec<S>,
    /// Raw (nabla F_*)(h_i, h_j) vectors in target coordinates, [i * r + j].
    pub b_vectors: Vec<Vector<S>>,
    pub trace_b: Vector<S>,
    pub norm_trace_b_sq: S,
    pub norm_b_sq: S,
    pub b_symmetry_residual: S,
    /// Worst leakage of B into the range (must be ~0: B is range-perp valued).
    pub b_range_residual: S,
    /// Worst |g1(X,Y) - g2(F_* X, F_* Y)| over horizontal frame pairs.
    pub isometry_residual: S,
    pub ric_h: S,
    pub ric_r: S,
    pub gauss_residual: S,
    pub gauss_sign: i8,
}

impl<S: Real> MapAnalysis<S> {
    #[inline]
    pub fn b(&self, i: usize, j: usize, alpha: usize) -> S {
        self.b_comp[(i * self.r + j) * (self.m2 - self.r) + alpha]
    }

    pub fn n_perp(&self) -> usize {
        self.m2 - self.r
    }

    pub fn max_b_abs(&self) -> S {
        self.b_comp.iter().fold(S::zero(), |m, x| m.max(x.abs()))
    }

    /// Pointwise equality conditions of the Chen-Ricci bound at h1:
    /// B_{1i}^alpha = 0 for i != 1 and B_11^alpha = sum_{i != 1} B_ii^alpha.
    pub fn b_equality_conditions(&self, tol: S) -> bool {
        let one = self.h1;
        for alpha in 0..self.n_perp() {
            let mut rest = S::zero();
            for i in 0..self.r {
                if i != one {
                    rest += self.b(i, i, alpha);
                }
            }
            if (self.b(one, one, alpha) - rest).abs() > tol {
                return false;
            }
            for i in 0..self.r {
                if i != one && self.b(one, i, alpha).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// Both sides of the component identity for |B|^2 (mirror of the submersion
/// identity with the trace over the horizontal indices).
pub fn identity_eq5<S: Real>(b_comp: &[S], r: usize, n_perp: usize) -> (S, S) {
    let b = |i: usize, j: usize, a: usize| b_comp[(i * r + j) * n_perp + a];
    let mut lhs = S::zero();
    for i in 0..r {
        for j in 0..r {
            for a in 0..n_perp {
                lhs += b(i, j, a) * b(i, j, a);
            }
        }
    }
    let mut rhs = S::zero();
    for a in 0..n_perp {
        let trace: S = (0..r).fold(S::zero(), |s, i| s + b(i, i, a));
        rhs += S::of(0.5) * trace * trace;
        let alt = b(0, 0, a) - (1..r).fold(S::zero(), |s, i| s + b(i, i, a));
        rhs += S::of(0.5) * alt * alt;
        for i in 1..r {
            rhs += S::of(2.0) * b(0, i, a) * b(0, i, a);
        }
        for i in 1..r {
            for j in (i + 1)..r {
                rhs -= S::of(2.0) * (b(i, i, a) * b(j, j, a) - b(i, j, a) * b(i, j, a));
            }
        }
    }
    (lhs, rhs)
}

pub fn identity_eq5_check<S: Real>(b_comp: &[S], r: usize, n_perp: usize) -> S {
    let (lhs, rhs) = identity_eq5(b_comp, r, n_perp);
    (lhs - rhs).abs() / (S::one() + lhs.abs() + rhs.abs())
}

/// Full pointwise analysis of a Riemannian map.
pub fn analyze_map<S: Real>(
    prob: &RMapProblem<S>,
    p: &[S],
    opts: &MapAnalysisOptions,
) -> Result<MapAnalysis<S>> {
    prob.validate()?;
    if !prob.source.contains(p) {
        return Err(Error::Domain(format!("point {p:?} outside the source chart domain")));
    }
    let m1 = prob.source.dim;
    let m2 = prob.target.dim;
    let r = prob.declared_rank;
    if opts.h1_index >= r {
        return Err(Error::InvalidProblem("designated frame index out of range".into()));
    }

    // Source splitting with frozen seeds (errors RankDeficiency on mismatch).
    let seeds = SeededSplit::prepare(&prob.source, &prob.map, r, p)?;
    let (kernel, horizontal) = seeds.frames(&prob.source, &prob.map, p)?;
    let g1 = prob.source.metric_at(p)?;
    let fp = prob.map_at(p)?;
    if !prob.target.contains(&fp) {
        return Err(Error::Domain(format!("image {fp:?} outside the target chart domain")));
    }
    let g2 = prob.target.metric_at(&fp)?;
    let jac = differential_of(&prob.map, m1, p)?;

    // Range frame = pushed horizontal frame; must be g2-orthonormal by the
    // defining isometry of a Riemannian map.
    let pushed: Vec<Vector<S>> = (0..r).map(|i| jac.matvec(&horizontal.vectors[i])).collect();
    let mut isometry_residual = S::zero();
    for i in 0..r {
        for j in 0..r {
            let want = if i == j { S::one() } else { S::zero() };
            isometry_residual =
                isometry_residual.max((g2.inner(&pushed[i], &pushed[j]) - want).abs());
        }
    }
    if isometry_residual > S::of(1e-8) {
        return Err(Error::InvalidProblem(format!(
            "map is not Riemannian at {p:?}: isometry residual {:?}",
            isometry_residual.as_f64()
        )));
    }
    let range = Frame { vectors: pushed.clone(), labels: vec![FrameLabel::Range; r] };

    // Range-perp frame from coordinate seeds, g2-orthogonal to the range.
    let range_perp = {
        let mut vectors = Vec::with_capacity(m2 - r);
        for k in 0..m2 {
            if vectors.len() == m2 - r {
                break;
            }
            let e = Vector::basis(m2, k);
            let mut w = e.sub(&project(&e, &range, &g2));
            let frame_sofar = Frame { vectors: vectors.clone(), labels: vec![] };
            w = w.sub(&project(&w, &frame_sofar, &g2));
            let norm = g2.norm(&w);
            if norm < S::of(1e-6) {
                continue;
            }
            let mut w = w.scale(S::one() / norm);
            // one re-orthogonalization pass
            w = w.sub(&project(&w, &range, &g2));
            w = w.sub(&project(&w, &frame_sofar, &g2));
            let norm = g2.norm(&w);
            vectors.push(w.scale(S::one() / norm));
        }
        if vectors.len() != m2 - r {
            return Err(Error::FrameExtension("could not complete range-perp frame".into()));
        }
        Frame { labels: vec![FrameLabel::RangePerp; vectors.len()], vectors }
    };

    // Second fundamental form:
    // (nabla F_*)(h_i, h_j) = nabla^F_{h_i} (F_* h_j field) - F_*(nabla^1_{h_i} h_j field)
    // with nabla^F realized through target Christoffels at F(p).
    let ch1 = christoffel(&prob.source, p, DiffBackend::Jet)?;
    let ch2 = christoffel(&prob.target, &fp, DiffBackend::Jet)?;
    let pushed_field = |j: usize| {
        let seeds = &seeds;
        move |q: &[S]| -> Result<Vec<S>> {
            let (_, h) = seeds.frames(&prob.source, &prob.map, q)?;
            let jq = differential_of(&prob.map, m1, q)?;
            Ok(jq.matvec(&h.vectors[j]).c)
        }
    };
    let horizontal_field = |j: usize| {
        let seeds = &seeds;
        move |q: &[S]| -> Result<Vec<S>> {
            let (_, h) = seeds.frames(&prob.source, &prob.map, q)?;
            Ok(h.vectors[j].c.clone())
        }
    };
    let mut b_vectors: Vec<Vector<S>> = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            let wf = pushed_field(j);
            // coordinate derivative of the pushed field along h_i
            let dv = fd::dir_derivative(&wf, p, &horizontal.vectors[i].c, S::of(1e-3))?;
            let w0 = Vector::new(wf(p)?);
            // target connection term Gamma2(F_* h_i, W)
            let fhi = &pushed[i];
            let mut nabla_f = Vector::new(dv);
            for k in 0..m2 {
                let mut s = S::zero();
                for a in 0..m2 {
                    for b in 0..m2 {
                        s += ch2.get(k, a, b) * fhi.c[a] * w0.c[b];
                    }
                }
                nabla_f.c[k] += s;
            }
            // F_* (nabla^1_{h_i} h_j)
            let hf = horizontal_field(j);
            let nabla1 = covariant_derivative(&ch1, &hf, &horizontal.vectors[i], p)?;
            let pushed_nabla1 = jac.matvec(&nabla1);
            b_vectors.push(nabla_f.sub(&pushed_nabla1));
        }
    }

    let n_perp = m2 - r;
    let mut b_comp = vec![S::zero(); r * r * n_perp];
    let mut b_range_residual = S::zero();
    let mut b_symmetry_residual = S::zero();
    for i in 0..r {
        for j in 0..r {
            let bij = &b_vectors[i * r + j];
            for (alpha, v) in range_perp.vectors.iter().enumerate() {
                b_comp[(i * r + j) * n_perp + alpha] = g2.inner(bij, v);
            }
            for v in &range.vectors {
                b_range_residual = b_range_residual.max(g2.inner(bij, v).abs());
            }
            let bji = &b_vectors[j * r + i];
            b_symmetry_residual = b_symmetry_residual.max(bij.sub(bji).norm());
        }
    }

    let mut trace_b = Vector::zeros(m2);
    for i in 0..r {
        trace_b = trace_b.add(&b_vectors[i * r + i]);
    }
    let norm_trace_b_sq = g2.inner(&trace_b, &trace_b);
    let mut norm_b_sq = S::zero();
    for bij in &b_vectors {
        norm_b_sq += g2.inner(bij, bij);
    }

    // Curvatures and the Ricci pair.
    let curv1 = riemann(&prob.source, p, DiffBackend::Jet)?;
    let curv2 = riemann(&prob.target, &fp, DiffBackend::Jet)?;
    let h1 = opts.h1_index;
    let hv = &horizontal.vectors;
    let mut ric_h = S::zero();
    let mut ric_r = S::zero();
    for i in 0..r {
        ric_h += curv1.pair(&hv[i], &hv[h1], &hv[h1], &hv[i]);
        ric_r += curv2.pair(&pushed[i], &pushed[h1], &pushed[h1], &pushed[i]);
    }

    // Gauss equation residual with the audited sign on the B-block.
    let mut worst = [S::zero(); 2];
    let mut scale = S::one();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                for d in 0..r {
                    let lhs = curv2.pair(&pushed[a], &pushed[b], &pushed[c], &pushed[d]);
                    let base = curv1.pair(&hv[a], &hv[b], &hv[c], &hv[d]);
                    let corr = g2.inner(&b_vectors[a * r + c], &b_vectors[b * r + d])
                        - g2.inner(&b_vectors[a * r + d], &b_vectors[b * r + c]);
                    scale = scale.max(lhs.abs()).max(base.abs()).max(corr.abs());
                    worst[0] = worst[0].max((lhs - (base + corr)).abs());
                    worst[1] = worst[1].max((lhs - (base - corr)).abs());
                }
            }
        }
    }
    let tie = (worst[0] - worst[1]).abs() <= S::of(1e-9) * scale;
    let (gauss_sign, gauss_residual) = if tie || worst[0] <= worst[1] {
        (1, worst[0])
    } else {
        (-1, worst[1])
    };

    Ok(MapAnalysis {
        point: p.to_vec(),
        image: fp,
        m1,
        m2,
        r,
        h1,
        g1,
        g2,
        kernel,
        horizontal,
        range,
        range_perp,
        b_comp,
        b_vectors,
        trace_b,
        norm_trace_b_sq,
        norm_b_sq,
        b_symmetry_residual,
        b_range_residual,
        isometry_residual,
        ric_h,
        ric_r,
        gauss_residual,
        gauss_sign,
    })
}
