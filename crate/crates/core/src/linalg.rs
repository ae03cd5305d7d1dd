//! Small fixed-dimension dense linear algebra (dims <= 8).
//!
//! Metric-aware inner products, Gram-Schmidt orthonormalization, SVD-based
//! kernel/complement splitting and projections. Everything is written for
//! analytic charts at desk scale: singular values separate cleanly, so plain
//! Jacobi iterations are accurate and deterministic.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative threshold for rank decisions: sigma < RANK_TOL * sigma_max.
pub const RANK_TOL: f64 = 1e-9;
/// Gram-Schmidt residual threshold.
pub const GS_TOL: f64 = 1e-10;

/// Dense column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<S> {
    pub c: Vec<S>,
}

impl<S: Real> Vector<S> {
    pub fn new(c: Vec<S>) -> Self {
        Self { c }
    }

    pub fn zeros(n: usize) -> Self {
        Self { c: vec![S::zero(); n] }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.c[i] = S::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn dot(&self, other: &Self) -> S {
        self.c.iter().zip(&other.c).fold(S::zero(), |acc, (a, b)| acc + *a * *b)
    }

    pub fn scale(&self, s: S) -> Self {
        Self { c: self.c.iter().map(|x| *x * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { c: self.c.iter().zip(&other.c).map(|(a, b)| *a + *b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { c: self.c.iter().zip(&other.c).map(|(a, b)| *a - *b).collect() }
    }

    /// self += s * other
    pub fn axpy(&mut self, s: S, other: &Self) {
        for (a, b) in self.c.iter_mut().zip(&other.c) {
            *a += s * *b;
        }
    }

    pub fn norm(&self) -> S {
        self.dot(self).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }
}

/// Dense rectangular matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<S> {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<S>,
}

impl<S: Real> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, a: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut a = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            a.extend(row);
        }
        Self { rows: r, cols: c, a }
    }

    pub fn col(&self, j: usize) -> Vector<S> {
        Vector::new((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn set_col(&mut self, j: usize, v: &Vector<S>) {
        for i in 0..self.rows {
            self[(i, j)] = v.c[i];
        }
    }

    pub fn matvec(&self, v: &Vector<S>) -> Vector<S> {
        assert_eq!(self.cols, v.dim());
        let mut out = Vector::zeros(self.rows);
        for i in 0..self.rows {
            let mut s = S::zero();
            for j in 0..self.cols {
                s += self[(i, j)] * v.c[j];
            }
            out.c[i] = s;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == S::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> S {
        self.a.iter().fold(S::zero(), |m, x| m.max(x.abs()))
    }
}

impl<S> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.a[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.a[i * self.cols + j]
    }
}

/// Symmetric matrix; stored dense, symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat<S> {
    pub n: usize,
    pub a: Vec<S>,
}

impl<S: Real> SymMat<S> {
    /// Build from a full square matrix; fails if asymmetry exceeds 1e-12 relative.
    pub fn new(m: Mat<S>) -> Result<Self> {
        assert_eq!(m.rows, m.cols);
        let n = m.rows;
        let scale = S::one() + m.max_abs();
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (m[(i, j)] - m[(j, i)]).abs();
                if d > S::of(1e-12) * scale {
                    return Err(Error::DegenerateInput(format!(
                        "matrix not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {d:?}"
                    )));
                }
            }
        }
        let mut a = m.a;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = (a[i * n + j] + a[j * n + i]) * S::of(0.5);
                a[i * n + j] = avg;
                a[j * n + i] = avg;
            }
        }
        Ok(Self { n, a })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Mat::identity(n)).unwrap()
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.a[i * self.n + j]
    }

    pub fn as_mat(&self) -> Mat<S> {
        Mat { rows: self.n, cols: self.n, a: self.a.clone() }
    }

    pub fn matvec(&self, v: &Vector<S>) -> Vector<S> {
        self.as_mat().matvec(v)
    }

    /// Metric inner product g(u, v).
    pub fn inner(&self, u: &Vector<S>, v: &Vector<S>) -> S {
        let mut s = S::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.get(i, j) * u.c[i] * v.c[j];
            }
        }
        s
    }

    pub fn norm(&self, v: &Vector<S>) -> S {
        self.inner(v, v).max(S::zero()).sqrt()
    }

    /// Eigenvalues and eigenvectors via cyclic Jacobi; columns of the returned
    /// matrix are eigenvectors, eigenvalues ascending.
    pub fn eigen(&self) -> (Vec<S>, Mat<S>) {
        let n = self.n;
        let mut a = self.as_mat();
        let mut v = Mat::identity(n);
        let eps = S::of(1e-15);
        for _sweep in 0..60 {
            let mut off = S::zero();
            for i in 0..n {
                for j in (i + 1)..n {
                    off = off.max(a[(i, j)].abs());
                }
            }
            let scale = a.max_abs().max(S::of(1e-300));
            if off <= eps * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq.abs() <= eps * scale {
                        continue;
                    }
                    let app = a[(p, p)];
                    let aqq = a[(q, q)];
                    let theta = S::of(0.5) * (S::of(2.0) * apq).atan2(aqq - app);
                    let (s, c) = theta.sin_cos();
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
        let vals: Vec<S> = idx.iter().map(|&i| a[(i, i)]).collect();
        let mut vecs = Mat::zeros(n, n);
        for (newj, &oldj) in idx.iter().enumerate() {
            for i in 0..n {
                vecs[(i, newj)] = v[(i, oldj)];
            }
        }
        (vals, vecs)
    }

    pub fn is_positive_definite(&self) -> bool {
        let (vals, _) = self.eigen();
        vals.iter().all(|&l| l > S::zero())
    }

    /// Inverse via Gauss-Jordan with partial pivoting; errors if the spectral
    /// condition number exceeds 1e12.
    pub fn inverse(&self) -> Result<SymMat<S>> {
        let (vals, _) = self.eigen();
        let lmin = vals.iter().fold(S::infinity(), |m, x| m.min(x.abs()));
        let lmax = vals.iter().fold(S::zero(), |m, x| m.max(x.abs()));
        if lmin <= S::zero() || lmax / lmin > S::of(1e12) {
            return Err(Error::SingularMetric(format!(
                "condition number {:?} exceeds 1e12",
                (lmax / lmin).as_f64()
            )));
        }
        let inv = gauss_jordan_inverse(&self.as_mat())?;
        SymMat::new(inv)
    }
}

/// Plain Gauss-Jordan inverse with partial pivoting.
pub fn gauss_jordan_inverse<S: Real>(m: &Mat<S>) -> Result<Mat<S>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = Mat::identity(n);
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if a[(r, col)].abs() > a[(piv, col)].abs() {
                piv = r;
            }
        }
        if a[(piv, col)].abs() < S::of(1e-300) {
            return Err(Error::SingularMetric("pivot underflow in inversion".into()));
        }
        if piv != col {
            for j in 0..n {
                a.a.swap(col * n + j, piv * n + j);
                inv.a.swap(col * n + j, piv * n + j);
            }
        }
        let d = a[(col, col)];
        for j in 0..n {
            a[(col, j)] /= d;
            inv[(col, j)] /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[(r, col)];
            if f == S::zero() {
                continue;
            }
            for j in 0..n {
                let acj = a[(col, j)];
                let icj = inv[(col, j)];
                a[(r, j)] -= f * acj;
                inv[(r, j)] -= f * icj;
            }
        }
    }
    Ok(inv)
}

/// Singular value decomposition by one-sided Jacobi: returns (sigma, V) where
/// sigma[k] = |A v_k| and V's columns are right-singular vectors. Working on
/// the columns directly keeps tiny singular values at roundoff level instead
/// of the sqrt(eps) floor an A^T A eigensolve would impose.
pub fn svd_right<S: Real>(a: &Mat<S>) -> (Vec<S>, Mat<S>) {
    let n = a.cols;
    let mut u = a.clone();
    let mut v = Mat::identity(n);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let cp = u.col(p);
                let cq = u.col(q);
                let app = cp.dot(&cp);
                let aqq = cq.dot(&cq);
                let apq = cp.dot(&cq);
                if apq.abs() <= S::of(1e-300) || apq.abs() <= S::of(1e-16) * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let theta = S::of(0.5) * (S::of(2.0) * apq).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                for k in 0..u.rows {
                    let ukp = u[(k, p)];
                    let ukq = u[(k, q)];
                    u[(k, p)] = c * ukp - s * ukq;
                    u[(k, q)] = s * ukp + c * ukq;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<(S, usize)> = (0..n).map(|j| (u.col(j).norm(), j)).collect();
    sv.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let sigma: Vec<S> = sv.iter().map(|x| x.0).collect();
    let mut vs = Mat::zeros(n, n);
    for (newj, &(_, oldj)) in sv.iter().enumerate() {
        for i in 0..n {
            vs[(i, newj)] = v[(i, oldj)];
        }
    }
    (sigma, vs)
}

/// Numerical rank of a linear map under the RANK_TOL threshold.
pub fn numerical_rank<S: Real>(sigma: &[S]) -> usize {
    let smax = sigma.iter().fold(S::zero(), |m, x| m.max(*x));
    if smax == S::zero() {
        return 0;
    }
    sigma.iter().filter(|&&s| s >= S::of(RANK_TOL) * smax).count()
}

/// Frame vector labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameLabel {
    Vertical,
    Horizontal,
    Range,
    RangePerp,
}

/// Metric-orthonormal ordered family of vectors.
#[derive(Debug, Clone)]
pub struct Frame<S> {
    pub vectors: Vec<Vector<S>>,
    pub labels: Vec<FrameLabel>,
}

impl<S: Real> Frame<S> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Max deviation from metric-orthonormality.
    pub fn orthonormality_residual(&self, g: &SymMat<S>) -> S {
        let mut worst = S::zero();
        for i in 0..self.len() {
            for j in 0..self.len() {
                let d = if i == j { S::one() } else { S::zero() };
                worst = worst.max((g.inner(&self.vectors[i], &self.vectors[j]) - d).abs());
            }
        }
        worst
    }
}

/// Classical Gram-Schmidt with one re-orthogonalization pass.
///
/// Span and input ordering are preserved; errors with `DegenerateInput` if a
/// residual collapses below GS_TOL.
pub fn gram_schmidt<S: Real>(
    vectors: &[Vector<S>],
    g: &SymMat<S>,
    label: FrameLabel,
) -> Result<Frame<S>> {
    let mut out: Vec<Vector<S>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let input_norm = g.norm(v);
        let mut w = v.clone();
        for pass in 0..2 {
            for e in &out {
                let c = g.inner(&w, e);
                w.axpy(-c, e);
            }
            let r = g.norm(&w);
            if r < S::of(GS_TOL) * (S::one() + input_norm) {
                return Err(Error::DegenerateInput(format!(
                    "gram_schmidt: residual {:?} below threshold",
                    r.as_f64()
                )));
            }
            if pass == 1 {
                w = w.scale(S::one() / r);
            }
        }
        out.push(w);
    }
    let labels = vec![label; out.len()];
    Ok(Frame { vectors: out, labels })
}

/// Like `gram_schmidt` but silently skips vectors whose residual collapses;
/// used to build frames from (over-complete) projected coordinate seeds.
fn gram_schmidt_filter<S: Real>(
    candidates: impl Iterator<Item = Vector<S>>,
    g: &SymMat<S>,
    want: usize,
    label: FrameLabel,
) -> Option<(Frame<S>, Vec<usize>)> {
    let mut out: Vec<Vector<S>> = Vec::with_capacity(want);
    let mut kept = Vec::with_capacity(want);
    for (idx, v) in candidates.enumerate() {
        if out.len() == want {
            break;
        }
        let input_norm = g.norm(&v);
        // Skip near-zero projections outright.
        if input_norm < S::of(1e-7) {
            continue;
        }
        let mut w = v.clone();
        let mut ok = true;
        for _pass in 0..2 {
            for e in &out {
                let c = g.inner(&w, e);
                w.axpy(-c, e);
            }
            let r = g.norm(&w);
            if r < S::of(1e-6) * (S::one() + input_norm) {
                ok = false;
                break;
            }
            w = w.scale(S::one() / r);
        }
        if ok {
            out.push(w);
            kept.push(idx);
        }
    }
    if out.len() == want {
        let labels = vec![label; out.len()];
        Some((Frame { vectors: out, labels }, kept))
    } else {
        None
    }
}

/// Outcome of splitting a tangent space along a linear map's kernel.
#[derive(Debug, Clone)]
pub struct KernelSplit<S> {
    pub kernel: Frame<S>,
    pub complement: Frame<S>,
    pub rank: usize,
    pub sigma: Vec<S>,
    /// Coordinate seed indices accepted for each frame, in order.
    pub kernel_seeds: Vec<usize>,
    pub complement_seeds: Vec<usize>,
}

/// g-orthogonal projector onto the g-orthocomplement of ker(map), i.e. onto
/// the "horizontal" subspace g^{-1} (row space).
pub fn horizontal_projector<S: Real>(
    map: &Mat<S>,
    g_inv: &SymMat<S>,
    row_basis: &[Vector<S>],
) -> Result<Mat<S>> {
    let m1 = map.cols;
    let r = row_basis.len();
    if r == 0 {
        return Ok(Mat::zeros(m1, m1));
    }
    // M: m1 x r with Euclidean-orthonormal row-space basis columns.
    let mut mmat = Mat::zeros(m1, r);
    for (j, b) in row_basis.iter().enumerate() {
        mmat.set_col(j, b);
    }
    // P = g^{-1} M (M^T g^{-1} M)^{-1} M^T
    let gi = g_inv.as_mat();
    let gim = gi.matmul(&mmat);
    let core = mmat.transpose().matmul(&gim);
    let core_inv = gauss_jordan_inverse(&core)?;
    Ok(gim.matmul(&core_inv).matmul(&mmat.transpose()))
}

/// Split R^{m1} into the kernel of `map` and its g-orthogonal complement.
///
/// Rank decisions use sigma < RANK_TOL * sigma_max. Frames are built from
/// coordinate seeds in index order so the distinguished first vector is
/// reproducible. A zero map yields a full kernel and empty complement.
pub fn kernel_split<S: Real>(map: &Mat<S>, g: &SymMat<S>) -> Result<KernelSplit<S>> {
    let m1 = map.cols;
    let (sigma, v) = svd_right(map);
    let rank = numerical_rank(&sigma);
    let row_basis: Vec<Vector<S>> = (0..rank).map(|k| v.col(k)).collect();
    let g_inv = g.inverse()?;
    let p_h = horizontal_projector(map, &g_inv, &row_basis)?;
    let n = m1 - rank;

    let vertical = if n == 0 {
        (Frame { vectors: vec![], labels: vec![] }, vec![])
    } else {
        let cands = (0..m1).map(|i| {
            let e = Vector::basis(m1, i);
            e.sub(&p_h.matvec(&e))
        });
        gram_schmidt_filter(cands, g, n, FrameLabel::Vertical).ok_or_else(|| {
            Error::FrameExtension("could not assemble kernel frame from coordinate seeds".into())
        })?
    };
    let horizontal = if rank == 0 {
        (Frame { vectors: vec![], labels: vec![] }, vec![])
    } else {
        let cands = (0..m1).map(|i| p_h.matvec(&Vector::basis(m1, i)));
        gram_schmidt_filter(cands, g, rank, FrameLabel::Horizontal).ok_or_else(|| {
            Error::FrameExtension("could not assemble complement frame from coordinate seeds".into())
        })?
    };
    Ok(KernelSplit {
        kernel: vertical.0,
        complement: horizontal.0,
        rank,
        sigma,
        kernel_seeds: vertical.1,
        complement_seeds: horizontal.1,
    })
}

/// Re-evaluate a split at a nearby point with frozen seed indices, so the
/// resulting frames vary smoothly where the rank is stable.
pub fn kernel_split_with_seeds<S: Real>(
    map: &Mat<S>,
    g: &SymMat<S>,
    expected_rank: usize,
    kernel_seeds: &[usize],
    complement_seeds: &[usize],
) -> Result<(Frame<S>, Frame<S>)> {
    let m1 = map.cols;
    let (sigma, v) = svd_right(map);
    let rank = numerical_rank(&sigma);
    if rank != expected_rank {
        return Err(Error::RankDeficiency { expected: expected_rank, found: rank });
    }
    let row_basis: Vec<Vector<S>> = (0..rank).map(|k| v.col(k)).collect();
    let g_inv = g.inverse()?;
    let p_h = horizontal_projector(map, &g_inv, &row_basis)?;

    let vcands: Vec<Vector<S>> = kernel_seeds
        .iter()
        .map(|&i| {
            let e = Vector::basis(m1, i);
            e.sub(&p_h.matvec(&e))
        })
        .collect();
    let vertical = gram_schmidt(&vcands, g, FrameLabel::Vertical)
        .map_err(|e| Error::FrameExtension(format!("vertical frame: {e}")))?;
    let hcands: Vec<Vector<S>> =
        complement_seeds.iter().map(|&i| p_h.matvec(&Vector::basis(m1, i))).collect();
    let horizontal = gram_schmidt(&hcands, g, FrameLabel::Horizontal)
        .map_err(|e| Error::FrameExtension(format!("horizontal frame: {e}")))?;
    Ok((vertical, horizontal))
}

/// Metric-orthogonal projection of v onto the span of a g-orthonormal frame.
pub fn project<S: Real>(v: &Vector<S>, onto: &Frame<S>, g: &SymMat<S>) -> Vector<S> {
    let mut out = Vector::zeros(v.dim());
    for e in &onto.vectors {
        out.axpy(g.inner(v, e), e);
    }
    out
}
