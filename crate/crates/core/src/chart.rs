//! Coordinate charts: metric field plus optional complex / contact structure.

use crate::error::{Error, Result};
use crate::expr::{eval_jet2, Expression};
use crate::linalg::{Mat, SymMat, Vector};
use crate::scalar::Real;

/// Optional structure carried by a chart.
#[derive(Debug, Clone)]
pub enum Structure<S> {
    None,
    /// Almost complex: J with J^2 = -I, g(JX, JY) = g(X, Y).
    Complex { j: Vec<Vec<Expression<S>>> },
    /// Almost contact metric: (phi, xi, eta) with eta(xi) = 1,
    /// phi^2 = -I + eta (x) xi, g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y).
    Contact { phi: Vec<Vec<Expression<S>>>, xi: Vec<Expression<S>>, eta: Vec<Expression<S>> },
}

/// A single-chart Riemannian manifold over a box domain.
#[derive(Debug, Clone)]
pub struct ChartManifold<S> {
    pub dim: usize,
    pub lo: Vec<S>,
    pub hi: Vec<S>,
    /// Symmetric dim x dim matrix of metric component expressions.
    pub metric: Vec<Vec<Expression<S>>>,
    pub structure: Structure<S>,
}

/// Metric data at a point: values, first, and second coordinate derivatives.
#[derive(Debug, Clone)]
pub struct MetricJets<S> {
    pub g: SymMat<S>,
    /// dg[k][i][j] = d_k g_ij
    pub dg: Vec<Mat<S>>,
    /// ddg[k][l][i][j] = d_k d_l g_ij
    pub ddg: Vec<Vec<Mat<S>>>,
}

impl<S: Real> ChartManifold<S> {
    pub fn flat(dim: usize, half_width: f64) -> Self {
        let mut metric = vec![vec![Expression::constant(0.0); dim]; dim];
        for (i, row) in metric.iter_mut().enumerate() {
            row[i] = Expression::constant(1.0);
        }
        Self {
            dim,
            lo: vec![S::of(-half_width); dim],
            hi: vec![S::of(half_width); dim],
            metric,
            structure: Structure::None,
        }
    }

    pub fn contains(&self, p: &[S]) -> bool {
        p.len() == self.dim
            && p.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (lo, hi))| x >= lo && x <= hi)
    }

    /// Validate the dimension bound and expression variable ranges.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > 8 {
            return Err(Error::InvalidProblem(format!(
                "chart dimension {} outside the supported range 1..=8",
                self.dim
            )));
        }
        let check = |e: &Expression<S>| -> Result<()> {
            if e.n_vars() > self.dim {
                return Err(Error::InvalidProblem(format!(
                    "expression uses x{} but chart dimension is {}",
                    e.n_vars(),
                    self.dim
                )));
            }
            Ok(())
        };
        for row in &self.metric {
            for e in row {
                check(e)?;
            }
        }
        match &self.structure {
            Structure::None => {}
            Structure::Complex { j } => {
                for row in j {
                    for e in row {
                        check(e)?;
                    }
                }
            }
            Structure::Contact { phi, xi, eta } => {
                for row in phi {
                    for e in row {
                        check(e)?;
                    }
                }
                for e in xi.iter().chain(eta) {
                    check(e)?;
                }
            }
        }
        Ok(())
    }

    /// Metric at a point (checked symmetric; positive-definiteness checked).
    pub fn metric_at(&self, p: &[S]) -> Result<SymMat<S>> {
        let d = self.dim;
        let mut m = Mat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = self.metric[i][j].eval(p)?;
            }
        }
        let g = SymMat::new(m)?;
        if !g.is_positive_definite() {
            return Err(Error::SingularMetric(format!("metric not positive-definite at {p:?}")));
        }
        Ok(g)
    }

    /// Metric with first and second derivatives via second-order jets.
    pub fn metric_jets(&self, p: &[S]) -> Result<MetricJets<S>> {
        let d = self.dim;
        let mut g = Mat::zeros(d, d);
        let mut dg = vec![Mat::zeros(d, d); d];
        let mut ddg = vec![vec![Mat::zeros(d, d); d]; d];
        for i in 0..d {
            for j in i..d {
                let jet = eval_jet2(&self.metric[i][j], p)?;
                g[(i, j)] = jet.value;
                g[(j, i)] = jet.value;
                for k in 0..d {
                    dg[k][(i, j)] = jet.grad[k];
                    dg[k][(j, i)] = jet.grad[k];
                    for l in 0..d {
                        ddg[k][l][(i, j)] = jet.hess_at(k, l);
                        ddg[k][l][(j, i)] = jet.hess_at(k, l);
                    }
                }
            }
        }
        Ok(MetricJets { g: SymMat::new(g)?, dg, ddg })
    }

    /// Evaluate a matrix of expressions at a point.
    pub fn eval_matrix(exprs: &[Vec<Expression<S>>], p: &[S]) -> Result<Mat<S>> {
        let r = exprs.len();
        let c = exprs.first().map_or(0, |row| row.len());
        let mut m = Mat::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                m[(i, j)] = exprs[i][j].eval(p)?;
            }
        }
        Ok(m)
    }

    pub fn eval_vector(exprs: &[Expression<S>], p: &[S]) -> Result<Vector<S>> {
        Ok(Vector::new(exprs.iter().map(|e| e.eval(p)).collect::<Result<Vec<_>>>()?))
    }

    pub fn j_at(&self, p: &[S]) -> Result<Mat<S>> {
        match &self.structure {
            Structure::Complex { j } => Self::eval_matrix(j, p),
            _ => Err(Error::StructureMissing("chart carries no complex structure".into())),
        }
    }

    pub fn contact_at(&self, p: &[S]) -> Result<(Mat<S>, Vector<S>, Vector<S>)> {
        match &self.structure {
            Structure::Contact { phi, xi, eta } => Ok((
                Self::eval_matrix(phi, p)?,
                Self::eval_vector(xi, p)?,
                Self::eval_vector(eta, p)?,
            )),
            _ => Err(Error::StructureMissing("chart carries no contact structure".into())),
        }
    }

    /// Check the structure compatibility identities at a point; returns the
    /// worst residual. Tolerance policy is the caller's (1e-8 in the suite).
    pub fn structure_residual(&self, p: &[S]) -> Result<S> {
        let g = self.metric_at(p)?;
        let d = self.dim;
        let mut worst = S::zero();
        match &self.structure {
            Structure::None => {}
            Structure::Complex { j } => {
                let jm = Self::eval_matrix(j, p)?;
                // J^2 = -I
                let j2 = jm.matmul(&jm);
                for i in 0..d {
                    for k in 0..d {
                        let want = if i == k { -S::one() } else { S::zero() };
                        worst = worst.max((j2[(i, k)] - want).abs());
                    }
                }
                // J^T g J = g
                let jt_g_j = jm.transpose().matmul(&g.as_mat()).matmul(&jm);
                for i in 0..d {
                    for k in 0..d {
                        worst = worst.max((jt_g_j[(i, k)] - g.get(i, k)).abs());
                    }
                }
            }
            Structure::Contact { phi, xi, eta } => {
                let ph = Self::eval_matrix(phi, p)?;
                let xiv = Self::eval_vector(xi, p)?;
                let etav = Self::eval_vector(eta, p)?;
                // eta(xi) = 1
                worst = worst.max((xiv.dot(&etav) - S::one()).abs());
                // phi^2 = -I + xi (x) eta
                let p2 = ph.matmul(&ph);
                for i in 0..d {
                    for k in 0..d {
                        let want =
                            (if i == k { -S::one() } else { S::zero() }) + xiv.c[i] * etav.c[k];
                        worst = worst.max((p2[(i, k)] - want).abs());
                    }
                }
                // phi^T g phi = g - eta (x) eta
                let pgp = ph.transpose().matmul(&g.as_mat()).matmul(&ph);
                for i in 0..d {
                    for k in 0..d {
                        let want = g.get(i, k) - etav.c[i] * etav.c[k];
                        worst = worst.max((pgp[(i, k)] - want).abs());
                    }
                }
                // phi xi = 0 and eta o phi = 0
                let pxi = ph.matvec(&xiv);
                worst = worst.max(pxi.c.iter().fold(S::zero(), |m, x| m.max(x.abs())));
                for k in 0..d {
                    let mut s = S::zero();
                    for i in 0..d {
                        s += etav.c[i] * ph[(i, k)];
                    }
                    worst = worst.max(s.abs());
                }
                // eta must be the metric dual of xi: g(Y, xi) = eta(Y)
                let gxi = g.matvec(&xiv);
                for i in 0..d {
                    worst = worst.max((gxi.c[i] - etav.c[i]).abs());
                }
            }
        }
        Ok(worst)
    }

    /// Seeded interior sample points, shrunk away from the domain boundary.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<S>> {
        let mut rng = crate::rng::Rng::new(seed);
        let margin = S::of(0.12);
        (0..count)
            .map(|_| {
                (0..self.dim)
                    .map(|i| {
                        let w = self.hi[i] - self.lo[i];
                        rng.uniform(self.lo[i] + margin * w, self.hi[i] - margin * w)
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn polar_plane() -> ChartManifold<f64> {
        ChartManifold {
            dim: 2,
            lo: vec![0.5, 0.0],
            hi: vec![3.0, 3.0],
            metric: vec![
                vec![parse("1").unwrap(), parse("0").unwrap()],
                vec![parse("0").unwrap(), parse("x1^2").unwrap()],
            ],
            structure: Structure::None,
        }
    }

    #[test]
    fn metric_eval_and_jets() {
        let m = polar_plane();
        let g = m.metric_at(&[2.0, 1.0]).unwrap();
        assert_eq!(g.get(1, 1), 4.0);
        let jets = m.metric_jets(&[2.0, 1.0]).unwrap();
        assert_eq!(jets.dg[0][(1, 1)], 4.0); // d_r r^2 = 2r
        assert_eq!(jets.ddg[0][0][(1, 1)], 2.0);
    }

    #[test]
    fn domain_box() {
        let m = polar_plane();
        assert!(m.contains(&[1.0, 1.0]));
        assert!(!m.contains(&[0.1, 1.0]));
    }

    #[test]
    fn rejects_non_pd_metric() {
        let mut m = polar_plane();
        m.metric[0][0] = parse("-1").unwrap();
        assert!(matches!(m.metric_at(&[2.0, 1.0]), Err(Error::SingularMetric(_))));
    }

    #[test]
    fn validate_variable_range() {
        let mut m = polar_plane();
        m.metric[0][0] = parse("x3").unwrap();
        assert!(m.validate().is_err());
    }
}
