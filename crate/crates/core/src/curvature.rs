//! Christoffel symbols, Riemann curvature, sectional curvature, and covariant
//! derivatives on a chart.
//!
//! Convention, fixed once and recorded in every [`CurvatureAt`]:
//!
//! ```text
//! R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//! R(X,Y,Z,W) = g(R(X,Y)Z, W)
//! ```
//!
//! Under this pairing the unit sphere has sectional curvature +1 for
//! K(X,Y) = R(X,Y,Y,X) / (|X|^2 |Y|^2 - g(X,Y)^2).

use crate::chart::ChartManifold;
use crate::error::{Error, Result};
use crate::fd;
use crate::linalg::{Mat, SymMat, Vector};
use crate::scalar::Real;

/// Differentiation backend for metric derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiffBackend {
    /// Second-order jets (exact to machine precision). Primary.
    #[default]
    Jet,
    /// Central finite differences with one Richardson step. Cross-check tier.
    FiniteDifference,
}

/// The fixed curvature convention record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convention {
    /// Sign of the curvature operator relative to nabla_X nabla_Y - ...
    pub curvature_operator_sign: i8,
    /// Pairing order of the (0,4)-tensor.
    pub pairing_order: PairingOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingOrder {
    /// R(X,Y,Z,W) = g(R(X,Y)Z, W)
    OperatorFirstPairLast,
}

pub const CONVENTION: Convention = Convention {
    curvature_operator_sign: 1,
    pairing_order: PairingOrder::OperatorFirstPairLast,
};

/// Christoffel symbols Gamma^k_{ij}, flattened [k][i][j].
#[derive(Debug, Clone)]
pub struct Christoffel<S> {
    pub dim: usize,
    pub g: SymMat<S>,
    pub g_inv: SymMat<S>,
    pub gamma: Vec<S>,
}

impl<S: Real> Christoffel<S> {
    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> S {
        self.gamma[(k * self.dim + i) * self.dim + j]
    }
}

/// Christoffels and fully lowered Riemann components at a point.
#[derive(Debug, Clone)]
pub struct CurvatureAt<S> {
    pub point: Vec<S>,
    pub dim: usize,
    pub g: SymMat<S>,
    pub g_inv: SymMat<S>,
    /// Gamma^k_{ij}, flattened [k][i][j].
    pub christoffel: Vec<S>,
    /// R_{ijkl} = g(R(d_i, d_j) d_k, d_l), flattened [i][j][k][l].
    pub riemann_down: Vec<S>,
    pub convention: Convention,
}

impl<S: Real> CurvatureAt<S> {
    #[inline]
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> S {
        self.christoffel[(k * self.dim + i) * self.dim + j]
    }

    #[inline]
    pub fn r_down(&self, i: usize, j: usize, k: usize, l: usize) -> S {
        let d = self.dim;
        self.riemann_down[((i * d + j) * d + k) * d + l]
    }

    /// R(X, Y, Z, W) for coordinate-component vectors.
    pub fn pair(&self, x: &Vector<S>, y: &Vector<S>, z: &Vector<S>, w: &Vector<S>) -> S {
        let d = self.dim;
        let mut s = S::zero();
        for i in 0..d {
            if x.c[i] == S::zero() {
                continue;
            }
            for j in 0..d {
                if y.c[j] == S::zero() {
                    continue;
                }
                for k in 0..d {
                    if z.c[k] == S::zero() {
                        continue;
                    }
                    for l in 0..d {
                        s += self.r_down(i, j, k, l) * x.c[i] * y.c[j] * z.c[k] * w.c[l];
                    }
                }
            }
        }
        s
    }

    /// Worst violation of the pair symmetries and the first Bianchi identity.
    pub fn symmetry_residual(&self) -> S {
        let d = self.dim;
        let scale = S::one()
            + self.riemann_down.iter().fold(S::zero(), |m, x| m.max(x.abs()));
        let mut worst = S::zero();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let r = self.r_down(i, j, k, l);
                        worst = worst.max((r + self.r_down(j, i, k, l)).abs());
                        worst = worst.max((r + self.r_down(i, j, l, k)).abs());
                        worst = worst.max((r - self.r_down(k, l, i, j)).abs());
                        let bianchi =
                            r + self.r_down(j, k, i, l) + self.r_down(k, i, j, l);
                        worst = worst.max(bianchi.abs());
                    }
                }
            }
        }
        worst / scale
    }
}

/// Levi-Civita Christoffel symbols at a point.
pub fn christoffel<S: Real>(
    chart: &ChartManifold<S>,
    p: &[S],
    backend: DiffBackend,
) -> Result<Christoffel<S>> {
    let d = chart.dim;
    let (g, dg) = match backend {
        DiffBackend::Jet => {
            let jets = chart.metric_jets(p)?;
            (jets.g, jets.dg)
        }
        DiffBackend::FiniteDifference => {
            let g = chart.metric_at(p)?;
            let entries = |q: &[S]| -> Result<Vec<S>> {
                let mut out = Vec::with_capacity(d * d);
                for i in 0..d {
                    for j in 0..d {
                        out.push(chart.metric[i][j].eval(q)?);
                    }
                }
                Ok(out)
            };
            let mut dg = vec![Mat::zeros(d, d); d];
            for (k, dgk) in dg.iter_mut().enumerate() {
                let flat = fd::partial(&entries, p, k, S::of(fd::FD_H))?;
                dgk.a.copy_from_slice(&flat);
            }
            (g, dg)
        }
    };
    let g_inv = g.inverse()?;
    let mut gamma = vec![S::zero(); d * d * d];
    let half = S::of(0.5);
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                let mut s = S::zero();
                for l in 0..d {
                    s += g_inv.get(k, l) * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                gamma[(k * d + i) * d + j] = half * s;
            }
        }
    }
    Ok(Christoffel { dim: d, g, g_inv, gamma })
}

/// Full curvature data at a point.
pub fn riemann<S: Real>(
    chart: &ChartManifold<S>,
    p: &[S],
    backend: DiffBackend,
) -> Result<CurvatureAt<S>> {
    let d = chart.dim;
    let ch = christoffel(chart, p, backend)?;
    // dgamma[m][k][i][j] = d_m Gamma^k_{ij}
    let mut dgamma = vec![S::zero(); d * d * d * d];
    match backend {
        DiffBackend::Jet => {
            let jets = chart.metric_jets(p)?;
            let g_inv = &ch.g_inv;
            // d_m g^{kl} = - (g^{-1} dg_m g^{-1})^{kl}
            let gi = g_inv.as_mat();
            for m in 0..d {
                let dginv = gi.matmul(&jets.dg[m]).matmul(&gi);
                for k in 0..d {
                    for i in 0..d {
                        for j in 0..d {
                            let mut s = S::zero();
                            for l in 0..d {
                                let bracket = jets.dg[i][(j, l)] + jets.dg[j][(i, l)]
                                    - jets.dg[l][(i, j)];
                                let dbracket = jets.ddg[m][i][(j, l)] + jets.ddg[m][j][(i, l)]
                                    - jets.ddg[m][l][(i, j)];
                                s += -dginv[(k, l)] * bracket + g_inv.get(k, l) * dbracket;
                            }
                            dgamma[((m * d + k) * d + i) * d + j] = S::of(0.5) * s;
                        }
                    }
                }
            }
        }
        DiffBackend::FiniteDifference => {
            let gamma_flat = |q: &[S]| -> Result<Vec<S>> {
                Ok(christoffel(chart, q, DiffBackend::FiniteDifference)?.gamma)
            };
            for m in 0..d {
                let flat = fd::partial(&gamma_flat, p, m, S::of(fd::FD_H))?;
                for idx in 0..d * d * d {
                    dgamma[m * d * d * d + idx] = flat[idx];
                }
            }
        }
    }
    // R^l_{ijk}: coefficient of d_l in R(d_i, d_j) d_k
    let gam = |k: usize, i: usize, j: usize| ch.get(k, i, j);
    let dgam = |m: usize, k: usize, i: usize, j: usize| dgamma[((m * d + k) * d + i) * d + j];
    let mut riemann_down = vec![S::zero(); d * d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let mut up = dgam(i, l, j, k) - dgam(j, l, i, k);
                    for m in 0..d {
                        up += gam(l, i, m) * gam(m, j, k) - gam(l, j, m) * gam(m, i, k);
                    }
                    // store after lowering below; temporarily keep R^l_{ijk}
                    riemann_down[((i * d + j) * d + k) * d + l] = up;
                }
            }
        }
    }
    // Lower the last index: R_{ijkl} = g_{lm} R^m_{ijk}
    let mut lowered = vec![S::zero(); d * d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let mut s = S::zero();
                    for m in 0..d {
                        s += ch.g.get(l, m) * riemann_down[((i * d + j) * d + k) * d + m];
                    }
                    lowered[((i * d + j) * d + k) * d + l] = s;
                }
            }
        }
    }
    Ok(CurvatureAt {
        point: p.to_vec(),
        dim: d,
        g: ch.g,
        g_inv: ch.g_inv,
        christoffel: ch.gamma,
        riemann_down: lowered,
        convention: CONVENTION,
    })
}

/// Sectional curvature of the plane spanned by X, Y.
pub fn sectional<S: Real>(
    curv: &CurvatureAt<S>,
    x: &Vector<S>,
    y: &Vector<S>,
    g: &SymMat<S>,
) -> Result<S> {
    let gram = g.inner(x, x) * g.inner(y, y) - g.inner(x, y) * g.inner(x, y);
    if gram <= S::of(1e-12) {
        return Err(Error::DegeneratePlane);
    }
    Ok(curv.pair(x, y, y, x) / gram)
}

/// Covariant derivative of a vector field along a direction at p:
/// (nabla_X V)^k = X^i d_i V^k + Gamma^k_{ij} X^i V^j.
pub fn covariant_derivative<S, F>(
    ch: &Christoffel<S>,
    field: &F,
    direction: &Vector<S>,
    p: &[S],
) -> Result<Vector<S>>
where
    S: Real,
    F: Fn(&[S]) -> Result<Vec<S>>,
{
    let d = ch.dim;
    let field_vec = |q: &[S]| field(q);
    let dv = fd::dir_derivative(&field_vec, p, &direction.c, S::of(fd::FD_H))?;
    let v = field(p)?;
    let mut out = Vector::new(dv);
    for k in 0..d {
        let mut s = S::zero();
        for i in 0..d {
            for j in 0..d {
                s += ch.get(k, i, j) * direction.c[i] * v[j];
            }
        }
        out.c[k] += s;
    }
    Ok(out)
}
