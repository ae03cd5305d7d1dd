//! Closed-form model curvatures of generalized complex and generalized
//! Sasakian space forms, their named special cases, and chart conformance.

use crate::chart::{ChartManifold, Structure};
use crate::curvature::{riemann, DiffBackend};
use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, FrameLabel, Mat, SymMat, Vector};
use crate::rng::Rng;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceFormKind {
    Real,
    Complex,
    RealKahler,
    Sasakian,
    Kenmotsu,
    Cosymplectic,
    CAlpha,
    GeneralizedComplex,
    GeneralizedSasakian,
}

impl SpaceFormKind {
    pub fn is_complex_family(self) -> bool {
        matches!(
            self,
            SpaceFormKind::Real
                | SpaceFormKind::Complex
                | SpaceFormKind::RealKahler
                | SpaceFormKind::GeneralizedComplex
        )
    }

    pub fn is_contact_family(self) -> bool {
        matches!(
            self,
            SpaceFormKind::Sasakian
                | SpaceFormKind::Kenmotsu
                | SpaceFormKind::Cosymplectic
                | SpaceFormKind::CAlpha
                | SpaceFormKind::GeneralizedSasakian
        )
    }
}

/// A space form with its curvature-formula coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceFormSpec<S> {
    pub kind: SpaceFormKind,
    pub c: S,
    pub alpha: S,
    pub c1: S,
    pub c2: S,
    pub c3: S,
}

impl<S: Real> SpaceFormSpec<S> {
    /// Coefficients for the named special cases:
    ///
    /// complex family: real (c, 0); complex (c/4, c/4);
    /// real Kahler ((c+3a)/4, (c-a)/4).
    ///
    /// contact family (c2 = c3): Sasakian ((c+3)/4, (c-1)/4);
    /// Kenmotsu ((c-3)/4, (c+1)/4); cosymplectic (c/4, c/4);
    /// almost C(alpha) ((c+3a^2)/4, (c-a^2)/4).
    pub fn from_kind(kind: SpaceFormKind, c: S, alpha: S) -> Self {
        let four = S::of(4.0);
        let (c1, c2, c3) = match kind {
            SpaceFormKind::Real => (c, S::zero(), S::zero()),
            SpaceFormKind::Complex => (c / four, c / four, S::zero()),
            SpaceFormKind::RealKahler => {
                ((c + S::of(3.0) * alpha) / four, (c - alpha) / four, S::zero())
            }
            SpaceFormKind::Sasakian => {
                let c2 = (c - S::one()) / four;
                ((c + S::of(3.0)) / four, c2, c2)
            }
            SpaceFormKind::Kenmotsu => {
                let c2 = (c + S::one()) / four;
                ((c - S::of(3.0)) / four, c2, c2)
            }
            SpaceFormKind::Cosymplectic => (c / four, c / four, c / four),
            SpaceFormKind::CAlpha => {
                let a2 = alpha * alpha;
                let c2 = (c - a2) / four;
                ((c + S::of(3.0) * a2) / four, c2, c2)
            }
            SpaceFormKind::GeneralizedComplex | SpaceFormKind::GeneralizedSasakian => {
                panic!("generalized kinds take coefficients directly")
            }
        };
        Self { kind, c, alpha, c1, c2, c3 }
    }

    pub fn generalized_complex(c1: S, c2: S) -> Self {
        Self {
            kind: SpaceFormKind::GeneralizedComplex,
            c: S::zero(),
            alpha: S::zero(),
            c1,
            c2,
            c3: S::zero(),
        }
    }

    pub fn generalized_sasakian(c1: S, c2: S, c3: S) -> Self {
        Self { kind: SpaceFormKind::GeneralizedSasakian, c: S::zero(), alpha: S::zero(), c1, c2, c3 }
    }
}

/// Curvature model of a generalized complex space form:
///
/// R(Y1,Y2)Y3 = c1 { g(Y2,Y3) Y1 - g(Y1,Y3) Y2 }
///            + c2 { g(Y1,J Y3) J Y2 - g(Y2,J Y3) J Y1 + 2 g(Y1,J Y2) J Y3 }
///
/// Returns g(R(Y1,Y2)Y3, Y4).
pub fn model_curvature_gcsf<S: Real>(
    spec: &SpaceFormSpec<S>,
    j_at: &Mat<S>,
    g: &SymMat<S>,
    y1: &Vector<S>,
    y2: &Vector<S>,
    y3: &Vector<S>,
    y4: &Vector<S>,
) -> S {
    let j1 = j_at.matvec(y1);
    let j2 = j_at.matvec(y2);
    let j3 = j_at.matvec(y3);
    let mut out = Vector::zeros(y1.dim());
    out.axpy(spec.c1 * g.inner(y2, y3), y1);
    out.axpy(-spec.c1 * g.inner(y1, y3), y2);
    out.axpy(spec.c2 * g.inner(y1, &j3), &j2);
    out.axpy(-spec.c2 * g.inner(y2, &j3), &j1);
    out.axpy(S::of(2.0) * spec.c2 * g.inner(y1, &j2), &j3);
    g.inner(&out, y4)
}

/// Curvature model of a generalized Sasakian space form:
///
/// R(Y1,Y2)Y3 = c1 { g(Y2,Y3) Y1 - g(Y1,Y3) Y2 }
///            + c2 { g(Y1,phi Y3) phi Y2 - g(Y2,phi Y3) phi Y1 + 2 g(Y1,phi Y2) phi Y3 }
///            + c3 { eta(Y1) eta(Y3) Y2 - eta(Y2) eta(Y3) Y1
///                   + g(Y1,Y3) eta(Y2) xi - g(Y2,Y3) eta(Y1) xi }
#[allow(clippy::too_many_arguments)]
pub fn model_curvature_gssf<S: Real>(
    spec: &SpaceFormSpec<S>,
    phi_at: &Mat<S>,
    xi_at: &Vector<S>,
    eta_at: &Vector<S>,
    g: &SymMat<S>,
    y1: &Vector<S>,
    y2: &Vector<S>,
    y3: &Vector<S>,
    y4: &Vector<S>,
) -> S {
    let p1 = phi_at.matvec(y1);
    let p2 = phi_at.matvec(y2);
    let p3 = phi_at.matvec(y3);
    let e1 = eta_at.dot(y1);
    let e2 = eta_at.dot(y2);
    let e3 = eta_at.dot(y3);
    let mut out = Vector::zeros(y1.dim());
    out.axpy(spec.c1 * g.inner(y2, y3), y1);
    out.axpy(-spec.c1 * g.inner(y1, y3), y2);
    out.axpy(spec.c2 * g.inner(y1, &p3), &p2);
    out.axpy(-spec.c2 * g.inner(y2, &p3), &p1);
    out.axpy(S::of(2.0) * spec.c2 * g.inner(y1, &p2), &p3);
    out.axpy(spec.c3 * e1 * e3, y2);
    out.axpy(-spec.c3 * e2 * e3, y1);
    out.axpy(spec.c3 * g.inner(y1, y3) * e2, xi_at);
    out.axpy(-spec.c3 * g.inner(y2, y3) * e1, xi_at);
    g.inner(&out, y4)
}

/// Model curvature dispatching on the chart's structure kind.
#[allow(clippy::too_many_arguments)]
pub fn model_curvature<S: Real>(
    chart: &ChartManifold<S>,
    spec: &SpaceFormSpec<S>,
    g: &SymMat<S>,
    p: &[S],
    y1: &Vector<S>,
    y2: &Vector<S>,
    y3: &Vector<S>,
    y4: &Vector<S>,
) -> Result<S> {
    if spec.kind == SpaceFormKind::Real {
        // Real space form needs no structure tensor.
        let c = spec.c1;
        return Ok(c * (g.inner(y2, y3) * g.inner(y1, y4) - g.inner(y1, y3) * g.inner(y2, y4)));
    }
    match &chart.structure {
        Structure::Complex { .. } => {
            let j = chart.j_at(p)?;
            Ok(model_curvature_gcsf(spec, &j, g, y1, y2, y3, y4))
        }
        Structure::Contact { .. } => {
            let (phi, xi, eta) = chart.contact_at(p)?;
            Ok(model_curvature_gssf(spec, &phi, &xi, &eta, g, y1, y2, y3, y4))
        }
        Structure::None => Err(Error::StructureMissing(
            "space-form conformance for this kind needs a structure tensor".into(),
        )),
    }
}

/// Max residual |chart curvature - model formula| over seeded samples and
/// random orthonormal tuples. Deterministic under a fixed seed.
pub fn conformance_check<S: Real>(
    chart: &ChartManifold<S>,
    spec: &SpaceFormSpec<S>,
    samples: &[Vec<S>],
    tuples_per_point: usize,
    seed: u64,
) -> Result<S> {
    let mut rng = Rng::new(seed);
    let d = chart.dim;
    let mut worst = S::zero();
    for p in samples {
        let curv = riemann(chart, p, DiffBackend::Jet)?;
        let g = curv.g.clone();
        for _ in 0..tuples_per_point {
            // Random orthonormal basis via seeded Gaussians + Gram-Schmidt,
            // then a random 4-index selection from it.
            let raw: Vec<Vector<S>> = (0..d).map(|_| Vector::new(rng.gaussian_vec(d))).collect();
            let frame = match gram_schmidt(&raw, &g, FrameLabel::Horizontal) {
                Ok(f) => f,
                Err(_) => continue, // resample on a degenerate draw
            };
            let pick: Vec<&Vector<S>> =
                (0..4).map(|_| &frame.vectors[rng.index(d)]).collect();
            let lhs = curv.pair(pick[0], pick[1], pick[2], pick[3]);
            let rhs = model_curvature(chart, spec, &g, p, pick[0], pick[1], pick[2], pick[3])?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows_match() {
        let s = SpaceFormSpec::<f64>::from_kind(SpaceFormKind::Complex, 4.0, 0.0);
        assert_eq!((s.c1, s.c2), (1.0, 1.0));
        let s = SpaceFormSpec::<f64>::from_kind(SpaceFormKind::Sasakian, 1.0, 0.0);
        assert_eq!((s.c1, s.c2, s.c3), (1.0, 0.0, 0.0));
        let s = SpaceFormSpec::<f64>::from_kind(SpaceFormKind::Kenmotsu, 5.0, 0.0);
        assert_eq!((s.c1, s.c2, s.c3), (0.5, 1.5, 1.5));
        let s = SpaceFormSpec::<f64>::from_kind(SpaceFormKind::CAlpha, 2.0, 3.0);
        assert_eq!((s.c1, s.c2, s.c3), ((2.0 + 27.0) / 4.0, -7.0 / 4.0, -7.0 / 4.0));
        let s = SpaceFormSpec::<f64>::from_kind(SpaceFormKind::RealKahler, 2.0, 2.0);
        assert_eq!((s.c1, s.c2), (2.0, 0.0));
    }

    fn standard_j(dim: usize) -> Mat<f64> {
        // pairs (x_{2k-1}, x_{2k}): J e_{2k-1} = e_{2k}, J e_{2k} = -e_{2k-1}
        let mut j = Mat::zeros(dim, dim);
        for k in 0..dim / 2 {
            j[(2 * k + 1, 2 * k)] = 1.0;
            j[(2 * k, 2 * k + 1)] = -1.0;
        }
        j
    }

    #[test]
    fn gcsf_real_row_reduces_to_constant_curvature() {
        // c2 = 0, orthonormal (X,Y,Y,X) -> c1
        let g = SymMat::identity(4);
        let j = standard_j(4);
        let spec = SpaceFormSpec::generalized_complex(2.5, 0.0);
        let x = Vector::basis(4, 0);
        let y = Vector::basis(4, 2);
        let v = model_curvature_gcsf(&spec, &j, &g, &x, &y, &y, &x);
        assert!((v - 2.5).abs() < 1e-14);
    }

    #[test]
    fn gcsf_holomorphic_plane() {
        // Y = JX: R(X, JX, JX, X) = c1 + 3 c2
        let g = SymMat::identity(4);
        let j = standard_j(4);
        let spec = SpaceFormSpec::generalized_complex(0.7, 0.3);
        let x = Vector::basis(4, 0);
        let jx = j.matvec(&x);
        let v = model_curvature_gcsf(&spec, &j, &g, &x, &jx, &jx, &x);
        assert!((v - (0.7 + 3.0 * 0.3)).abs() < 1e-14);
    }

    #[test]
    fn gcsf_multilinearity() {
        let g = SymMat::identity(4);
        let j = standard_j(4);
        let spec = SpaceFormSpec::generalized_complex(0.7, 0.3);
        let x = Vector::new(vec![0.1, -0.4, 0.2, 0.9]);
        let y = Vector::new(vec![1.0, 0.3, -0.2, 0.1]);
        let z = Vector::new(vec![0.0, 1.0, 0.5, -0.3]);
        let w = Vector::new(vec![0.2, 0.2, 1.0, 0.4]);
        let base = model_curvature_gcsf(&spec, &j, &g, &x, &y, &z, &w);
        for lambda in [0.0, 2.0, -1.0] {
            let v = model_curvature_gcsf(&spec, &j, &g, &x.scale(lambda), &y, &z, &w);
            assert!((v - lambda * base).abs() < 1e-12);
            let v = model_curvature_gcsf(&spec, &j, &g, &x, &y, &z.scale(lambda), &w);
            assert!((v - lambda * base).abs() < 1e-12);
        }
        // zero argument annihilates
        let zero = Vector::zeros(4);
        assert_eq!(model_curvature_gcsf(&spec, &j, &g, &zero, &y, &z, &w), 0.0);
    }

    #[test]
    fn gssf_reduces_and_reeb_plane() {
        let dim = 3;
        let g = SymMat::<f64>::identity(dim);
        // standard contact data on R^3 in a Euclidean frame: xi = e3
        let mut phi = Mat::zeros(dim, dim);
        phi[(1, 0)] = 1.0;
        phi[(0, 1)] = -1.0;
        let xi = Vector::basis(dim, 2);
        let eta = Vector::basis(dim, 2);
        // c2 = c3 = 0: orthonormal (X,Y,Y,X) -> c1
        let spec = SpaceFormSpec::generalized_sasakian(1.7, 0.0, 0.0);
        let x = Vector::basis(dim, 0);
        let y = Vector::basis(dim, 1);
        let v = model_curvature_gssf(&spec, &phi, &xi, &eta, &g, &x, &y, &y, &x);
        assert!((v - 1.7).abs() < 1e-14);
        // unit Y perp xi: R(xi, Y, Y, xi) = c1 - c3
        let spec = SpaceFormSpec::generalized_sasakian(1.7, 0.4, 0.9);
        let v = model_curvature_gssf(&spec, &phi, &xi, &eta, &g, &xi, &y, &y, &xi);
        assert!((v - (1.7 - 0.9)).abs() < 1e-14);
        // Sasakian constants at c = 1: c1 = 1, c2 = c3 = 0 -> R(xi,Y,Y,xi) = 1
        let sas = SpaceFormSpec::from_kind(SpaceFormKind::Sasakian, 1.0, 0.0);
        let v = model_curvature_gssf(&sas, &phi, &xi, &eta, &g, &xi, &y, &y, &xi);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gssf_multilinearity() {
        let dim = 3;
        let g = SymMat::<f64>::identity(dim);
        let mut phi = Mat::zeros(dim, dim);
        phi[(1, 0)] = 1.0;
        phi[(0, 1)] = -1.0;
        let xi = Vector::basis(dim, 2);
        let eta = Vector::basis(dim, 2);
        let spec = SpaceFormSpec::generalized_sasakian(0.9, -0.4, 0.6);
        let x = Vector::new(vec![0.3, -0.2, 0.8]);
        let y = Vector::new(vec![1.1, 0.4, -0.5]);
        let z = Vector::new(vec![-0.7, 0.9, 0.2]);
        let w = Vector::new(vec![0.5, 0.5, 1.0]);
        let base = model_curvature_gssf(&spec, &phi, &xi, &eta, &g, &x, &y, &z, &w);
        for lambda in [0.0, 2.0, -1.0] {
            for slot in 0..4 {
                let mut args = [x.clone(), y.clone(), z.clone(), w.clone()];
                args[slot] = args[slot].scale(lambda);
                let v = model_curvature_gssf(
                    &spec, &phi, &xi, &eta, &g, &args[0], &args[1], &args[2], &args[3],
                );
                assert!((v - lambda * base).abs() < 1e-12, "slot {slot} lambda {lambda}");
            }
        }
    }

    #[test]
    fn euclidean_conforms_to_flat_real_form() {
        let chart = ChartManifold::<f64>::flat(3, 2.0);
        let spec = SpaceFormSpec::from_kind(SpaceFormKind::Real, 0.0, 0.0);
        let samples = chart.sample_points(5, 11);
        let res = conformance_check(&chart, &spec, &samples, 10, 99).unwrap();
        assert!(res < 1e-9, "residual {res}");
    }
}
