//! Central finite differences with one Richardson step.
//!
//! This is both the cross-check oracle for the jet path and the only way to
//! differentiate quantities that exist as closures (frame fields, tensor
//! fields) rather than expressions.

use crate::error::Result;
use crate::scalar::Real;

/// Base relative step for first derivatives of smooth closures.
pub const FD_H: f64 = 1e-4;

/// Step size scaled to the local coordinate, per the h = h0 * (1 + |x|) rule.
pub fn step<S: Real>(h0: S, coord: S) -> S {
    h0 * (S::one() + coord.abs())
}

/// Directional derivative of a vector-valued closure along `dir`, central
/// differences with one Richardson extrapolation: (4 D(h/2) - D(h)) / 3.
pub fn dir_derivative<S, F>(f: &F, x: &[S], dir: &[S], h0: S) -> Result<Vec<S>>
where
    S: Real,
    F: Fn(&[S]) -> Result<Vec<S>>,
{
    let xmax = x.iter().fold(S::zero(), |m, v| m.max(v.abs()));
    let dmax = dir.iter().fold(S::zero(), |m, v| m.max(v.abs()));
    let h = h0 * (S::one() + xmax) / (S::one() + dmax).max(S::one());
    let stencil = |t: S| -> Result<Vec<S>> {
        let xs: Vec<S> = x.iter().zip(dir).map(|(xi, di)| *xi + t * *di).collect();
        f(&xs)
    };
    let central = |h: S| -> Result<Vec<S>> {
        let plus = stencil(h)?;
        let minus = stencil(-h)?;
        Ok(plus
            .iter()
            .zip(&minus)
            .map(|(p, m)| (*p - *m) / (S::of(2.0) * h))
            .collect())
    };
    let d_h = central(h)?;
    let d_h2 = central(h * S::of(0.5))?;
    Ok(d_h2
        .iter()
        .zip(&d_h)
        .map(|(fine, coarse)| (S::of(4.0) * *fine - *coarse) / S::of(3.0))
        .collect())
}

/// Partial derivative along coordinate `i` of a vector-valued closure.
pub fn partial<S, F>(f: &F, x: &[S], i: usize, h0: S) -> Result<Vec<S>>
where
    S: Real,
    F: Fn(&[S]) -> Result<Vec<S>>,
{
    let h = step(h0, x[i]);
    let shift = |t: S| -> Result<Vec<S>> {
        let mut xs = x.to_vec();
        xs[i] += t;
        f(&xs)
    };
    let central = |h: S| -> Result<Vec<S>> {
        let plus = shift(h)?;
        let minus = shift(-h)?;
        Ok(plus
            .iter()
            .zip(&minus)
            .map(|(p, m)| (*p - *m) / (S::of(2.0) * h))
            .collect())
    };
    let d_h = central(h)?;
    let d_h2 = central(h * S::of(0.5))?;
    Ok(d_h2
        .iter()
        .zip(&d_h)
        .map(|(fine, coarse)| (S::of(4.0) * *fine - *coarse) / S::of(3.0))
        .collect())
}

/// Plain central gradient of a scalar closure (no Richardson); testing oracle.
pub fn grad_central<S, F>(f: &F, x: &[S], h0: S) -> Result<Vec<S>>
where
    S: Real,
    F: Fn(&[S]) -> Result<S>,
{
    let m = x.len();
    let mut g = vec![S::zero(); m];
    for i in 0..m {
        let h = step(h0, x[i]);
        let mut xp = x.to_vec();
        xp[i] += h;
        let mut xm = x.to_vec();
        xm[i] -= h;
        g[i] = (f(&xp)? - f(&xm)?) / (S::of(2.0) * h);
    }
    Ok(g)
}

/// Second-order central Hessian of a scalar closure; testing oracle.
pub fn hess_central<S, F>(f: &F, x: &[S], h0: S) -> Result<Vec<Vec<S>>>
where
    S: Real,
    F: Fn(&[S]) -> Result<S>,
{
    let m = x.len();
    let f0 = f(x)?;
    let mut h = vec![vec![S::zero(); m]; m];
    for i in 0..m {
        let hi = step(h0, x[i]);
        let mut xp = x.to_vec();
        xp[i] += hi;
        let mut xm = x.to_vec();
        xm[i] -= hi;
        h[i][i] = (f(&xp)? - S::of(2.0) * f0 + f(&xm)?) / (hi * hi);
        for j in (i + 1)..m {
            let hj = step(h0, x[j]);
            let mut xpp = x.to_vec();
            xpp[i] += hi;
            xpp[j] += hj;
            let mut xpm = x.to_vec();
            xpm[i] += hi;
            xpm[j] -= hj;
            let mut xmp = x.to_vec();
            xmp[i] -= hi;
            xmp[j] += hj;
            let mut xmm = x.to_vec();
            xmm[i] -= hi;
            xmm[j] -= hj;
            let v = (f(&xpp)? - f(&xpm)? - f(&xmp)? + f(&xmm)?) / (S::of(4.0) * hi * hj);
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    Ok(h)
}
