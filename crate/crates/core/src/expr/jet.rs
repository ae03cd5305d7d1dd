//! Second-order jets: value + gradient + full Hessian, propagated directly.
//!
//! Curvature needs exactly second derivatives of the metric, and chart
//! dimensions are tiny, so carrying the full Hessian through one code path is
//! cheaper and simpler than nesting first-order duals.

use super::{Expression, Func};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet2<S> {
    pub m: usize,
    pub value: S,
    pub grad: Vec<S>,
    /// Row-major m x m Hessian; symmetric by construction.
    pub hess: Vec<S>,
}

impl<S: Real> Jet2<S> {
    pub fn constant(m: usize, v: S) -> Self {
        Self { m, value: v, grad: vec![S::zero(); m], hess: vec![S::zero(); m * m] }
    }

    pub fn variable(m: usize, i: usize, v: S) -> Self {
        let mut j = Self::constant(m, v);
        j.grad[i] = S::one();
        j
    }

    pub fn hess_at(&self, i: usize, j: usize) -> S {
        self.hess[i * self.m + j]
    }

    fn check(self) -> Result<Self> {
        if !self.value.is_finite()
            || self.grad.iter().any(|x| !x.is_finite())
            || self.hess.iter().any(|x| !x.is_finite())
        {
            return Err(Error::Overflow);
        }
        Ok(self)
    }

    fn neg(&self) -> Self {
        Self {
            m: self.m,
            value: -self.value,
            grad: self.grad.iter().map(|x| -*x).collect(),
            hess: self.hess.iter().map(|x| -*x).collect(),
        }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            m: self.m,
            value: self.value + o.value,
            grad: self.grad.iter().zip(&o.grad).map(|(a, b)| *a + *b).collect(),
            hess: self.hess.iter().zip(&o.hess).map(|(a, b)| *a + *b).collect(),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            m: self.m,
            value: self.value - o.value,
            grad: self.grad.iter().zip(&o.grad).map(|(a, b)| *a - *b).collect(),
            hess: self.hess.iter().zip(&o.hess).map(|(a, b)| *a - *b).collect(),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let m = self.m;
        let mut grad = vec![S::zero(); m];
        for i in 0..m {
            grad[i] = self.grad[i] * o.value + self.value * o.grad[i];
        }
        let mut hess = vec![S::zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                hess[i * m + j] = self.hess[i * m + j] * o.value
                    + self.value * o.hess[i * m + j]
                    + self.grad[i] * o.grad[j]
                    + self.grad[j] * o.grad[i];
            }
        }
        Self { m, value: self.value * o.value, grad, hess }
    }

    /// Apply a scalar function given (f(u), f'(u), f''(u)).
    fn chain(&self, f0: S, f1: S, f2: S) -> Self {
        let m = self.m;
        let mut grad = vec![S::zero(); m];
        for i in 0..m {
            grad[i] = f1 * self.grad[i];
        }
        let mut hess = vec![S::zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                hess[i * m + j] = f1 * self.hess[i * m + j] + f2 * self.grad[i] * self.grad[j];
            }
        }
        Self { m, value: f0, grad, hess }
    }

    fn recip(&self) -> Result<Self> {
        let u = self.value;
        if u.abs() < S::of(1e-300) {
            return Err(Error::Domain("division by value below 1e-300".into()));
        }
        let inv = S::one() / u;
        Ok(self.chain(inv, -inv * inv, S::of(2.0) * inv * inv * inv))
    }

    fn powi(&self, n: i32) -> Result<Self> {
        let u = self.value;
        match n {
            0 => Ok(Self::constant(self.m, S::one())),
            1 => Ok(self.clone()),
            _ => {
                if n < 0 && u.abs() < S::of(1e-300) {
                    return Err(Error::Domain("negative power of value below 1e-300".into()));
                }
                let nf = S::of(n as f64);
                let f0 = u.powi(n);
                let f1 = nf * u.powi(n - 1);
                let f2 = nf * S::of((n - 1) as f64) * u.powi(n - 2);
                Ok(self.chain(f0, f1, f2))
            }
        }
    }
}

/// Evaluate value, gradient, and Hessian at a point.
pub fn eval_jet2<S: Real>(e: &Expression<S>, x: &[S]) -> Result<Jet2<S>> {
    let m = x.len();
    let jet = match e {
        Expression::Const(c) => Jet2::constant(m, *c),
        Expression::Var(i) => {
            debug_assert!(*i < m, "variable index out of range");
            Jet2::variable(m, *i, x[*i])
        }
        Expression::Neg(a) => eval_jet2(a, x)?.neg(),
        Expression::Add(a, b) => eval_jet2(a, x)?.add(&eval_jet2(b, x)?),
        Expression::Sub(a, b) => eval_jet2(a, x)?.sub(&eval_jet2(b, x)?),
        Expression::Mul(a, b) => eval_jet2(a, x)?.mul(&eval_jet2(b, x)?),
        Expression::Div(a, b) => eval_jet2(a, x)?.mul(&eval_jet2(b, x)?.recip()?),
        Expression::Pow(a, n) => eval_jet2(a, x)?.powi(*n)?,
        Expression::Apply(f, a) => {
            let u = eval_jet2(a, x)?;
            let v = u.value;
            match f {
                Func::Sin => u.chain(v.sin(), v.cos(), -v.sin()),
                Func::Cos => u.chain(v.cos(), -v.sin(), -v.cos()),
                Func::Exp => {
                    let ev = v.exp();
                    u.chain(ev, ev, ev)
                }
                Func::Log => {
                    if v <= S::zero() {
                        return Err(Error::Domain("log argument must be positive".into()));
                    }
                    let inv = S::one() / v;
                    u.chain(v.ln(), inv, -inv * inv)
                }
                Func::Sqrt => {
                    if v <= S::zero() {
                        return Err(Error::Domain("sqrt argument must be positive".into()));
                    }
                    let r = v.sqrt();
                    u.chain(r, S::of(0.5) / r, -S::of(0.25) / (r * v))
                }
            }
        }
    };
    jet.check()
}
