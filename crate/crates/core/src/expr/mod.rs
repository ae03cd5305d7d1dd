//! Expression language for metrics, maps, and structure fields.
//!
//! Grammar (whitespace insignificant, no implicit multiplication):
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := "-" factor | atom ("^" integer)?
//! atom   := number | ident | func "(" expr ("," expr)* ")" | "(" expr ")"
//! ident  := "x" digit
//! func   := "sin" | "cos" | "exp" | "log" | "sqrt"
//! ```
//!
//! Numbers are decimal with optional exponent. `pow` takes integer exponents
//! only; general powers go through `exp`/`log`.

mod jet;
mod parse;

pub use jet::{eval_jet2, Jet2};
pub use parse::parse;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Expression AST. Variables are 0-based internally; `Var(0)` is `x1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression<S> {
    Const(S),
    Var(usize),
    Neg(Box<Expression<S>>),
    Add(Box<Expression<S>>, Box<Expression<S>>),
    Sub(Box<Expression<S>>, Box<Expression<S>>),
    Mul(Box<Expression<S>>, Box<Expression<S>>),
    Div(Box<Expression<S>>, Box<Expression<S>>),
    Pow(Box<Expression<S>>, i32),
    Apply(Func, Box<Expression<S>>),
}

impl<S: Real> Expression<S> {
    pub fn constant(x: f64) -> Self {
        Expression::Const(S::of(x))
    }

    /// Highest variable index used, plus one (0 for constant expressions).
    pub fn n_vars(&self) -> usize {
        match self {
            Expression::Const(_) => 0,
            Expression::Var(i) => i + 1,
            Expression::Neg(a) | Expression::Pow(a, _) | Expression::Apply(_, a) => a.n_vars(),
            Expression::Add(a, b)
            | Expression::Sub(a, b)
            | Expression::Mul(a, b)
            | Expression::Div(a, b) => a.n_vars().max(b.n_vars()),
        }
    }

    /// Evaluate at a point, with domain and overflow checks.
    pub fn eval(&self, x: &[S]) -> Result<S> {
        let v = match self {
            Expression::Const(c) => *c,
            Expression::Var(i) => {
                debug_assert!(*i < x.len(), "variable index out of range");
                x[*i]
            }
            Expression::Neg(a) => -a.eval(x)?,
            Expression::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expression::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expression::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expression::Div(a, b) => {
                let den = b.eval(x)?;
                if den.abs() < S::of(1e-300) {
                    return Err(Error::Domain("division by value below 1e-300".into()));
                }
                a.eval(x)? / den
            }
            Expression::Pow(a, n) => {
                let base = a.eval(x)?;
                if *n < 0 && base.abs() < S::of(1e-300) {
                    return Err(Error::Domain("negative power of value below 1e-300".into()));
                }
                base.powi(*n)
            }
            Expression::Apply(f, a) => {
                let u = a.eval(x)?;
                match f {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Exp => u.exp(),
                    Func::Log => {
                        if u <= S::zero() {
                            return Err(Error::Domain("log argument must be positive".into()));
                        }
                        u.ln()
                    }
                    Func::Sqrt => {
                        if u <= S::zero() {
                            return Err(Error::Domain("sqrt argument must be positive".into()));
                        }
                        u.sqrt()
                    }
                }
            }
        };
        if !v.is_finite() {
            return Err(Error::Overflow);
        }
        Ok(v)
    }

    /// Canonical printer; `parse(print(e))` is structurally `e`.
    pub fn print(&self) -> String {
        match self {
            Expression::Const(c) => format!("{:?}", c.as_f64()),
            Expression::Var(i) => format!("x{}", i + 1),
            Expression::Neg(a) => format!("-{}", a.print_factor()),
            Expression::Add(a, b) => format!("({}+{})", a.print(), b.print()),
            Expression::Sub(a, b) => format!("({}-{})", a.print(), b.print()),
            Expression::Mul(a, b) => format!("({}*{})", a.print(), b.print()),
            Expression::Div(a, b) => format!("({}/{})", a.print(), b.print()),
            Expression::Pow(a, n) => format!("{}^{}", a.print_atom(), n),
            Expression::Apply(f, a) => format!("{}({})", f.name(), a.print()),
        }
    }

    /// Print so the result can stand where `factor` is expected.
    fn print_factor(&self) -> String {
        match self {
            Expression::Add(..) | Expression::Sub(..) | Expression::Mul(..) | Expression::Div(..) => {
                format!("({})", self.print_inner())
            }
            _ => self.print(),
        }
    }

    /// Print so the result can stand where `atom` is expected.
    fn print_atom(&self) -> String {
        match self {
            Expression::Const(_) | Expression::Var(_) | Expression::Apply(..) => self.print(),
            _ => format!("({})", self.print_inner()),
        }
    }

    /// Like print() but without the redundant outermost parens for binaries.
    fn print_inner(&self) -> String {
        match self {
            Expression::Add(a, b) => format!("{}+{}", a.print(), b.print()),
            Expression::Sub(a, b) => format!("{}-{}", a.print(), b.print()),
            Expression::Mul(a, b) => format!("{}*{}", a.print(), b.print()),
            Expression::Div(a, b) => format!("{}/{}", a.print(), b.print()),
            _ => self.print(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = Expression<f64>;

    #[test]
    fn eval_simple() {
        let e: E = parse("x1*x1").unwrap();
        assert_eq!(e.eval(&[3.0]).unwrap(), 9.0);
    }

    #[test]
    fn pythagorean_identity() {
        let e: E = parse("sin(x1)^2 + cos(x1)^2").unwrap();
        for &t in &[0.0, 0.7, -2.3, 11.0] {
            assert!((e.eval(&[t]).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn domain_errors() {
        let e: E = parse("log(x1)").unwrap();
        assert!(matches!(e.eval(&[-1.0]), Err(Error::Domain(_))));
        let e: E = parse("sqrt(x1)").unwrap();
        assert!(matches!(e.eval(&[-1.0]), Err(Error::Domain(_))));
        let e: E = parse("1/x1").unwrap();
        assert!(matches!(e.eval(&[0.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn overflow_detected() {
        let e: E = parse("exp(exp(x1))").unwrap();
        assert!(matches!(e.eval(&[100.0]), Err(Error::Overflow)));
    }

    #[test]
    fn print_roundtrip_structures() {
        for src in [
            "x1*x1",
            "((x1+x2)*x3)",
            "-x1^2",
            "sin(x1)^2 + cos(x1)^2",
            "1/(1+x1^2)",
            "exp(-x1)*log(x2)",
            "x1-x2-x3",
            "2e-3*x1",
        ] {
            let e: E = parse(src).unwrap();
            let round: E = parse(&e.print()).unwrap();
            assert_eq!(e, round, "round-trip failed for {src}: printed {}", e.print());
        }
    }
}
