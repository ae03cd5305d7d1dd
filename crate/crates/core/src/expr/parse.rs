//! Recursive-descent parser with byte-offset error reporting.

use super::{Expression, Func};
use crate::error::{Error, Result};
use crate::scalar::Real;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub fn parse<S: Real>(text: &str) -> Result<Expression<S>> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax { offset: self.pos, message: msg.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<S: Real>(&mut self) -> Result<Expression<S>> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                self.skip_ws();
                let rhs = self.term()?;
                lhs = Expression::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'-') {
                self.skip_ws();
                let rhs = self.term()?;
                lhs = Expression::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term<S: Real>(&mut self) -> Result<Expression<S>> {
        let mut lhs = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                let rhs = self.factor()?;
                lhs = Expression::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'/') {
                self.skip_ws();
                let rhs = self.factor()?;
                lhs = Expression::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor<S: Real>(&mut self) -> Result<Expression<S>> {
        self.skip_ws();
        if self.eat(b'-') {
            self.skip_ws();
            let inner = self.factor()?;
            return Ok(Expression::Neg(Box::new(inner)));
        }
        let atom = self.atom()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let n = self.integer()?;
            return Ok(Expression::Pow(Box::new(atom), n));
        }
        Ok(atom)
    }

    fn integer(&mut self) -> Result<i32> {
        let start = self.pos;
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        self.skip_ws();
        let digits_start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.syntax("expected integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
        let magnitude: i64 = digits.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "integer exponent out of range".into(),
        })?;
        let signed = if neg { -magnitude } else { magnitude };
        i32::try_from(signed).map_err(|_| Error::Syntax {
            offset: start,
            message: "integer exponent out of range".into(),
        })
    }

    fn atom<S: Real>(&mut self) -> Result<Expression<S>> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(b'0'..=b'9') => self.number(),
            Some(c) if c.is_ascii_lowercase() => self.ident_or_call(),
            _ => Err(self.syntax("expected number, identifier, function call, or `(`")),
        }
    }

    fn number<S: Real>(&mut self) -> Result<Expression<S>> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.eat(b'.') {
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(b'0'..=b'9')) {
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.pos += 1;
                }
            } else {
                // not an exponent after all (e.g. `2*exp(x1)` seen as `2` `*`...)
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: f64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: format!("invalid number literal `{text}`"),
        })?;
        Ok(Expression::Const(S::of(v)))
    }

    fn ident_or_call<S: Real>(&mut self) -> Result<Expression<S>> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'a'..=b'z' | b'0'..=b'9')) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        let func = match name.as_str() {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "log" => Some(Func::Log),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        };
        if let Some(f) = func {
            self.skip_ws();
            if !self.eat(b'(') {
                return Err(self.syntax("expected `(` after function name"));
            }
            let mut args = vec![self.expr()?];
            self.skip_ws();
            while self.eat(b',') {
                args.push(self.expr()?);
                self.skip_ws();
            }
            if !self.eat(b')') {
                return Err(self.syntax("expected `)`"));
            }
            if args.len() != 1 {
                return Err(Error::Arity { func: name, expected: 1, got: args.len() });
            }
            return Ok(Expression::Apply(f, Box::new(args.pop().unwrap())));
        }
        // x1..x8
        if name.len() == 2 && name.as_bytes()[0] == b'x' {
            let d = name.as_bytes()[1];
            if (b'1'..=b'8').contains(&d) {
                return Ok(Expression::Var((d - b'1') as usize));
            }
        }
        Err(Error::UnknownIdentifier { offset: start, name })
    }
}
