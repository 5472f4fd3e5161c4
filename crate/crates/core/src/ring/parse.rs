//! Text grammar for polynomials and field elements.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*        divisors must be nonzero constants
//! unary  := ("-" | "+") unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | identifier | "[" expr "]" | "(" expr ")"
//! ```
//!
//! Identifiers are polynomial variables. Inside brackets the only
//! identifier allowed is the field's symbol (`a` for `GF(p^m)`, `x` for
//! `F_p(x)`), and the bracket must evaluate to a constant, e.g. `[a + 1]` or
//! `[(x + 1)/(x^2)]`.

use num_bigint::BigInt;

use super::field::{Elem, FieldSpec};
use super::poly::Poly;
use crate::error::{Error, Result};

struct Parser<'a> {
    field: &'a FieldSpec,
    src: &'a [u8],
    pos: usize,
    vars: Vec<String>,
    allow_vars: bool,
    constants: Vec<(String, Elem)>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                self.skip_ws();
                let at = self.pos;
                let d = self.unary()?;
                let Some(c) = d.constant_value() else {
                    self.pos = at;
                    return self.err("division by a non-constant");
                };
                let inv = self.field.inv(&c).or_else(|_| {
                    self.pos = at;
                    self.err("division by zero")
                })?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat(b'-') {
            return Ok(-&self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected a nonnegative integer exponent");
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            let e: u32 = match text.parse() {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let n: BigInt = text.parse().expect("digits");
                Ok(Poly::constant(self.field, self.field.from_bigint(&n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if let Some((_, c)) = self.constants.iter().find(|(n, _)| n == name) {
                    return Ok(Poly::constant(self.field, c.clone()));
                }
                if !self.allow_vars {
                    self.pos = start;
                    return self.err(format!("unexpected identifier {name:?}"));
                }
                if !self.vars.iter().any(|v| v == name) {
                    self.vars.push(name.to_string());
                }
                Ok(Poly::var(self.field, name))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let saved = (self.allow_vars, std::mem::take(&mut self.constants));
                self.allow_vars = false;
                if let (Some(sym), Some(g)) = (self.field.symbol(), self.field.generator()) {
                    self.constants.push((sym.to_string(), g));
                }
                let inner = self.expr();
                self.allow_vars = saved.0;
                self.constants = saved.1;
                let inner = inner?;
                if !self.eat(b']') {
                    return self.err("expected ']'");
                }
                Ok(inner)
            }
            Some(c) => self.err(format!("unexpected character {:?}", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

fn run(
    field: &FieldSpec,
    text: &str,
    vars: &[String],
    allow_vars: bool,
    constants: Vec<(String, Elem)>,
) -> Result<(Poly, Vec<String>)> {
    let mut p = Parser { field, src: text.as_bytes(), pos: 0, vars: vars.to_vec(), allow_vars, constants };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok((out, p.vars))
}

impl Poly {
    /// Parses a polynomial; variables are ordered by first appearance.
    pub fn parse(field: &FieldSpec, text: &str) -> Result<Poly> {
        Self::parse_with_vars(field, text, &[])
    }

    /// Parses a polynomial whose variable list starts with `vars`; further
    /// identifiers are appended in order of appearance.
    pub fn parse_with_vars(field: &FieldSpec, text: &str, vars: &[String]) -> Result<Poly> {
        let (p, vars) = run(field, text, vars, true, Vec::new())?;
        Ok(p.with_vars(&vars).expect("parser tracks every variable"))
    }
}

impl FieldSpec {
    /// Parses a constant. The field symbol may appear with or without
    /// brackets, so `a + 1` and `[a + 1]` both denote the same element.
    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let constants = match (self.symbol(), self.generator()) {
            (Some(s), Some(g)) => vec![(s.to_string(), g)],
            _ => Vec::new(),
        };
        let (p, _) = run(self, text, &[], false, constants)?;
        Ok(p.constant_value().expect("no variables allowed"))
    }
}
