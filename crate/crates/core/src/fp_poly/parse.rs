//! Text form of polynomials.
//!
//! ```text
//! polynomial := term (" + " term)* | "0"
//! term       := coeff | [coeff "*"] factor ("*" factor)*
//! factor     := "x" index ["^" exponent]
//! ```
//!
//! Coefficients are residues in `[1, p)`, variable indices run from 1 to `n`. Whitespace
//! between tokens is ignored.

use std::fmt::Write;

use crate::error::{Error, Result};

use super::monomial::Monomial;
use super::poly::Poly;
use super::prime::Prime;

/// Renders `f` with terms in descending grevlex order.
pub fn format_poly(f: &Poly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in f.terms().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        format_term(&mut out, m, c);
    }
    out
}

/// Renders a single monomial with unit coefficient.
pub fn format_monomial(m: &Monomial) -> String {
    let mut out = String::new();
    format_term(&mut out, m, 1);
    out
}

fn format_term(out: &mut String, m: &Monomial, c: u64) {
    let mut first = true;
    if c != 1 || m.is_one() {
        write!(out, "{c}").unwrap();
        first = false;
    }
    for (j, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        write!(out, "x{}", j + 1).unwrap();
        if e != 1 {
            write!(out, "^{e}").unwrap();
        }
    }
}

pub fn parse_poly(text: &str, n: usize, p: Prime) -> Result<Poly> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
        n,
        p,
    }
    .polynomial()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
    p: Prime,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        digits.parse().or_else(|_| {
            self.pos = start;
            self.err("number too large")
        })
    }

    fn polynomial(mut self) -> Result<Poly> {
        if self.peek().is_none() {
            return self.err("empty input");
        }
        let save = self.pos;
        if self.number().ok() == Some(0) && self.peek().is_none() {
            return Ok(Poly::zero(self.n, self.p));
        }
        self.pos = save;
        let mut terms = Vec::new();
        loop {
            terms.push(self.term()?);
            match self.peek() {
                None => break,
                Some(b'+') => self.pos += 1,
                Some(_) => return self.err("expected '+' or end of input"),
            }
        }
        Ok(Poly::from_terms(self.n, self.p, terms))
    }

    fn term(&mut self) -> Result<(Monomial, u64)> {
        let mut coeff = 1;
        let mut mono = Monomial::one(self.n);
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            let start = self.pos;
            coeff = self.number()?;
            if coeff == 0 || coeff >= self.p.value() {
                self.pos = start;
                return self.err(format!("coefficient {coeff} outside [1, {})", self.p));
            }
            if !self.eat(b'*') {
                return Ok((mono, coeff));
            }
        }
        loop {
            mono = mono.mul(&self.factor()?).or_else(|e| self.err(e.to_string()))?;
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((mono, coeff))
    }

    fn factor(&mut self) -> Result<Monomial> {
        if !self.eat(b'x') {
            return self.err("expected a variable 'x<index>'");
        }
        let start = self.pos;
        let index = self.number()?;
        if index == 0 || index > self.n as u64 {
            self.pos = start;
            return self.err(format!("variable index {index} outside 1..={}", self.n));
        }
        let exp = if self.eat(b'^') { self.number()? } else { 1 };
        Monomial::var_power(self.n, index as usize - 1, exp).or_else(|e| self.err(e.to_string()))
    }
}
