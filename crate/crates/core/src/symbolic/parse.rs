//! Reader and printer for the expression language
//! `u[alpha;c1,...,cm]`, integers, `+ - * / ^` and parentheses.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{JetVar, Monomial, Poly, RatExpr, Rational};
use crate::error::{Error, Result};
use crate::multiindex::{MultiIndex, MAX_SLOTS};

/// Declared bounds checked while reading variables. `None` means unchecked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExprContext {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
}

impl ExprContext {
    pub fn new(m: usize, n: usize, k: usize) -> Self {
        ExprContext {
            m: Some(m),
            n: Some(n),
            k: Some(k),
        }
    }
}

pub fn parse_expr(src: &str, ctx: &ExprContext) -> Result<RatExpr> {
    parse_expr_at(src, 0, ctx)
}

/// Parses `src[start..]`, reporting positions relative to the whole of `src`.
pub(crate) fn parse_expr_at(src: &str, start: usize, ctx: &ExprContext) -> Result<RatExpr> {
    let mut p = Parser {
        src,
        pos: start,
        ctx,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("expected an expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(&format!("unexpected character '{c}'")));
    }
    Ok(e)
}

/// Line and column (both 1-based, columns in characters) of a byte offset.
pub(crate) fn line_col(src: &str, pos: usize) -> (usize, usize) {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
    (line, col)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ctx: &'a ExprContext,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, pos: usize, message: &str) -> Error {
        let (line, column) = line_col(self.src, pos);
        Error::SyntaxError {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        if self.eat(want) {
            Ok(())
        } else {
            let found = match self.peek() {
                Some(c) => format!("'{c}'"),
                None => "end of input".to_string(),
            };
            Err(self.error(&format!("expected '{want}', found {found}")))
        }
    }

    fn expr(&mut self) -> Result<RatExpr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else {
                self.skip_ws();
                let at = self.pos;
                if !self.eat('/') {
                    return Ok(acc);
                }
                let d = self.unary()?;
                acc = acc
                    .div(&d)
                    .map_err(|_| self.error_at(at, "division by zero"))?;
            }
        }
    }

    fn unary(&mut self) -> Result<RatExpr> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RatExpr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        let e = self.integer()?;
        let e: u32 = match u32::try_from(&e) {
            Ok(e) if (1..=10_000).contains(&e) => e,
            _ => return Err(self.error_at(at, "exponent must be a positive integer")),
        };
        Ok(base.pow(e as i32).expect("positive power"))
    }

    fn atom(&mut self) -> Result<RatExpr> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatExpr::constant(Rational::from_integer(n)))
            }
            Some('u') => self.variable(),
            Some(c) => Err(self.error(&format!("unexpected character '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn small_integer(&mut self, what: &str) -> Result<usize> {
        self.skip_ws();
        let at = self.pos;
        let n = self.integer()?;
        usize::try_from(&n)
            .ok()
            .filter(|&n| n <= u16::MAX as usize)
            .ok_or_else(|| self.error_at(at, &format!("{what} is too large")))
    }

    fn variable(&mut self) -> Result<RatExpr> {
        let start = self.pos;
        self.bump();
        self.expect('[')?;
        let alpha = self.small_integer("dependent index")?;
        self.expect(';')?;
        let mut counts = vec![self.small_integer("multi-index entry")?];
        while self.eat(',') {
            counts.push(self.small_integer("multi-index entry")?);
        }
        self.expect(']')?;
        let (line, column) = line_col(self.src, start);
        let here = format!("line {line}, column {column}");
        if alpha < 1 || self.ctx.n.is_some_and(|n| alpha > n) {
            return Err(Error::IndexOutOfRange(format!(
                "dependent index {alpha} outside 1..={} at {here}",
                self.ctx.n.map_or("n".to_string(), |n| n.to_string())
            )));
        }
        if counts.len() > MAX_SLOTS || self.ctx.m.is_some_and(|m| counts.len() != m) {
            return Err(Error::IndexOutOfRange(format!(
                "multi-index has {} slots, expected {} at {here}",
                counts.len(),
                self.ctx.m.map_or(format!("at most {MAX_SLOTS}"), |m| m.to_string())
            )));
        }
        let counts: Vec<u16> = counts.into_iter().map(|c| c as u16).collect();
        let index = MultiIndex::from_counts(&counts);
        if let Some(k) = self.ctx.k {
            if index.len() > k {
                return Err(Error::IndexOutOfRange(format!(
                    "order {} exceeds declared k = {k} at {here}",
                    index.len()
                )));
            }
        }
        Ok(RatExpr::var(JetVar::new(alpha, index)))
    }
}

fn write_monomial(out: &mut String, m: &Monomial) {
    for (i, (v, e)) in m.factors().iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        write!(out, "{v}").unwrap();
        if *e > 1 {
            write!(out, "^{e}").unwrap();
        }
    }
}

fn write_magnitude(out: &mut String, c: &Rational) {
    let a = c.abs();
    if a.is_integer() {
        write!(out, "{}", a.numer()).unwrap();
    } else {
        write!(out, "{}/{}", a.numer(), a.denom()).unwrap();
    }
}

/// Prints a polynomial with the leading term first.
pub(crate) fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().rev().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if m.is_one() {
            write_magnitude(&mut out, c);
        } else {
            if !c.abs().is_one() {
                write_magnitude(&mut out, c);
                out.push('*');
            }
            write_monomial(&mut out, m);
        }
    }
    out
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = format_poly(self.num());
        if self.den().is_one() {
            return f.write_str(&num);
        }
        let den = format_poly(self.den());
        let num_atomic = self.num().len() == 1;
        let den_atomic = self.den().len() == 1
            && self.den().terms()[0].1.is_one()
            && self.den().terms()[0].0.factors().len() == 1;
        let wrap = |s: String, atomic: bool| if atomic { s } else { format!("({s})") };
        write!(f, "{}/{}", wrap(num, num_atomic), wrap(den, den_atomic))
    }
}
