//! Text syntax for forms: `3*x0^2*x1 - 1/2*x2^3`.
//!
//! A term is a product of factors joined by `*`; a factor is an integer, a
//! fraction `p/q`, or a variable `<prefix><index>` with an optional `^k`.
//! Terms are joined by `+` or `-`. Whitespace is ignored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Form, Monomial};
use crate::error::{Result, WaringError};
use crate::numerics::Rational;

/// Parse a form in `x0, x1, ...`.
pub fn parse_form(text: &str, num_vars: usize) -> Result<Form<Rational>> {
    parse_polynomial(text, num_vars, "x")
}

/// Parse a homogeneous polynomial whose variables are `<prefix><index>`.
pub fn parse_polynomial(text: &str, num_vars: usize, prefix: &str) -> Result<Form<Rational>> {
    let terms = Parser::new(text, num_vars, prefix).terms()?;
    let nonzero: Vec<_> = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
    let degree = nonzero.first().map_or(0, |t| t.mono.degree());
    let offending: Vec<&str> = nonzero
        .iter()
        .filter(|t| t.mono.degree() != degree)
        .map(|t| t.text.as_str())
        .collect();
    if !offending.is_empty() {
        return Err(WaringError::NonHomogeneous {
            expected: degree,
            offending: offending.join(", "),
        });
    }
    let mut combined: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for t in nonzero {
        *combined.entry(t.mono).or_insert_with(Rational::zero) += t.coeff;
    }
    Form::from_terms(num_vars, degree, combined)
}

/// Inverse of [`parse_polynomial`].
pub fn render_polynomial(f: &Form<Rational>, prefix: &str) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in f.terms().enumerate() {
        let sep = match (k, c.is_negative()) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        out.push_str(sep);
        let mag = c.abs();
        let vars = render_monomial(m, prefix);
        if vars.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&vars);
        } else {
            out.push_str(&format!("{mag}*{vars}"));
        }
    }
    out
}

pub(crate) fn render_monomial(m: &Monomial, prefix: &str) -> String {
    m.exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("{prefix}{i}")
            } else {
                format!("{prefix}{i}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

struct RawTerm {
    coeff: Rational,
    mono: Monomial,
    text: String,
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    num_vars: usize,
    prefix: Vec<char>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, num_vars: usize, prefix: &str) -> Self {
        Parser {
            src,
            chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            num_vars,
            prefix: prefix.chars().collect(),
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |&(i, _)| i)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn error(&self, msg: impl Into<String>) -> WaringError {
        WaringError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        }
    }

    fn terms(&mut self) -> Result<Vec<RawTerm>> {
        if self.chars.is_empty() {
            return Err(self.error("empty input"));
        }
        let mut out = Vec::new();
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1
            }
            Some('+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let start = self.offset();
            let (mut coeff, mono) = self.term()?;
            if sign < 0 {
                coeff = -coeff;
            }
            let end = self.offset();
            out.push(RawTerm {
                coeff,
                mono,
                text: self.src[start..end].trim().to_string(),
            });
            match self.peek() {
                None => return Ok(out),
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(c) => return Err(self.error(format!("unexpected '{c}'"))),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Rational, Monomial)> {
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; self.num_vars];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.number()?,
                Some(c) if c == self.prefix[0] => {
                    let (i, e) = self.variable()?;
                    exps[i] = exps[i]
                        .checked_add(e)
                        .ok_or_else(|| self.error("exponent overflow"))?;
                }
                Some(c) => return Err(self.error(format!("expected a number or variable, found '{c}'"))),
                None => return Err(self.error("expected a term")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok((coeff, Monomial::new(exps)));
            }
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(s.parse().expect("ascii digits"))
    }

    fn number(&mut self) -> Result<Rational> {
        let num = self.digits()?;
        if self.peek() == Some('/') {
            self.pos += 1;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    fn variable(&mut self) -> Result<(usize, u32)> {
        for &p in &self.prefix {
            if self.peek() != Some(p) {
                return Err(self.error("malformed variable name"));
            }
            self.pos += 1;
        }
        let index = self.digits()?;
        let index: usize = index
            .try_into()
            .map_err(|_| self.error("variable index too large"))?;
        if index >= self.num_vars {
            return Err(WaringError::VariableOutOfRange {
                index,
                num_vars: self.num_vars,
            });
        }
        let mut e = 1u32;
        if self.peek() == Some('^') {
            self.pos += 1;
            e = self
                .digits()?
                .try_into()
                .map_err(|_| self.error("exponent too large"))?;
        }
        Ok((index, e))
    }
}
