//! Text form of polynomials.
//!
//! ```text
//! poly  := term ("+" term)*
//! term  := coeff ("*" monom)? | monom
//! coeff := rational | "-inf"
//! monom := var ("^" int)? ("*" var ("^" int)?)*
//! ```
//!
//! `+` is the tropical sum and `*` the tropical product, so `3*x^2*y` is the
//! term with coefficient 3 on `x²y`. A bare monomial has coefficient 0 (the
//! unit). Variables are `x, y, z, w` or `x1 … xn`; the two schemes cannot be
//! mixed in one input.

use std::collections::BTreeMap;

use num::{BigInt, Signed, Zero};
use thiserror::Error;

use crate::poly::{Mode, Monomial, PolyError, Polynomial};
use crate::scalar::{format_rational, Rational, TropScalar};

const LETTERS: [char; 4] = ['x', 'y', 'z', 'w'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError { pos, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scheme {
    Letters,
    Indexed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var(Scheme, usize),
    NegInf,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((start, Tok::Plus));
                i += 1;
            }
            '*' => {
                out.push((start, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((start, Tok::Caret));
                i += 1;
            }
            '/' => {
                out.push((start, Tok::Slash));
                i += 1;
            }
            '-' => {
                if chars[i + 1..].starts_with(&['i', 'n', 'f']) {
                    out.push((start, Tok::NegInf));
                    i += 4;
                } else {
                    out.push((start, Tok::Minus));
                    i += 1;
                }
            }
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((start, Tok::Num(s.parse().expect("digits"))));
            }
            'a'..='z' => {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                let tok = if name.len() == 1 {
                    match LETTERS.iter().position(|&l| l == c) {
                        Some(idx) => Tok::Var(Scheme::Letters, idx),
                        None => return Err(ParseError::new(start, format!("unknown variable `{name}`"))),
                    }
                } else if c == 'x' {
                    let idx: usize = name[1..]
                        .parse()
                        .map_err(|_| ParseError::new(start, format!("bad variable `{name}`")))?;
                    if idx == 0 {
                        return Err(ParseError::new(start, "indexed variables start at x1"));
                    }
                    Tok::Var(Scheme::Indexed, idx - 1)
                } else {
                    return Err(ParseError::new(start, format!("unknown variable `{name}`")));
                };
                out.push((start, tok));
            }
            _ => return Err(ParseError::new(start, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

/// Smallest variable count that covers every variable used in `texts`.
pub fn infer_arity<S: AsRef<str>>(texts: &[S]) -> Result<usize, ParseError> {
    let mut scheme: Option<Scheme> = None;
    let mut n = 0;
    for text in texts {
        for (pos, tok) in lex(text.as_ref())? {
            if let Tok::Var(s, idx) = tok {
                match scheme {
                    Some(prev) if prev != s => {
                        return Err(ParseError::new(pos, "mixed variable naming schemes"));
                    }
                    _ => scheme = Some(s),
                }
                n = n.max(idx + 1);
            }
        }
    }
    Ok(n)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    n: usize,
    mode: Mode,
    scheme: Option<Scheme>,
}

impl Parser {
    fn new(text: &str, n: usize, mode: Mode) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, at: 0, end: text.len(), n, mode, scheme: None })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn done(&self) -> bool {
        self.at >= self.toks.len()
    }

    fn rational(&mut self, negative: bool) -> Result<Rational, ParseError> {
        let pos = self.pos();
        let Some(Tok::Num(num)) = self.bump() else {
            return Err(ParseError::new(pos, "expected a number"));
        };
        let mut q = Rational::from_integer(if negative { -num } else { num });
        if self.peek() == Some(&Tok::Slash) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Num(d)) if !d.is_zero() => q /= Rational::from_integer(d),
                _ => return Err(ParseError::new(pos, "expected a non-zero denominator")),
            }
        }
        Ok(q)
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Num(v)) => {
                let v: i64 = v.try_into().map_err(|_| ParseError::new(pos, "exponent too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(ParseError::new(pos, "expected an integer exponent")),
        }
    }

    fn var(&mut self) -> Result<usize, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Var(s, idx)) => {
                if let Some(prev) = self.scheme {
                    if prev != s {
                        return Err(ParseError::new(pos, "mixed variable naming schemes"));
                    }
                }
                self.scheme = Some(s);
                if idx >= self.n {
                    return Err(ParseError::new(
                        pos,
                        format!("variable index {} exceeds the {} available", idx + 1, self.n),
                    ));
                }
                Ok(idx)
            }
            _ => Err(ParseError::new(pos, "expected a variable")),
        }
    }

    fn monomial(&mut self) -> Result<Monomial, ParseError> {
        let start = self.pos();
        let mut exps = vec![0i64; self.n];
        loop {
            let v = self.var()?;
            let e = if self.peek() == Some(&Tok::Caret) {
                self.bump();
                self.integer()?
            } else {
                1
            };
            exps[v] += e;
            let continues = self.peek() == Some(&Tok::Star)
                && matches!(self.toks.get(self.at + 1), Some((_, Tok::Var(..))));
            if !continues {
                break;
            }
            self.bump();
        }
        let mono = Monomial::new(exps);
        if self.mode == Mode::Poly && !mono.is_nonnegative() {
            return Err(ParseError::new(start, "negative exponent in polynomial mode"));
        }
        Ok(mono)
    }

    /// One tropical term; `None` coefficient means bottom.
    fn term(&mut self) -> Result<(Monomial, TropScalar), ParseError> {
        let pos = self.pos();
        let coef = match self.peek() {
            Some(Tok::NegInf) => {
                self.bump();
                Some(TropScalar::bottom())
            }
            Some(Tok::Minus) => {
                self.bump();
                Some(TropScalar::finite(self.rational(true)?))
            }
            Some(Tok::Num(_)) => Some(TropScalar::finite(self.rational(false)?)),
            Some(Tok::Var(..)) => None,
            _ => return Err(ParseError::new(pos, "expected a term")),
        };
        match coef {
            None => Ok((self.monomial()?, TropScalar::unit())),
            Some(c) => {
                if self.peek() == Some(&Tok::Star) {
                    self.bump();
                    Ok((self.monomial()?, c))
                } else {
                    Ok((Monomial::one(self.n), c))
                }
            }
        }
    }

    fn polynomial(&mut self) -> Result<Polynomial, ParseError> {
        let mut terms = vec![self.term()?];
        while !self.done() {
            let pos = self.pos();
            if self.bump() != Some(Tok::Plus) {
                return Err(ParseError::new(pos, "expected `+`"));
            }
            terms.push(self.term()?);
        }
        Polynomial::from_terms(self.n, self.mode, terms).map_err(|e| ParseError::new(0, e.to_string()))
    }

    /// Classical polynomial with rational coefficients and `+`/`-` signs.
    fn classical(&mut self) -> Result<BTreeMap<Monomial, Rational>, ParseError> {
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let mut first = true;
        while first || !self.done() {
            let pos = self.pos();
            let negative = match self.peek() {
                Some(Tok::Minus) => {
                    self.bump();
                    true
                }
                Some(Tok::Plus) if !first => {
                    self.bump();
                    false
                }
                _ if first => false,
                _ => return Err(ParseError::new(pos, "expected `+` or `-`")),
            };
            first = false;
            let (coef, mono) = match self.peek() {
                Some(Tok::Num(_)) => {
                    let c = self.rational(negative)?;
                    if self.peek() == Some(&Tok::Star) {
                        self.bump();
                        (c, self.monomial()?)
                    } else {
                        (c, Monomial::one(self.n))
                    }
                }
                Some(Tok::Var(..)) => {
                    let c = Rational::from_integer(if negative { (-1).into() } else { 1.into() });
                    (c, self.monomial()?)
                }
                _ => return Err(ParseError::new(self.pos(), "expected a term")),
            };
            let entry = out.entry(mono).or_insert_with(Rational::zero);
            *entry += coef;
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

/// Parse with an explicit variable count.
pub fn parse_polynomial_n(text: &str, n: usize, mode: Mode) -> Result<Polynomial, ParseError> {
    let mut p = Parser::new(text, n, mode)?;
    if p.done() {
        return Err(ParseError::new(0, "empty polynomial"));
    }
    p.polynomial()
}

/// Parse, inferring the variable count from the variables that appear.
pub fn parse_polynomial(text: &str, mode: Mode) -> Result<Polynomial, ParseError> {
    let n = infer_arity(&[text])?;
    parse_polynomial_n(text, n, mode)
}

/// Parse several polynomials into a common ambient variable count.
pub fn parse_polynomials<S: AsRef<str>>(
    texts: &[S],
    n: Option<usize>,
    mode: Mode,
) -> Result<Vec<Polynomial>, ParseError> {
    let inferred = infer_arity(texts)?;
    let n = n.unwrap_or(inferred);
    texts.iter().map(|t| parse_polynomial_n(t.as_ref(), n, mode)).collect()
}

/// A bare monomial; `1` denotes the empty monomial.
pub fn parse_monomial_n(text: &str, n: usize, mode: Mode) -> Result<Monomial, ParseError> {
    if text.trim() == "1" {
        return Ok(Monomial::one(n));
    }
    let mut p = Parser::new(text, n, mode)?;
    let m = p.monomial()?;
    if !p.done() {
        return Err(ParseError::new(p.pos(), "trailing input after monomial"));
    }
    Ok(m)
}

/// A classical polynomial over the rationals, e.g. `x^2 - 3/2*x*y + 1`.
pub fn parse_classical_n(text: &str, n: usize, mode: Mode) -> Result<BTreeMap<Monomial, Rational>, ParseError> {
    let mut p = Parser::new(text, n, mode)?;
    if p.done() {
        return Err(ParseError::new(0, "empty polynomial"));
    }
    p.classical()
}

fn var_name(n: usize, i: usize) -> String {
    if n <= LETTERS.len() {
        LETTERS[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

pub fn format_monomial(m: &Monomial) -> String {
    let n = m.arity();
    let parts: Vec<String> = m
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| if e == 1 { var_name(n, i) } else { format!("{}^{}", var_name(n, i), e) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn monomials_descending(f: &Polynomial) -> Vec<(&Monomial, &Rational)> {
    let mut terms: Vec<_> = f.terms().collect();
    terms.sort_by(|a, b| b.0.graded_cmp(a.0));
    terms
}

/// Canonical tropical text; terms in decreasing graded order, `-inf` for zero.
pub fn format_polynomial(f: &Polynomial) -> String {
    if f.is_zero() {
        return "-inf".to_string();
    }
    monomials_descending(f)
        .into_iter()
        .map(|(m, c)| {
            let is_const = m.exps().iter().all(|&e| e == 0);
            match (is_const, c.is_zero()) {
                (true, _) => format_rational(c),
                (false, true) => format_monomial(m),
                (false, false) => format!("{}*{}", format_rational(c), format_monomial(m)),
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Classical text with `+`/`-` signs.
pub fn format_classical(terms: &BTreeMap<Monomial, Rational>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut sorted: Vec<_> = terms.iter().collect();
    sorted.sort_by(|a, b| b.0.graded_cmp(a.0));
    let mut out = String::new();
    for (k, (m, c)) in sorted.into_iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let is_const = m.exps().iter().all(|&e| e == 0);
        let unit = abs == Rational::from_integer(1.into());
        match (is_const, unit) {
            (true, _) => out.push_str(&format_rational(&abs)),
            (false, true) => out.push_str(&format_monomial(m)),
            (false, false) => {
                out.push_str(&format_rational(&abs));
                out.push('*');
                out.push_str(&format_monomial(m));
            }
        }
    }
    out
}

impl From<PolyError> for ParseError {
    fn from(e: PolyError) -> Self {
        ParseError::new(0, e.to_string())
    }
}
