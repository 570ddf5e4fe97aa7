//! Formal tropical (Laurent) polynomials, bend relations and pairs.
//!
//! A [`Polynomial`] is a finite map from exponent vectors to rational
//! coefficients. Absent keys carry the bottom coefficient, so the zero
//! polynomial is the empty map. Equality is formal equality of the maps;
//! two polynomials that agree as functions on `R^n` need not be equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Rational, TropScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("mode mismatch: {0:?} vs {1:?}")]
    ModeMismatch(Mode, Mode),
    #[error("negative exponent in polynomial mode: {0}")]
    NegativeExponent(Monomial),
    #[error("monomial {0} is not in the support")]
    NotInSupport(Monomial),
    #[error("point has {got} coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },
}

/// Whether negative exponents are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Laurent,
    Poly,
}

/// An exponent vector `u`, standing for `x^u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn new(exps: Vec<i64>) -> Self {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[i64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|a| -a).collect())
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    /// `u · p` for a rational point `p`.
    pub fn dot(&self, p: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(p)
            .fold(Rational::zero(), |acc, (&e, x)| acc + x * Rational::from_integer(e.into()))
    }

    /// Graded order: total degree first, then lexicographic on exponents.
    pub fn graded_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_monomial(self))
    }
}

/// A monomial with a non-bottom coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coef: Rational,
    pub mono: Monomial,
}

impl Term {
    pub fn new(coef: Rational, mono: Monomial) -> Self {
        Term { coef, mono }
    }

    pub fn mul(&self, other: &Term) -> Term {
        Term::new(&self.coef + &other.coef, self.mono.mul(&other.mono))
    }

    pub fn inv(&self) -> Term {
        Term::new(-self.coef.clone(), self.mono.inv())
    }

    /// `coef + u · p`.
    pub fn evaluate(&self, p: &[Rational]) -> Rational {
        &self.coef + self.mono.dot(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    mode: Mode,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(n: usize, mode: Mode) -> Self {
        Polynomial { n, mode, terms: BTreeMap::new() }
    }

    /// Build from terms, summing tropically on key collisions and dropping
    /// bottom coefficients.
    pub fn from_terms<I>(n: usize, mode: Mode, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, TropScalar)>,
    {
        let mut f = Polynomial::zero(n, mode);
        for (mono, coef) in terms {
            f.check_monomial(&mono)?;
            if let Some(c) = coef.into_value() {
                f.insert_max(mono, c);
            }
        }
        Ok(f)
    }

    pub fn from_term(n: usize, mode: Mode, term: Term) -> Result<Self, PolyError> {
        Self::from_terms(n, mode, [(term.mono, TropScalar::finite(term.coef))])
    }

    /// The constant polynomial `c`; `c = 0` is the multiplicative unit.
    pub fn constant(n: usize, mode: Mode, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::one(n), c);
        Polynomial { n, mode, terms }
    }

    pub fn one(n: usize, mode: Mode) -> Self {
        Self::constant(n, mode, Rational::zero())
    }

    pub fn variable(n: usize, mode: Mode, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(n, i), Rational::zero());
        Polynomial { n, mode, terms }
    }

    fn check_monomial(&self, mono: &Monomial) -> Result<(), PolyError> {
        if mono.arity() != self.n {
            return Err(PolyError::ArityMismatch(self.n, mono.arity()));
        }
        if self.mode == Mode::Poly && !mono.is_nonnegative() {
            return Err(PolyError::NegativeExponent(mono.clone()));
        }
        Ok(())
    }

    fn insert_max(&mut self, mono: Monomial, c: Rational) {
        match self.terms.get_mut(&mono) {
            Some(old) => {
                if c > *old {
                    *old = c;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.n != other.n {
            return Err(PolyError::ArityMismatch(self.n, other.n));
        }
        if self.mode != other.mode {
            return Err(PolyError::ModeMismatch(self.mode, other.mode));
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coefficient(&self, mono: &Monomial) -> TropScalar {
        self.terms.get(mono).cloned().map_or_else(TropScalar::bottom, TropScalar::finite)
    }

    pub fn contains(&self, mono: &Monomial) -> bool {
        self.terms.contains_key(mono)
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_list(&self) -> Vec<Term> {
        self.terms.iter().map(|(m, c)| Term::new(c.clone(), m.clone())).collect()
    }

    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().cloned().collect()
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Reinterpret in another mode. Moving to polynomial mode fails on
    /// negative exponents.
    pub fn with_mode(&self, mode: Mode) -> Result<Polynomial, PolyError> {
        if mode == Mode::Poly {
            if let Some(m) = self.terms.keys().find(|m| !m.is_nonnegative()) {
                return Err(PolyError::NegativeExponent(m.clone()));
            }
        }
        Ok(Polynomial { n: self.n, mode, terms: self.terms.clone() })
    }

    /// Formal tropical sum: coefficient-wise max.
    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_max(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Formal tropical product: max-plus convolution.
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = Polynomial::zero(self.n, self.mode);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_max(m1.mul(m2), c1 + c2);
            }
        }
        Ok(out)
    }

    pub fn mul_term(&self, term: &Term) -> Result<Polynomial, PolyError> {
        self.check_monomial(&term.mono)?;
        let mut out = Polynomial::zero(self.n, self.mode);
        for (m, c) in &self.terms {
            let mono = m.mul(&term.mono);
            out.check_monomial(&mono)?;
            out.terms.insert(mono, c + &term.coef);
        }
        Ok(out)
    }

    /// `f_î`: the polynomial with the term at `mono` removed.
    pub fn delete_term(&self, mono: &Monomial) -> Result<Polynomial, PolyError> {
        if !self.terms.contains_key(mono) {
            return Err(PolyError::NotInSupport(mono.clone()));
        }
        let mut out = self.clone();
        out.terms.remove(mono);
        Ok(out)
    }

    /// `bend(f) = {(f, f_î) : i ∈ supp(f)}`, in support order.
    pub fn bend_pairs(&self) -> Vec<Pair> {
        self.terms
            .keys()
            .map(|m| {
                let mut rest = self.clone();
                rest.terms.remove(m);
                Pair { left: self.clone(), right: rest }
            })
            .collect()
    }

    fn check_point(&self, p: &[Rational]) -> Result<(), PolyError> {
        if p.len() != self.n {
            return Err(PolyError::PointDimension { expected: self.n, got: p.len() });
        }
        Ok(())
    }

    /// `f(p) = max_u (a_u + u·p)`; bottom for the zero polynomial.
    pub fn evaluate(&self, p: &[Rational]) -> Result<TropScalar, PolyError> {
        self.check_point(p)?;
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| c + m.dot(p))
            .max()
            .map_or_else(TropScalar::bottom, TropScalar::finite))
    }

    /// Monomials whose terms attain `f(p)`.
    pub fn maximizers_at(&self, p: &[Rational]) -> Result<Vec<Monomial>, PolyError> {
        self.check_point(p)?;
        let values: Vec<(&Monomial, Rational)> =
            self.terms.iter().map(|(m, c)| (m, c + m.dot(p))).collect();
        let Some(best) = values.iter().map(|(_, v)| v).max().cloned() else {
            return Ok(Vec::new());
        };
        Ok(values.into_iter().filter(|(_, v)| *v == best).map(|(m, _)| m.clone()).collect())
    }

    /// True iff the maximum at `p` is attained by at least two terms.
    /// Monomials and the zero polynomial vanish nowhere.
    pub fn vanishes_at(&self, p: &[Rational]) -> Result<bool, PolyError> {
        Ok(self.maximizers_at(p)?.len() >= 2)
    }

    /// Image under the coefficient collapse `T → B`: every coefficient becomes 0.
    pub fn collapse_coefficients(&self) -> Polynomial {
        Polynomial {
            n: self.n,
            mode: self.mode,
            terms: self.terms.keys().map(|m| (m.clone(), Rational::zero())).collect(),
        }
    }

    /// Multiply every coefficient by the tropical scalar `c` (rational shift).
    pub fn shift(&self, c: &Rational) -> Polynomial {
        Polynomial {
            n: self.n,
            mode: self.mode,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v + c)).collect(),
        }
    }

    /// Substitute bottom for every variable in `vars`, dropping the terms
    /// that involve them, and remove those coordinates.
    pub fn substitute_bottom(&self, vars: &[usize]) -> Polynomial {
        let keep: Vec<usize> = (0..self.n).filter(|i| !vars.contains(i)).collect();
        let mut out = Polynomial::zero(keep.len(), self.mode);
        for (m, c) in &self.terms {
            if vars.iter().any(|&v| m.exps()[v] != 0) {
                continue;
            }
            let mono = Monomial::new(keep.iter().map(|&i| m.exps()[i]).collect());
            out.terms.insert(mono, c.clone());
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_polynomial(self))
    }
}

/// `f ⊕ g` or `f ⊙ g`.
pub fn poly_arith(f: &Polynomial, g: &Polynomial, kind: ArithKind) -> Result<Polynomial, PolyError> {
    match kind {
        ArithKind::Add => f.add(g),
        ArithKind::Mul => f.mul(g),
    }
}

/// An element of `R × R`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pair {
    pub left: Polynomial,
    pub right: Polynomial,
}

impl Pair {
    pub fn new(left: Polynomial, right: Polynomial) -> Result<Pair, PolyError> {
        left.check_compatible(&right)?;
        Ok(Pair { left, right })
    }

    /// The twisted-product identity `(1, 0)`.
    pub fn identity(n: usize, mode: Mode) -> Pair {
        Pair { left: Polynomial::one(n, mode), right: Polynomial::zero(n, mode) }
    }

    pub fn diagonal(f: Polynomial) -> Pair {
        Pair { left: f.clone(), right: f }
    }

    pub fn arity(&self) -> usize {
        self.left.arity()
    }

    pub fn mode(&self) -> Mode {
        self.left.mode()
    }

    pub fn is_diagonal(&self) -> bool {
        self.left == self.right
    }

    pub fn swap(&self) -> Pair {
        Pair { left: self.right.clone(), right: self.left.clone() }
    }

    /// Component-wise sum.
    pub fn add(&self, other: &Pair) -> Result<Pair, PolyError> {
        Ok(Pair { left: self.left.add(&other.left)?, right: self.right.add(&other.right)? })
    }

    /// Component-wise product `(ac, bd)`.
    pub fn mul_componentwise(&self, other: &Pair) -> Result<Pair, PolyError> {
        Ok(Pair { left: self.left.mul(&other.left)?, right: self.right.mul(&other.right)? })
    }

    /// `(α₁β₁ + α₂β₂, α₁β₂ + α₂β₁)`.
    pub fn twisted_mul(&self, other: &Pair) -> Result<Pair, PolyError> {
        let left = self.left.mul(&other.left)?.add(&self.right.mul(&other.right)?)?;
        let right = self.left.mul(&other.right)?.add(&self.right.mul(&other.left)?)?;
        Ok(Pair { left, right })
    }

    /// `α^k` under the twisted product, with `α^0 = (1, 0)`.
    pub fn twisted_pow(&self, k: u32) -> Result<Pair, PolyError> {
        let mut acc = Pair::identity(self.arity(), self.mode());
        for _ in 0..k {
            acc = acc.twisted_mul(self)?;
        }
        Ok(acc)
    }

    /// `a·(α₁, α₂) = (aα₁, aα₂)`.
    pub fn scale(&self, a: &Polynomial) -> Result<Pair, PolyError> {
        Ok(Pair { left: a.mul(&self.left)?, right: a.mul(&self.right)? })
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// Twisted product of two pairs.
pub fn twisted_mul(a: &Pair, b: &Pair) -> Result<Pair, PolyError> {
    a.twisted_mul(b)
}
