//! Degree-truncated tropical linear algebra.
//!
//! Vectors are indexed by a fixed list of monomials. Span membership is
//! decided by max-plus residuation; the monomial elimination axiom is
//! checked against a membership oracle or a set of circuits; realizable
//! examples are tropicalized under the trivial valuation.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::linalg;
use crate::poly::{Mode, Monomial, PolyError, Polynomial};
use crate::prime::{member_ip, AdmissibleMatrix, PrimeError};
use crate::scalar::{Rational, TropScalar};
use crate::text::format_monomial;

/// Largest monomial window accepted by circuit enumeration.
pub const MAX_CIRCUIT_MONOMIALS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("vector length {got} does not match basis size {expected}")]
    Length { expected: usize, got: usize },
    #[error("monomial {0} lies outside the basis")]
    OutsideBasis(String),
    #[error("coefficients at position {0} are not equal and finite")]
    NoSharedCoefficient(usize),
    #[error("degree bound {d} is below generator degree {degree}")]
    DegreeTooSmall { d: i64, degree: i64 },
    #[error("{count} monomials exceed the enumeration cap of {cap}")]
    TooManyMonomials { count: usize, cap: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// An ordered list of monomials indexing vector coordinates, sorted in
/// descending graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    mode: Mode,
    monos: Vec<Monomial>,
}

fn exponent_box(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e| {
                (lo..=hi).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    out
}

impl MonomialBasis {
    fn from_monomials(n: usize, mode: Mode, mut monos: Vec<Monomial>) -> Self {
        monos.sort_by(|a, b| b.graded_cmp(a));
        monos.dedup();
        MonomialBasis { n, mode, monos }
    }

    /// All ordinary monomials of degree at most `d`.
    pub fn graded(n: usize, d: i64) -> Self {
        let monos =
            exponent_box(n, 0, d.max(0)).into_iter().filter(|e| e.iter().sum::<i64>() <= d).map(Monomial::new).collect();
        Self::from_monomials(n, Mode::Poly, monos)
    }

    /// Laurent monomials with every exponent in `[-d, d]`.
    pub fn laurent_window(n: usize, d: i64) -> Self {
        let monos = exponent_box(n, -d, d).into_iter().map(Monomial::new).collect();
        Self::from_monomials(n, Mode::Laurent, monos)
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.monos.iter().position(|x| x == m)
    }

    pub fn vector_of(&self, f: &Polynomial) -> Result<TropVector, LinearError> {
        if f.arity() != self.n {
            return Err(LinearError::Arity { expected: self.n, got: f.arity() });
        }
        let mut entries = vec![TropScalar::bottom(); self.len()];
        for (m, c) in f.terms() {
            let i = self.index_of(m).ok_or_else(|| LinearError::OutsideBasis(format_monomial(m)))?;
            entries[i] = TropScalar::finite(c.clone());
        }
        Ok(TropVector { entries })
    }

    pub fn polynomial_of(&self, v: &TropVector) -> Result<Polynomial, LinearError> {
        self.check(v)?;
        let terms = self.monos.iter().cloned().zip(v.entries.iter().cloned());
        Ok(Polynomial::from_terms(self.n, self.mode, terms)?)
    }

    fn check(&self, v: &TropVector) -> Result<(), LinearError> {
        if v.len() != self.len() {
            return Err(LinearError::Length { expected: self.len(), got: v.len() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TropVector {
    pub entries: Vec<TropScalar>,
}

impl TropVector {
    pub fn new(entries: Vec<TropScalar>) -> Self {
        TropVector { entries }
    }

    pub fn bottom(len: usize) -> Self {
        TropVector { entries: vec![TropScalar::bottom(); len] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.entries.iter().enumerate().filter(|(_, v)| !v.is_bottom()).map(|(i, _)| i).collect()
    }

    pub fn is_boolean(&self) -> bool {
        self.entries.iter().all(TropScalar::is_boolean)
    }

    /// `λ ⊙ self`.
    pub fn scale(&self, lambda: &TropScalar) -> TropVector {
        TropVector { entries: self.entries.iter().map(|v| v.mul(lambda)).collect() }
    }

    /// `self ⊕ other`.
    pub fn add(&self, other: &TropVector) -> TropVector {
        TropVector { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect() }
    }
}

/// `⊕_j λ_j ⊙ gens_j`.
pub fn combine(lambda: &[TropScalar], gens: &[TropVector], len: usize) -> TropVector {
    lambda.iter().zip(gens).fold(TropVector::bottom(len), |acc, (l, g)| acc.add(&g.scale(l)))
}

/// Coefficients `λ` with `v = ⊕_j λ_j ⊙ gens_j`, if any exist. The principal
/// solution `λ_j = min_i (v_i − g_ji)` over the finite entries of `g_j` is the
/// largest sub-solution, so `v` is in the span iff it attains `v`.
pub fn span_membership(v: &TropVector, gens: &[TropVector]) -> Result<Option<Vec<TropScalar>>, LinearError> {
    for g in gens {
        if g.len() != v.len() {
            return Err(LinearError::Length { expected: v.len(), got: g.len() });
        }
    }
    let lambda: Vec<TropScalar> = gens
        .iter()
        .map(|g| {
            let mut best: Option<TropScalar> = None;
            for (vi, gi) in v.entries.iter().zip(&g.entries) {
                let Some(gv) = gi.value() else { continue };
                let cand = match vi.value() {
                    Some(x) => TropScalar::finite(x - gv),
                    None => TropScalar::bottom(),
                };
                best = Some(match best {
                    Some(b) if b <= cand => b,
                    _ => cand,
                });
            }
            best.unwrap_or_else(TropScalar::bottom)
        })
        .collect();
    if combine(&lambda, gens, v.len()) == *v {
        Ok(Some(lambda))
    } else {
        Ok(None)
    }
}

/// A membership predicate on vectors over a fixed basis.
pub trait MembershipOracle {
    fn basis(&self) -> &MonomialBasis;

    fn is_member(&self, v: &TropVector) -> bool;

    /// Extra candidate values for position `pos` of an elimination
    /// candidate `h`, beyond the common value and bottom.
    fn coefficient_hints(&self, _h: &TropVector, _pos: usize) -> Vec<Rational> {
        Vec::new()
    }
}

/// `I‖(P)` for the prime of an admissible matrix, restricted to a basis.
#[derive(Debug, Clone)]
pub struct PrimeOracle {
    u: AdmissibleMatrix,
    basis: MonomialBasis,
}

impl PrimeOracle {
    pub fn new(u: AdmissibleMatrix, basis: MonomialBasis) -> Result<Self, LinearError> {
        if u.arity() != basis.arity() {
            return Err(LinearError::Arity { expected: basis.arity(), got: u.arity() });
        }
        Ok(PrimeOracle { u, basis })
    }

    pub fn matrix(&self) -> &AdmissibleMatrix {
        &self.u
    }

    /// Random members with 2 to `max_terms` terms: draw a vector, then move
    /// one coefficient onto a value that ties it with another term.
    pub fn sample_members<R: rand::Rng>(&self, rng: &mut R, count: usize, max_terms: usize) -> Vec<TropVector> {
        use rand::seq::index::sample;
        let len = self.basis.len();
        let mut out = Vec::with_capacity(count);
        if len < 2 {
            return out;
        }
        let mut attempts = 0;
        while out.len() < count && attempts < 100 * count.max(1) {
            attempts += 1;
            let k = rng.gen_range(2..=max_terms.clamp(2, len));
            let mut v = TropVector::bottom(len);
            let positions = sample(rng, len, k).into_vec();
            for &i in &positions {
                v.entries[i] = TropScalar::finite(crate::sampling::rational(rng, 3));
            }
            if !self.is_member(&v) {
                let pos = positions[rng.gen_range(0..positions.len())];
                let mut hints = self.coefficient_hints(&v, pos);
                hints.sort();
                for s in hints.into_iter().rev() {
                    let mut w = v.clone();
                    w.entries[pos] = TropScalar::finite(s);
                    if self.is_member(&w) {
                        v = w;
                        break;
                    }
                }
            }
            if self.is_member(&v) {
                out.push(v);
            }
        }
        out
    }
}

impl MembershipOracle for PrimeOracle {
    fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    fn is_member(&self, v: &TropVector) -> bool {
        self.basis.polynomial_of(v).ok().and_then(|f| member_ip(&self.u, &f).ok()).unwrap_or(false)
    }

    /// Coefficients `s` making the term at `pos` tie with another finite
    /// term of `h` under every row of `U`: `s·U₀ = U₀·c_w + U'·(w − v)`.
    fn coefficient_hints(&self, h: &TropVector, pos: usize) -> Vec<Rational> {
        let v = &self.basis.monos[pos];
        let mut out = Vec::new();
        for (w_idx, cw) in h.entries.iter().enumerate() {
            let Some(cw) = cw.value() else { continue };
            if w_idx == pos {
                continue;
            }
            let w = &self.basis.monos[w_idx];
            let diff: Vec<Rational> = w.exps().iter().zip(v.exps()).map(|(a, b)| Rational::from_integer((a - b).into())).collect();
            let mut s: Option<Rational> = None;
            let mut ok = true;
            for row in self.u.rows() {
                let rhs = &row[0] * cw + linalg::dot(&row[1..], &diff);
                if row[0].is_zero() {
                    ok &= rhs.is_zero();
                    continue;
                }
                let cand = rhs / &row[0];
                match &s {
                    Some(prev) if *prev != cand => ok = false,
                    _ => s = Some(cand),
                }
            }
            if let (true, Some(s)) = (ok, s) {
                out.push(s);
            }
        }
        out
    }
}

/// B-valued circuits of a tropicalized linear space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitSet {
    pub basis: MonomialBasis,
    pub circuits: Vec<TropVector>,
    /// Every singleton is a circuit: the truncation is the whole space.
    pub is_full: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitSetJson {
    pub monomials: Vec<String>,
    pub circuits: Vec<Vec<String>>,
    pub is_full: bool,
}

impl CircuitSet {
    pub fn supports(&self) -> Vec<BTreeSet<usize>> {
        self.circuits.iter().map(TropVector::support).collect()
    }

    /// Membership of a vector: B-valued with support a union of circuits.
    pub fn contains(&self, v: &TropVector) -> bool {
        if v.len() != self.basis.len() || !v.is_boolean() {
            return false;
        }
        let s = v.support();
        let covered: BTreeSet<usize> =
            self.supports().into_iter().filter(|c| c.is_subset(&s)).flatten().collect();
        covered == s
    }

    pub fn contains_polynomial(&self, f: &Polynomial) -> bool {
        self.basis.vector_of(f).map(|v| self.contains(&v)).unwrap_or(false)
    }

    pub fn to_json(&self) -> CircuitSetJson {
        let names = |s: BTreeSet<usize>| s.into_iter().map(|i| format_monomial(&self.basis.monos[i])).collect();
        CircuitSetJson {
            monomials: self.basis.monos.iter().map(format_monomial).collect(),
            circuits: self.circuits.iter().map(|c| names(c.support())).collect(),
            is_full: self.is_full,
        }
    }
}

impl MembershipOracle for CircuitSet {
    fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    fn is_member(&self, v: &TropVector) -> bool {
        self.contains(v)
    }
}

/// Search for `h` in the oracle's set with `h_u = ⊥`, `h_v = max(f_v, g_v)`
/// where those differ, and `h_v ≤ f_v` where they agree. Tie positions try
/// the common value, then oracle hints below it, then bottom.
pub fn elimination_witness(
    f: &TropVector,
    g: &TropVector,
    u: usize,
    oracle: &dyn MembershipOracle,
) -> Result<Option<TropVector>, LinearError> {
    let len = oracle.basis().len();
    for v in [f, g] {
        if v.len() != len {
            return Err(LinearError::Length { expected: len, got: v.len() });
        }
    }
    if u >= len || f.entries[u] != g.entries[u] || f.entries[u].is_bottom() {
        return Err(LinearError::NoSharedCoefficient(u));
    }
    let mut upper = f.add(g);
    upper.entries[u] = TropScalar::bottom();
    let ties: Vec<usize> =
        (0..len).filter(|&i| i != u && f.entries[i] == g.entries[i] && !f.entries[i].is_bottom()).collect();
    let options: Vec<Vec<TropScalar>> = ties
        .iter()
        .map(|&i| {
            let common = f.entries[i].clone();
            let mut opts = vec![common.clone()];
            let mut hints: Vec<Rational> = oracle.coefficient_hints(&upper, i);
            hints.sort_by(|a, b| b.cmp(a));
            hints.dedup();
            for s in hints {
                let s = TropScalar::finite(s);
                if s < common {
                    opts.push(s);
                }
            }
            opts.push(TropScalar::bottom());
            opts
        })
        .collect();
    let mut choice = vec![0usize; ties.len()];
    loop {
        let mut h = upper.clone();
        for (k, &i) in ties.iter().enumerate() {
            h.entries[i] = options[k][choice[k]].clone();
        }
        if oracle.is_member(&h) {
            return Ok(Some(h));
        }
        let mut k = 0;
        loop {
            if k == ties.len() {
                return Ok(None);
            }
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Outcome of an elimination-axiom check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomVerdict {
    Pass { triples: usize },
    Counterexample { f: TropVector, g: TropVector, u: usize },
}

impl AxiomVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomVerdict::Pass { .. })
    }
}

/// What the axiom is checked against.
pub enum AxiomInput<'a> {
    Circuits(&'a CircuitSet),
    Oracle { oracle: &'a dyn MembershipOracle, samples: &'a [TropVector], max_pairs: usize },
}

/// Run [`elimination_witness`] over pairs and shared monomials. For each
/// shared position `u`, `g` is rescaled so that `g_u = f_u`. Samples that the
/// oracle rejects are skipped.
pub fn check_tropical_axiom(input: AxiomInput<'_>) -> Result<AxiomVerdict, LinearError> {
    let (oracle, vectors, max_pairs): (&dyn MembershipOracle, Vec<TropVector>, usize) = match input {
        AxiomInput::Circuits(c) => (c, c.circuits.clone(), usize::MAX),
        AxiomInput::Oracle { oracle, samples, max_pairs } => {
            (oracle, samples.iter().filter(|s| oracle.is_member(s)).cloned().collect(), max_pairs)
        }
    };
    let mut pairs = 0;
    let mut triples = 0;
    for (i, f) in vectors.iter().enumerate() {
        for g in &vectors[i + 1..] {
            if pairs == max_pairs {
                return Ok(AxiomVerdict::Pass { triples });
            }
            pairs += 1;
            for u in f.support().intersection(&g.support()) {
                let (Some(fu), Some(gu)) = (f.entries[*u].value(), g.entries[*u].value()) else { continue };
                let g_scaled = g.scale(&TropScalar::finite(fu - gu));
                triples += 1;
                if elimination_witness(f, &g_scaled, *u, oracle)?.is_none() {
                    return Ok(AxiomVerdict::Counterexample { f: f.clone(), g: g_scaled, u: *u });
                }
            }
        }
    }
    Ok(AxiomVerdict::Pass { triples })
}

/// Circuits of `trop(J)_{≤d}` for `J` generated by classical rational
/// polynomials, under the trivial valuation.
pub fn truncated_tropicalization(
    gens: &[BTreeMap<Monomial, Rational>],
    n: usize,
    d: i64,
) -> Result<CircuitSet, LinearError> {
    let basis = MonomialBasis::graded(n, d);
    if basis.len() > MAX_CIRCUIT_MONOMIALS {
        return Err(LinearError::TooManyMonomials { count: basis.len(), cap: MAX_CIRCUIT_MONOMIALS });
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for g in gens {
        let degree = g.keys().map(Monomial::degree).max().unwrap_or(0);
        if degree > d {
            return Err(LinearError::DegreeTooSmall { d, degree });
        }
        for m in g.keys() {
            if m.arity() != n {
                return Err(LinearError::Arity { expected: n, got: m.arity() });
            }
        }
        for shift in MonomialBasis::graded(n, d - degree).monos {
            let mut row = vec![Rational::zero(); basis.len()];
            for (m, c) in g {
                let idx = basis.index_of(&m.mul(&shift)).expect("degree within window");
                row[idx] += c;
            }
            rows.push(row);
        }
    }
    linalg::rref(&mut rows);
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    let k = rows.len();
    let cols = basis.len();
    let mut supports: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    if k > 0 {
        for zero_cols in subsets(cols, k - 1) {
            // combinations y of the basis rows with (y·rows)[c] = 0 for c in zero_cols
            let system: Vec<Vec<Rational>> =
                zero_cols.iter().map(|&c| rows.iter().map(|r| r[c].clone()).collect()).collect();
            if linalg::rank(&system) != k - 1 {
                continue;
            }
            let y = &linalg::nullspace(&system, k)[0];
            let support: BTreeSet<usize> = (0..cols)
                .filter(|&c| !linalg::dot(y, &rows.iter().map(|r| r[c].clone()).collect::<Vec<_>>()).is_zero())
                .collect();
            supports.insert(support);
        }
    }
    let minimal: Vec<BTreeSet<usize>> =
        supports.iter().filter(|s| !supports.iter().any(|t| t != *s && t.is_subset(s))).cloned().collect();
    let circuits = minimal
        .iter()
        .map(|s| {
            let mut v = TropVector::bottom(cols);
            for &i in s {
                v.entries[i] = TropScalar::unit();
            }
            v
        })
        .collect();
    Ok(CircuitSet { basis, circuits, is_full: k == cols && cols > 0 })
}

/// All `k`-element subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
