//! Exact rational polyhedra `{x : Ax ≤ b, Cx = d}`.
//!
//! Feasibility, dimension and relative-interior points are decided by
//! Gaussian substitution of equalities followed by Fourier–Motzkin
//! elimination with strictness tracking. Redundancy pruning is limited to
//! parallel constraints, which is enough at desk scale (a handful of
//! coordinates, a few dozen constraints).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::scalar::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedronError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    Ambient(usize, usize),
    #[error("polyhedron is empty")]
    Empty,
    #[error("coordinate {index} out of range for dimension {n}")]
    Coordinate { index: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

/// `normal · x ≤ rhs` or `normal · x = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    pub normal: Vec<Rational>,
    pub rhs: Rational,
    pub relation: Relation,
}

impl HalfSpace {
    pub fn le(normal: Vec<Rational>, rhs: Rational) -> Self {
        HalfSpace { normal, rhs, relation: Relation::Le }
    }

    pub fn eq(normal: Vec<Rational>, rhs: Rational) -> Self {
        HalfSpace { normal, rhs, relation: Relation::Eq }
    }

    /// `normal · x ≥ rhs`.
    pub fn ge(normal: Vec<Rational>, rhs: Rational) -> Self {
        HalfSpace::le(normal.into_iter().map(|v| -v).collect(), -rhs)
    }

    pub fn satisfied_by(&self, p: &[Rational]) -> bool {
        let lhs = linalg::dot(&self.normal, p);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Inequality `a·x < b` (strict) or `a·x ≤ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Ineq {
    a: Vec<Rational>,
    b: Rational,
    strict: bool,
}

impl Ineq {
    /// Scale so the first non-zero coefficient has absolute value one.
    fn normalized(mut self) -> Ineq {
        if let Some(lead) = self.a.iter().find(|v| !v.is_zero()).map(|v| v.abs()) {
            for v in self.a.iter_mut() {
                *v /= &lead;
            }
            self.b /= &lead;
        }
        self
    }

    fn is_trivial(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    /// For an all-zero row: does `0 < b` / `0 ≤ b` hold?
    fn trivially_holds(&self) -> bool {
        if self.strict {
            self.b.is_positive()
        } else {
            !self.b.is_negative()
        }
    }
}

/// Substitution `x_var = (rhs - Σ coef_k x_k)` recorded during equality elimination.
#[derive(Debug, Clone)]
struct Substitution {
    var: usize,
    coefs: Vec<Rational>,
    rhs: Rational,
}

/// Drop trivial rows and keep only the tightest of each parallel family.
/// Returns `None` when a trivial row is violated.
fn prune(rows: Vec<Ineq>) -> Option<Vec<Ineq>> {
    let mut best: BTreeMap<Vec<Rational>, (Rational, bool)> = BTreeMap::new();
    for r in rows {
        let r = r.normalized();
        if r.is_trivial() {
            if !r.trivially_holds() {
                return None;
            }
            continue;
        }
        match best.get_mut(&r.a) {
            Some((b, strict)) => match r.b.cmp(b) {
                Ordering::Less => {
                    *b = r.b;
                    *strict = r.strict;
                }
                Ordering::Equal => *strict |= r.strict,
                Ordering::Greater => {}
            },
            None => {
                best.insert(r.a, (r.b, r.strict));
            }
        }
    }
    Some(best.into_iter().map(|(a, (b, strict))| Ineq { a, b, strict }).collect())
}

/// Fourier–Motzkin step eliminating coordinate `j`.
fn eliminate(rows: &[Ineq], j: usize) -> Option<Vec<Ineq>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for r in rows {
        if r.a[j].is_positive() {
            pos.push(r);
        } else if r.a[j].is_negative() {
            neg.push(r);
        } else {
            out.push(r.clone());
        }
    }
    for p in &pos {
        for q in &neg {
            let sp = Rational::from_integer(1.into()) / &p.a[j];
            let sq = Rational::from_integer(1.into()) / (-&q.a[j]);
            let a: Vec<Rational> = p.a.iter().zip(&q.a).map(|(x, y)| x * &sp + y * &sq).collect();
            let mut a = a;
            a[j] = Rational::zero();
            out.push(Ineq { a, b: &p.b * &sp + &q.b * &sq, strict: p.strict || q.strict });
        }
    }
    prune(out)
}

/// Substitute `x_var` by the expression of `sub` in `row` (coefficients only).
fn substitute(a: &mut [Rational], b: &mut Rational, sub: &Substitution) {
    let c = a[sub.var].clone();
    if c.is_zero() {
        return;
    }
    for (k, v) in sub.coefs.iter().enumerate() {
        if !v.is_zero() {
            a[k] -= &c * v;
        }
    }
    a[sub.var] = Rational::zero();
    *b -= &c * &sub.rhs;
}

/// Eliminate equalities one by one; `None` if they are inconsistent.
fn solve_equalities(
    n: usize,
    eqs: Vec<(Vec<Rational>, Rational)>,
    ineqs: &mut [Ineq],
) -> Option<Vec<Substitution>> {
    let mut subs: Vec<Substitution> = Vec::new();
    let mut pending = eqs;
    while let Some((mut a, mut b)) = pending.pop() {
        for s in &subs {
            substitute(&mut a, &mut b, s);
        }
        let Some(var) = (0..n).find(|&k| !a[k].is_zero()) else {
            if b.is_zero() {
                continue;
            }
            return None;
        };
        let lead = a[var].clone();
        let coefs: Vec<Rational> =
            a.iter().enumerate().map(|(k, v)| if k == var { Rational::zero() } else { v / &lead }).collect();
        let sub = Substitution { var, coefs, rhs: &b / &lead };
        for s in subs.iter_mut() {
            // keep earlier substitutions expressed in the remaining free variables
            let mut sa = s.coefs.clone();
            let mut sb = s.rhs.clone();
            substitute(&mut sa, &mut sb, &sub);
            s.coefs = sa;
            s.rhs = sb;
        }
        subs.push(sub);
    }
    for row in ineqs.iter_mut() {
        for s in &subs {
            substitute(&mut row.a, &mut row.b, s);
        }
    }
    Some(subs)
}

/// Choose a value for coordinate `j` inside the bounds given by `rows`, all
/// other coordinates being fixed in `x`.
fn pick_value(rows: &[Ineq], j: usize, x: &[Rational]) -> Rational {
    let mut lo: Option<(Rational, bool)> = None;
    let mut hi: Option<(Rational, bool)> = None;
    for r in rows {
        let c = &r.a[j];
        if c.is_zero() {
            continue;
        }
        let rest: Rational = r
            .a
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .fold(Rational::zero(), |acc, (k, v)| acc + v * &x[k]);
        let bound = (&r.b - rest) / c;
        if c.is_positive() {
            let tighter = hi.as_ref().is_none_or(|(h, s)| bound < *h || (bound == *h && r.strict && !s));
            if tighter {
                hi = Some((bound, r.strict));
            }
        } else {
            let tighter = lo.as_ref().is_none_or(|(l, s)| bound > *l || (bound == *l && r.strict && !s));
            if tighter {
                lo = Some((bound, r.strict));
            }
        }
    }
    let one = int(1);
    match (lo, hi) {
        (Some((l, _)), Some((h, _))) => (l + h) / int(2),
        (Some((l, _)), None) => l + one,
        (None, Some((h, _))) => h - one,
        (None, None) => Rational::zero(),
    }
}

/// A point satisfying every equality and inequality (strict ones strictly),
/// or `None` when the system is infeasible.
fn find_point(n: usize, eqs: Vec<(Vec<Rational>, Rational)>, mut ineqs: Vec<Ineq>) -> Option<Vec<Rational>> {
    let subs = solve_equalities(n, eqs, &mut ineqs)?;
    let mut stages: Vec<(usize, Vec<Ineq>)> = Vec::new();
    let mut rows = prune(ineqs)?;
    for j in 0..n {
        if rows.iter().all(|r| r.a[j].is_zero()) {
            continue;
        }
        let next = eliminate(&rows, j)?;
        stages.push((j, rows));
        rows = next;
    }
    let mut x = vec![Rational::zero(); n];
    for (j, stage_rows) in stages.iter().rev() {
        x[*j] = pick_value(stage_rows, *j, &x);
    }
    for s in subs.iter().rev() {
        let v = &s.rhs - linalg::dot(&s.coefs, &x);
        x[s.var] = v;
    }
    Some(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    n: usize,
    constraints: Vec<HalfSpace>,
}

impl Polyhedron {
    /// All of `R^n`.
    pub fn full(n: usize) -> Self {
        Polyhedron { n, constraints: Vec::new() }
    }

    pub fn new(n: usize, constraints: Vec<HalfSpace>) -> Result<Self, PolyhedronError> {
        for c in &constraints {
            if c.normal.len() != n {
                return Err(PolyhedronError::Ambient(n, c.normal.len()));
            }
        }
        Ok(Polyhedron { n, constraints })
    }

    pub fn point(p: &[Rational]) -> Self {
        let n = p.len();
        let constraints = (0..n)
            .map(|i| {
                let mut e = vec![Rational::zero(); n];
                e[i] = int(1);
                HalfSpace::eq(e, p[i].clone())
            })
            .collect();
        Polyhedron { n, constraints }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &[HalfSpace] {
        &self.constraints
    }

    pub fn push(&mut self, h: HalfSpace) -> Result<(), PolyhedronError> {
        if h.normal.len() != self.n {
            return Err(PolyhedronError::Ambient(self.n, h.normal.len()));
        }
        self.constraints.push(h);
        Ok(())
    }

    fn split(&self) -> (Vec<(Vec<Rational>, Rational)>, Vec<Ineq>) {
        let mut eqs = Vec::new();
        let mut ineqs = Vec::new();
        for c in &self.constraints {
            match c.relation {
                Relation::Eq => eqs.push((c.normal.clone(), c.rhs.clone())),
                Relation::Le => ineqs.push(Ineq { a: c.normal.clone(), b: c.rhs.clone(), strict: false }),
            }
        }
        (eqs, ineqs)
    }

    pub fn contains_point(&self, p: &[Rational]) -> bool {
        p.len() == self.n && self.constraints.iter().all(|c| c.satisfied_by(p))
    }

    /// Some point of the polyhedron.
    pub fn any_point(&self) -> Option<Vec<Rational>> {
        let (eqs, ineqs) = self.split();
        find_point(self.n, eqs, ineqs)
    }

    pub fn is_empty(&self) -> bool {
        self.any_point().is_none()
    }

    /// Is there a point satisfying all constraints and `extra` strictly?
    fn feasible_with_strict(&self, extra: &[(Vec<Rational>, Rational)]) -> bool {
        let (eqs, mut ineqs) = self.split();
        ineqs.extend(extra.iter().map(|(a, b)| Ineq { a: a.clone(), b: b.clone(), strict: true }));
        find_point(self.n, eqs, ineqs).is_some()
    }

    /// Indices of the `≤` constraints that hold with equality on the whole
    /// (non-empty) polyhedron.
    pub fn implicit_equalities(&self) -> Vec<usize> {
        self.constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| c.relation == Relation::Le)
            .filter(|(_, c)| !self.feasible_with_strict(&[(c.normal.clone(), c.rhs.clone())]))
            .map(|(i, _)| i)
            .collect()
    }

    /// Normals of all explicit and implied equalities.
    fn equality_normals(&self, implicit: &[usize]) -> Vec<Vec<Rational>> {
        self.constraints
            .iter()
            .enumerate()
            .filter(|(i, c)| c.relation == Relation::Eq || implicit.contains(i))
            .map(|(_, c)| c.normal.clone())
            .collect()
    }

    /// Dimension of the affine hull; −1 when empty.
    pub fn dimension(&self) -> i64 {
        if self.is_empty() {
            return -1;
        }
        let implicit = self.implicit_equalities();
        self.n as i64 - linalg::rank(&self.equality_normals(&implicit)) as i64
    }

    /// A rational point satisfying every non-implied inequality strictly.
    pub fn relative_interior_point(&self) -> Result<Vec<Rational>, PolyhedronError> {
        if self.is_empty() {
            return Err(PolyhedronError::Empty);
        }
        let implicit = self.implicit_equalities();
        let mut eqs = Vec::new();
        let mut ineqs = Vec::new();
        for (i, c) in self.constraints.iter().enumerate() {
            if c.relation == Relation::Eq || implicit.contains(&i) {
                eqs.push((c.normal.clone(), c.rhs.clone()));
            } else {
                ineqs.push(Ineq { a: c.normal.clone(), b: c.rhs.clone(), strict: true });
            }
        }
        find_point(self.n, eqs, ineqs).ok_or(PolyhedronError::Empty)
    }

    /// Relative-interior point together with a rational basis of the
    /// directions of the affine hull.
    pub fn affine_hull(&self) -> Result<(Vec<Rational>, Vec<Vec<Rational>>), PolyhedronError> {
        let point = self.relative_interior_point()?;
        let implicit = self.implicit_equalities();
        let basis = linalg::nullspace(&self.equality_normals(&implicit), self.n);
        Ok((point, basis))
    }

    /// Constraints that are not (explicit or implied) equalities.
    pub fn proper_inequalities(&self) -> Vec<&HalfSpace> {
        let implicit = self.implicit_equalities();
        self.constraints
            .iter()
            .enumerate()
            .filter(|(i, c)| c.relation == Relation::Le && !implicit.contains(i))
            .map(|(_, c)| c)
            .collect()
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron, PolyhedronError> {
        if self.n != other.n {
            return Err(PolyhedronError::Ambient(self.n, other.n));
        }
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        Ok(Polyhedron { n: self.n, constraints })
    }

    /// Is `other ⊆ self`?
    pub fn contains(&self, other: &Polyhedron) -> bool {
        if other.is_empty() {
            return true;
        }
        self.constraints.iter().all(|c| {
            let neg: Vec<Rational> = c.normal.iter().map(|v| -v).collect();
            // a·x > b is -a·x < -b
            let above = other.feasible_with_strict(&[(neg, -c.rhs.clone())]);
            let below = c.relation == Relation::Eq && other.feasible_with_strict(&[(c.normal.clone(), c.rhs.clone())]);
            !above && !below
        })
    }

    pub fn same_set(&self, other: &Polyhedron) -> bool {
        self.contains(other) && other.contains(self)
    }

    /// Project away coordinate `index`; the result lives in `R^{n-1}`.
    pub fn fm_eliminate(&self, index: usize) -> Result<Polyhedron, PolyhedronError> {
        if index >= self.n {
            return Err(PolyhedronError::Coordinate { index, n: self.n });
        }
        let drop = |v: &[Rational]| -> Vec<Rational> {
            v.iter().enumerate().filter(|(k, _)| *k != index).map(|(_, x)| x.clone()).collect()
        };
        let pivot = self
            .constraints
            .iter()
            .position(|c| c.relation == Relation::Eq && !c.normal[index].is_zero());
        let mut out = Vec::new();
        if let Some(pi) = pivot {
            let p = &self.constraints[pi];
            let lead = p.normal[index].clone();
            let coefs: Vec<Rational> = p
                .normal
                .iter()
                .enumerate()
                .map(|(k, v)| if k == index { Rational::zero() } else { v / &lead })
                .collect();
            let sub = Substitution { var: index, coefs, rhs: &p.rhs / &lead };
            for (i, c) in self.constraints.iter().enumerate() {
                if i == pi {
                    continue;
                }
                let mut a = c.normal.clone();
                let mut b = c.rhs.clone();
                substitute(&mut a, &mut b, &sub);
                out.push(HalfSpace { normal: drop(&a), rhs: b, relation: c.relation });
            }
        } else {
            let mut ineqs = Vec::new();
            for c in &self.constraints {
                match c.relation {
                    Relation::Eq => out.push(HalfSpace::eq(drop(&c.normal), c.rhs.clone())),
                    Relation::Le => ineqs.push(Ineq { a: c.normal.clone(), b: c.rhs.clone(), strict: false }),
                }
            }
            match prune(ineqs).and_then(|rows| eliminate(&rows, index)) {
                Some(rows) => {
                    out.extend(rows.into_iter().map(|r| HalfSpace::le(drop(&r.a), r.b)));
                }
                None => {
                    // infeasible: 0 ≤ -1
                    out.push(HalfSpace::le(vec![Rational::zero(); self.n - 1], int(-1)));
                }
            }
        }
        Ok(Polyhedron { n: self.n - 1, constraints: out })
    }

    /// Same point set with redundant constraints removed. Empty inputs are
    /// returned unchanged.
    pub fn simplified(&self) -> Polyhedron {
        if self.is_empty() {
            return self.clone();
        }
        let mut kept: Vec<HalfSpace> = Vec::new();
        let mut eq_normals: Vec<Vec<Rational>> = Vec::new();
        for c in self.constraints.iter().filter(|c| c.relation == Relation::Eq) {
            let mut trial = eq_normals.clone();
            trial.push(c.normal.clone());
            if linalg::rank(&trial) > eq_normals.len() {
                eq_normals = trial;
                kept.push(c.clone());
            }
        }
        let mut ineqs: Vec<HalfSpace> = self.constraints.iter().filter(|c| c.relation == Relation::Le).cloned().collect();
        let mut i = 0;
        while i < ineqs.len() {
            let mut rest = kept.clone();
            rest.extend(ineqs.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, c)| c.clone()));
            let without = Polyhedron { n: self.n, constraints: rest };
            let single = Polyhedron { n: self.n, constraints: vec![ineqs[i].clone()] };
            if single.contains(&without) {
                ineqs.remove(i);
            } else {
                i += 1;
            }
        }
        kept.extend(ineqs);
        Polyhedron { n: self.n, constraints: kept }
    }

    /// Deterministic text key used to order cells.
    pub fn canonical_key(&self) -> String {
        let mut parts: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        parts.sort();
        parts.join("; ")
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coefs: Vec<String> = self.normal.iter().map(format_rational).collect();
        let rel = match self.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
        };
        write!(f, "[{}] {} {}", coefs.join(", "), rel, format_rational(&self.rhs))
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.canonical_key())
    }
}

/// `P ∩ Q`.
pub fn intersect(p: &Polyhedron, q: &Polyhedron) -> Result<Polyhedron, PolyhedronError> {
    p.intersect(q)
}

/// Projection of `p` along coordinate `index`.
pub fn fm_eliminate(p: &Polyhedron, index: usize) -> Result<Polyhedron, PolyhedronError> {
    p.fm_eliminate(index)
}
