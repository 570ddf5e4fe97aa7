//! Prime congruences given by admissible rational matrices.
//!
//! A matrix `U` with `n + 1` columns orders terms `t·x^u` by the first
//! non-zero entry of `U·(t, u)`: column 0 weighs the coefficient, columns
//! `1..=n` weigh the exponents. Two terms are identified by the prime exactly
//! when their images `U·(t, u)` coincide. Every polynomial is congruent to
//! its leading terms, so the quotient is a totally ordered cancellative
//! semiring of term classes.

use std::cmp::Ordering;

use num::{Signed, Zero};
use thiserror::Error;

use crate::linalg;
use crate::poly::{Mode, Monomial, PolyError, Polynomial, Term};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("matrix has no rows")]
    Empty,
    #[error("matrix has {rows} rows, at most {max} allowed")]
    TooManyRows { rows: usize, max: usize },
    #[error("rows are linearly dependent (rank {rank} < {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },
    #[error("first non-zero entry of column 0 (row {row}) is negative")]
    NegativeCoefficientColumn { row: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrimeError {
    #[error("row {row} has {got} columns, expected {expected}")]
    ColumnCount { row: usize, expected: usize, got: usize },
    #[error("matrix is not admissible: {0}")]
    Inadmissible(Violation),
    #[error("leading class of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("variable count mismatch: matrix has {matrix}, input has {input}")]
    Arity { matrix: usize, input: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdmissibleMatrix {
    rows: Vec<Vec<Rational>>,
    n: usize,
    mode: Mode,
}

/// Validate `rows` as the defining matrix of a prime on `n` variables.
pub fn check_admissible(rows: Vec<Vec<Rational>>, n: usize, mode: Mode) -> Result<AdmissibleMatrix, PrimeError> {
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n + 1 {
            return Err(PrimeError::ColumnCount { row: i, expected: n + 1, got: r.len() });
        }
    }
    if rows.is_empty() {
        return Err(PrimeError::Inadmissible(Violation::Empty));
    }
    if rows.len() > n + 1 {
        return Err(PrimeError::Inadmissible(Violation::TooManyRows { rows: rows.len(), max: n + 1 }));
    }
    if let Some(row) = rows.iter().position(|r| !r[0].is_zero()) {
        if rows[row][0].is_negative() {
            return Err(PrimeError::Inadmissible(Violation::NegativeCoefficientColumn { row }));
        }
    }
    let rank = linalg::rank(&rows);
    if rank < rows.len() {
        return Err(PrimeError::Inadmissible(Violation::RankDeficient { rank, rows: rows.len() }));
    }
    Ok(AdmissibleMatrix { rows, n, mode })
}

impl AdmissibleMatrix {
    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `r(U)`; rows are independent, so this is the row count.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `U·(coef, u)`.
    pub fn image(&self, term: &Term) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| &r[0] * &term.coef + term.mono.dot(&r[1..]))
            .collect()
    }

    fn check_arity(&self, n: usize) -> Result<(), PrimeError> {
        if n != self.n {
            return Err(PrimeError::Arity { matrix: self.n, input: n });
        }
        Ok(())
    }
}

/// Order two terms: sign of the first non-zero entry of `U·Δ`.
///
/// Bottom coefficients cannot occur: a [`Term`] always carries a rational.
pub fn compare_terms(u: &AdmissibleMatrix, t1: &Term, t2: &Term) -> Result<Ordering, PrimeError> {
    u.check_arity(t1.mono.arity())?;
    u.check_arity(t2.mono.arity())?;
    let dc = &t1.coef - &t2.coef;
    let du = Monomial::new(t1.mono.exps().iter().zip(t2.mono.exps()).map(|(a, b)| a - b).collect());
    for row in &u.rows {
        let v = &row[0] * &dc + du.dot(&row[1..]);
        if v.is_positive() {
            return Ok(Ordering::Greater);
        }
        if v.is_negative() {
            return Ok(Ordering::Less);
        }
    }
    Ok(Ordering::Equal)
}

/// Terms of a polynomial that are maximal under the prime's order; all of
/// them are mutually equivalent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermClass {
    pub terms: Vec<Term>,
}

impl TermClass {
    pub fn representative(&self) -> &Term {
        &self.terms[0]
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms.iter().map(|t| t.mono.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

pub fn leading_class(u: &AdmissibleMatrix, f: &Polynomial) -> Result<TermClass, PrimeError> {
    u.check_arity(f.arity())?;
    let mut best: Vec<Term> = Vec::new();
    for term in f.term_list() {
        match best.first() {
            None => best.push(term),
            Some(b) => match compare_terms(u, &term, b)? {
                Ordering::Greater => best = vec![term],
                Ordering::Equal => best.push(term),
                Ordering::Less => {}
            },
        }
    }
    if best.is_empty() {
        return Err(PrimeError::ZeroPolynomial);
    }
    Ok(TermClass { terms: best })
}

/// Compare the images of two polynomials in the quotient. The zero
/// polynomial sits below everything else.
pub fn compare_polynomials(u: &AdmissibleMatrix, f: &Polynomial, g: &Polynomial) -> Result<Ordering, PrimeError> {
    u.check_arity(f.arity())?;
    u.check_arity(g.arity())?;
    match (f.is_zero(), g.is_zero()) {
        (true, true) => Ok(Ordering::Equal),
        (true, false) => Ok(Ordering::Less),
        (false, true) => Ok(Ordering::Greater),
        (false, false) => {
            let a = leading_class(u, f)?;
            let b = leading_class(u, g)?;
            compare_terms(u, a.representative(), b.representative())
        }
    }
}

/// Does the prime contain the pair `(f, g)`?
pub fn pair_in_prime(u: &AdmissibleMatrix, f: &Polynomial, g: &Polynomial) -> Result<bool, PrimeError> {
    if f.mode() != g.mode() {
        return Err(PolyError::ModeMismatch(f.mode(), g.mode()).into());
    }
    Ok(compare_polynomials(u, f, g)? == Ordering::Equal)
}

/// Membership in `I‖(P)`: every bend relation of `f` lies in the prime,
/// i.e. the maximum is attained at least twice. The zero polynomial is a
/// member; monomials never are.
pub fn member_ip(u: &AdmissibleMatrix, f: &Polynomial) -> Result<bool, PrimeError> {
    u.check_arity(f.arity())?;
    if f.is_zero() {
        return Ok(true);
    }
    if f.is_monomial() {
        return Ok(false);
    }
    Ok(leading_class(u, f)?.len() >= 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeKind {
    Geometric,
    Minimal,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Classification {
    pub kind: PrimeKind,
    pub rank: usize,
}

/// Geometric iff a single row with non-zero `(1,1)` entry; minimal iff full
/// rank `n + 1`. With `n = 0` the single-row case is reported as geometric.
pub fn classify_prime(u: &AdmissibleMatrix) -> Classification {
    let rank = u.rank();
    let kind = if rank == 1 && !u.rows[0][0].is_zero() {
        PrimeKind::Geometric
    } else if rank == u.n + 1 {
        PrimeKind::Minimal
    } else {
        PrimeKind::Other
    };
    Classification { kind, rank }
}

/// The at most one point of `V(P)`: the first row scaled to `(1, a)`,
/// or nothing when the `(1,1)` entry is zero.
pub fn variety_of_prime(u: &AdmissibleMatrix) -> Option<Vec<Rational>> {
    let first = &u.rows[0];
    if first[0].is_zero() {
        return None;
    }
    Some(first[1..].iter().map(|v| v / &first[0]).collect())
}

/// The geometric prime `(1, p)` of a point.
pub fn geometric_prime_of_point(p: &[Rational]) -> AdmissibleMatrix {
    let mut row = Vec::with_capacity(p.len() + 1);
    row.push(Rational::from_integer(1.into()));
    row.extend(p.iter().cloned());
    AdmissibleMatrix { rows: vec![row], n: p.len(), mode: Mode::Laurent }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::text::parse_polynomial_n;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    fn adm(rows: &[&[i64]]) -> AdmissibleMatrix {
        let n = rows[0].len() - 1;
        check_admissible(mat(rows), n, Mode::Laurent).unwrap()
    }

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial_n(s, n, Mode::Laurent).unwrap()
    }

    fn term(c: i64, exps: &[i64]) -> Term {
        Term::new(int(c), Monomial::new(exps.to_vec()))
    }

    #[test]
    fn admissibility_checks() {
        assert_eq!(adm(&[&[1, 2]]).rank(), 1);
        assert_eq!(
            check_admissible(mat(&[&[1, 0], &[2, 0]]), 1, Mode::Laurent),
            Err(PrimeError::Inadmissible(Violation::RankDeficient { rank: 1, rows: 2 }))
        );
        assert_eq!(
            check_admissible(mat(&[&[-1, 3]]), 1, Mode::Laurent),
            Err(PrimeError::Inadmissible(Violation::NegativeCoefficientColumn { row: 0 }))
        );
        assert!(matches!(
            check_admissible(mat(&[&[1, 3, 4]]), 1, Mode::Laurent),
            Err(PrimeError::ColumnCount { .. })
        ));
        assert!(check_admissible(mat(&[&[0, 1], &[-1, 0]]), 1, Mode::Laurent).is_err());
        assert!(check_admissible(mat(&[&[0, 1], &[1, 0]]), 1, Mode::Laurent).is_ok());
        assert!(check_admissible(vec![], 1, Mode::Laurent).is_err());
    }

    #[test]
    fn term_comparison() {
        // 3 + 1·2 = 5 against 0 + 2·2 = 4
        assert_eq!(compare_terms(&adm(&[&[1, 2]]), &term(3, &[1]), &term(0, &[2])).unwrap(), Ordering::Greater);
        assert_eq!(
            compare_terms(&adm(&[&[0, 1, 1]]), &term(0, &[1, 0]), &term(0, &[0, 1])).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            compare_terms(&adm(&[&[1, 0], &[0, 1]]), &term(0, &[1]), &term(1, &[0])).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn leading_classes() {
        let f = p("x + y + 0", 2);
        assert_eq!(leading_class(&adm(&[&[1, 0, 0]]), &f).unwrap().len(), 3);
        let lc = leading_class(&adm(&[&[1, 1, 2]]), &f).unwrap();
        assert_eq!(lc.monomials(), vec![Monomial::new(vec![0, 1])]);
        let g = p("x + y + x^-1", 2);
        let lc = leading_class(&adm(&[&[0, 1, 1]]), &g).unwrap();
        let mut monos = lc.monomials();
        monos.sort();
        assert_eq!(monos, vec![Monomial::new(vec![0, 1]), Monomial::new(vec![1, 0])]);
        assert_eq!(
            leading_class(&adm(&[&[1, 0, 0]]), &Polynomial::zero(2, Mode::Laurent)),
            Err(PrimeError::ZeroPolynomial)
        );
    }

    #[test]
    fn pairs_in_prime() {
        let u = adm(&[&[1, 0, 0]]);
        assert!(pair_in_prime(&u, &p("x + y", 2), &p("x", 2)).unwrap());
        assert!(!pair_in_prime(&u, &p("x + 1", 2), &p("x", 2)).unwrap());
        let f = p("3*x + y^-2 + 7", 2);
        assert!(pair_in_prime(&u, &f, &f).unwrap());
        let zero = Polynomial::zero(2, Mode::Laurent);
        assert!(pair_in_prime(&u, &zero, &zero).unwrap());
        assert!(!pair_in_prime(&u, &f, &zero).unwrap());
    }

    #[test]
    fn ideal_membership() {
        let u = adm(&[&[1, 0, 0]]);
        assert!(member_ip(&u, &p("x + y", 2)).unwrap());
        assert!(!member_ip(&u, &p("x + 1", 2)).unwrap());
        assert!(member_ip(&adm(&[&[0, 1, 1]]), &p("x + y", 2)).unwrap());
        assert!(!member_ip(&u, &p("x", 2)).unwrap());
        assert!(member_ip(&u, &Polynomial::zero(2, Mode::Laurent)).unwrap());
        let minimal = adm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(!member_ip(&minimal, &p("x + y + 0", 2)).unwrap());
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_prime(&adm(&[&[1, 5, -2]])),
            Classification { kind: PrimeKind::Geometric, rank: 1 }
        );
        assert_eq!(
            classify_prime(&adm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).kind,
            PrimeKind::Minimal
        );
        assert_eq!(
            classify_prime(&adm(&[&[1, 0, 0], &[0, 1, 0]])),
            Classification { kind: PrimeKind::Other, rank: 2 }
        );
        assert_eq!(classify_prime(&adm(&[&[0, 1, 1]])).kind, PrimeKind::Other);
    }

    #[test]
    fn varieties() {
        assert_eq!(variety_of_prime(&adm(&[&[1, 1, 2]])), Some(vec![int(1), int(2)]));
        assert_eq!(variety_of_prime(&adm(&[&[2, 1, 3]])), Some(vec![ratio(1, 2), ratio(3, 2)]));
        assert_eq!(variety_of_prime(&adm(&[&[0, 1, 1]])), None);
        assert_eq!(variety_of_prime(&adm(&[&[1, 0], &[0, 1]])), Some(vec![int(0)]));
    }

    #[test]
    fn identity_matrix_prime_lies_under_the_origin_only() {
        let u = adm(&[&[1, 0], &[0, 1]]);
        // (x + 0, x) lies in the prime; it fails at -1/k
        let a = p("x + 0", 1);
        let b = p("x", 1);
        assert!(pair_in_prime(&u, &a, &b).unwrap());
        for k in 1..20 {
            let pt = vec![ratio(-1, k)];
            assert_ne!(a.evaluate(&pt).unwrap(), b.evaluate(&pt).unwrap());
        }
        // (c + x, c) with 0 < c lies in the prime; it fails at 1/k once c < 1/k
        for k in 1..20 {
            let c = ratio(1, 2 * k);
            let a = Polynomial::constant(1, Mode::Laurent, c.clone()).add(&b).unwrap();
            let cc = Polynomial::constant(1, Mode::Laurent, c);
            assert!(pair_in_prime(&u, &a, &cc).unwrap());
            let pt = vec![ratio(1, k)];
            assert_ne!(a.evaluate(&pt).unwrap(), cc.evaluate(&pt).unwrap());
        }
    }

    #[test]
    fn geometric_primes_of_points() {
        let u = geometric_prime_of_point(&[int(0), int(0)]);
        assert_eq!(u.rows(), &mat(&[&[1, 0, 0]])[..]);
        let u = geometric_prime_of_point(&[int(1), int(2)]);
        assert_eq!(u.rows(), &mat(&[&[1, 1, 2]])[..]);
        assert_eq!(variety_of_prime(&u), Some(vec![int(1), int(2)]));
    }
}
