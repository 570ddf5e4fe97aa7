//! Seeded random generators for tests, trials and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg;
use crate::poly::{Mode, Monomial, Polynomial};
use crate::prime::{check_admissible, AdmissibleMatrix};
use crate::scalar::{int, ratio, Rational, TropScalar};

pub type TrialRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ span·q`, `q ∈ 1..=4`.
pub fn rational<R: Rng>(rng: &mut R, span: i64) -> Rational {
    let q = rng.gen_range(1..=4);
    ratio(rng.gen_range(-span * q..=span * q), q)
}

pub fn point<R: Rng>(rng: &mut R, n: usize, span: i64) -> Vec<Rational> {
    (0..n).map(|_| rational(rng, span)).collect()
}

/// Negate the first row with a non-zero first entry if that entry is negative.
fn fix_sign(rows: &mut [Vec<Rational>]) {
    if let Some(r) = rows.iter_mut().find(|r| r[0] != int(0)) {
        if r[0] < int(0) {
            for v in r.iter_mut() {
                *v = -v.clone();
            }
        }
    }
}

/// Integer row with entries in `-span..=span`.
fn int_row<R: Rng>(rng: &mut R, len: usize, span: i64) -> Vec<Rational> {
    (0..len).map(|_| int(rng.gen_range(-span..=span))).collect()
}

/// A uniformly drawn admissible matrix of exactly `rank` rows.
pub fn admissible<R: Rng>(rng: &mut R, n: usize, rank: usize, mode: Mode) -> AdmissibleMatrix {
    assert!((1..=n + 1).contains(&rank), "rank {rank} out of range for n = {n}");
    loop {
        let mut rows: Vec<Vec<Rational>> = (0..rank).map(|_| int_row(rng, n + 1, 3)).collect();
        if rng.gen_bool(0.3) {
            // rational entries now and then
            for r in rows.iter_mut() {
                let q = int(rng.gen_range(1..=3));
                for v in r.iter_mut() {
                    *v = v.clone() / &q;
                }
            }
        }
        if linalg::rank(&rows) < rank {
            continue;
        }
        fix_sign(&mut rows);
        return check_admissible(rows, n, mode).expect("constructed admissible");
    }
}

/// Admissible matrix whose leading rows are random combinations of the
/// vectors in `space`, completed by random rows to `rank`.
pub fn admissible_from_space<R: Rng>(
    rng: &mut R,
    n: usize,
    rank: usize,
    space: &[Vec<Rational>],
    mode: Mode,
) -> AdmissibleMatrix {
    for _ in 0..64 {
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let from_space = rng.gen_range(1..=rank.min(space.len().max(1)));
        for _ in 0..from_space {
            if space.is_empty() {
                break;
            }
            let mut row = vec![int(0); n + 1];
            for b in space {
                let c = int(rng.gen_range(-2..=2));
                for (v, x) in row.iter_mut().zip(b) {
                    *v += &c * x;
                }
            }
            rows.push(row);
        }
        while rows.len() < rank {
            rows.push(int_row(rng, n + 1, 3));
        }
        if linalg::rank(&rows) < rank {
            continue;
        }
        fix_sign(&mut rows);
        if let Ok(u) = check_admissible(rows, n, mode) {
            return u;
        }
    }
    admissible(rng, n, rank, mode)
}

/// Random monomial with exponents in `lo..=hi`.
pub fn monomial<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> Monomial {
    Monomial::new((0..n).map(|_| rng.gen_range(lo..=hi)).collect())
}

/// Non-zero polynomial with `1..=max_terms` terms and small rational coefficients.
pub fn polynomial<R: Rng>(rng: &mut R, n: usize, mode: Mode, max_terms: usize, max_exp: i64) -> Polynomial {
    let lo = if mode == Mode::Laurent { -max_exp } else { 0 };
    let count = rng.gen_range(1..=max_terms);
    let terms: Vec<(Monomial, TropScalar)> =
        (0..count).map(|_| (monomial(rng, n, lo, max_exp), TropScalar::finite(rational(rng, 3)))).collect();
    Polynomial::from_terms(n, mode, terms).expect("exponents respect the mode")
}

/// Polynomial with at least two distinct monomials.
pub fn polynomial_with_terms<R: Rng>(rng: &mut R, n: usize, mode: Mode, max_terms: usize, max_exp: i64) -> Polynomial {
    loop {
        let f = polynomial(rng, n, mode, max_terms.max(2), max_exp);
        if f.len() >= 2 {
            return f;
        }
    }
}

pub fn choose<'a, R: Rng, T>(rng: &mut R, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("non-empty choice")
}
