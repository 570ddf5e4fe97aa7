//! Krull dimension of coordinate semirings: `dim = d + 1` where `d` is the
//! dimension of the variety, with an explicit prime of rank `d + 1`
//! containing the bend relations of the generators.

use num::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg;
use crate::poly::{Mode, Polynomial};
use crate::prime::{check_admissible, member_ip, AdmissibleMatrix, PrimeError};
use crate::sampling::{self, TrialRng};
use crate::scalar::{format_rational, int, Rational};
use crate::variety::{complex_dim, prevariety, Cell, PolyComplex, VarietyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KrullError {
    #[error("prevariety is empty: the generators present the whole semiring and no dimension claim applies")]
    EmptyVariety,
    #[error("complex has no cell in the torus R^n")]
    NoTorusCell,
    #[error("witness construction failed: {0}")]
    Witness(String),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Prime(#[from] PrimeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessChecks {
    pub admissible: bool,
    pub rank: usize,
    pub contains_bends: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub variety_dim: i64,
    pub coordinate_dim: i64,
    pub witness: AdmissibleMatrix,
    pub witness_checks: WitnessChecks,
    /// Set when the generators are not known to be a tropical basis, so the
    /// dimension is that of their prevariety.
    pub prevariety_caveat: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReportJson {
    pub variety_dim: i64,
    pub coordinate_dim: i64,
    pub witness: Vec<Vec<String>>,
    pub witness_checks: WitnessChecks,
    pub prevariety_caveat: bool,
}

impl DimensionReport {
    pub fn to_json(&self) -> DimensionReportJson {
        DimensionReportJson {
            variety_dim: self.variety_dim,
            coordinate_dim: self.coordinate_dim,
            witness: matrix_strings(&self.witness),
            witness_checks: self.witness_checks,
            prevariety_caveat: self.prevariety_caveat,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.witness_checks.admissible
            && self.witness_checks.contains_bends
            && self.witness_checks.rank as i64 == self.coordinate_dim
    }
}

pub fn matrix_strings(u: &AdmissibleMatrix) -> Vec<Vec<String>> {
    u.rows().iter().map(|r| r.iter().map(format_rational).collect()).collect()
}

/// Does the prime of `u` contain `bend(f)` for every generator?
pub fn contains_bends(u: &AdmissibleMatrix, gens: &[Polynomial]) -> Result<bool, PrimeError> {
    for f in gens {
        if !member_ip(u, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cell_order_key(c: &Cell) -> String {
    serde_json::to_string(&c.to_json()).expect("cells serialize")
}

/// The torus cell of maximal dimension with the smallest serialized form.
fn chosen_cell(x: &PolyComplex) -> Result<&Cell, KrullError> {
    let d = x.torus_cells().map(|c| c.dim).max().ok_or(if x.is_empty() {
        KrullError::EmptyVariety
    } else {
        KrullError::NoTorusCell
    })?;
    x.torus_cells()
        .filter(|c| c.dim == d)
        .min_by_key(|c| cell_order_key(c))
        .ok_or(KrullError::NoTorusCell)
}

/// Rows `(1, ω), (1, u_1), …, (1, u_d)` for a relative-interior point `ω` of
/// a top-dimensional cell and `u_i = ω + t·v_i` along its affine hull.
pub fn witness_prime(x: &PolyComplex, mode: Mode) -> Result<AdmissibleMatrix, KrullError> {
    let cell = chosen_cell(x)?;
    let n = x.ambient();
    let omega = cell.interior.clone();
    let (_, basis) = cell.polyhedron.affine_hull().map_err(|e| KrullError::Witness(e.to_string()))?;
    let proper = cell.polyhedron.proper_inequalities();
    let mut rows = Vec::with_capacity(basis.len() + 1);
    let row_of = |p: &[Rational]| -> Vec<Rational> { std::iter::once(int(1)).chain(p.iter().cloned()).collect() };
    rows.push(row_of(&omega));
    for v in &basis {
        let mut t = int(1);
        for h in &proper {
            let rate = linalg::dot(&h.normal, v);
            if rate.is_positive() {
                let slack = &h.rhs - linalg::dot(&h.normal, &omega);
                let bound = slack / (int(2) * rate);
                if bound < t {
                    t = bound;
                }
            }
        }
        if t.is_zero() {
            return Err(KrullError::Witness("relative interior point on the boundary".into()));
        }
        let u: Vec<Rational> = omega.iter().zip(v).map(|(w, vi)| w + &t * vi).collect();
        debug_assert!(cell.polyhedron.contains_point(&u));
        rows.push(row_of(&u));
    }
    Ok(check_admissible(rows, n, mode)?)
}

/// Compute the prevariety, its dimension `d`, and a validated rank-`(d+1)`
/// witness prime.
pub fn coordinate_dimension(gens: &[Polynomial]) -> Result<DimensionReport, KrullError> {
    let x = prevariety(gens)?;
    if x.is_empty() {
        return Err(KrullError::EmptyVariety);
    }
    let d = complex_dim(&x);
    let mode = gens[0].mode();
    let witness = witness_prime(&x, mode)?;
    let checks = WitnessChecks {
        admissible: check_admissible(witness.rows().to_vec(), witness.arity(), mode).is_ok(),
        rank: witness.rank(),
        contains_bends: contains_bends(&witness, gens)?,
    };
    let nonzero = gens.iter().filter(|g| !g.is_zero()).count();
    Ok(DimensionReport {
        variety_dim: d,
        coordinate_dim: d + 1,
        witness,
        witness_checks: checks,
        prevariety_caveat: nonzero > 1,
    })
}

/// Outcome of the randomized search for a prime of rank above `d + 1`
/// containing all bend relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FalsificationReport {
    pub trials: usize,
    pub hits: Vec<AdmissibleMatrix>,
}

/// Draw admissible matrices of rank `d+2 ..= n+1`, half of them with rows
/// taken from the common null space of randomly chosen tie differences of
/// the generators, and record every one that contains the bends.
pub fn falsify_upper_bound(
    gens: &[Polynomial],
    d: i64,
    trials: usize,
    rng: &mut TrialRng,
) -> Result<FalsificationReport, KrullError> {
    use rand::Rng;
    let n = gens.first().map(Polynomial::arity).ok_or(VarietyError::NoGenerators)?;
    let mode = gens[0].mode();
    let lo = (d + 2).max(1) as usize;
    let mut hits = Vec::new();
    if lo > n + 1 {
        return Ok(FalsificationReport { trials: 0, hits });
    }
    let term_lists: Vec<_> = gens.iter().filter(|g| g.len() >= 2).map(Polynomial::term_list).collect();
    for trial in 0..trials {
        let rank = rng.gen_range(lo..=n + 1);
        let u = if trial % 2 == 0 || term_lists.is_empty() {
            sampling::admissible(rng, n, rank, mode)
        } else {
            let mut diffs = Vec::new();
            for terms in &term_lists {
                let i = rng.gen_range(0..terms.len());
                let mut j = rng.gen_range(0..terms.len() - 1);
                if j >= i {
                    j += 1;
                }
                let mut row = vec![&terms[i].coef - &terms[j].coef];
                row.extend(
                    terms[i].mono.exps().iter().zip(terms[j].mono.exps()).map(|(a, b)| int(a - b)),
                );
                diffs.push(row);
            }
            let space = linalg::nullspace(&diffs, n + 1);
            sampling::admissible_from_space(rng, n, rank, &space, mode)
        };
        if contains_bends(&u, gens)? {
            hits.push(u);
        }
    }
    Ok(FalsificationReport { trials, hits })
}
