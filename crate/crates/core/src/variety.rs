//! Tropical hypersurfaces and prevarieties as polyhedral complexes.
//!
//! A complex is stored as its maximal tie-and-dominate cells. Cells of an
//! affine (`T^n`) complex carry a stratum: the variables pinned to bottom.
//! Their polyhedra live in the coordinates of the remaining variables.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::poly::{Mode, PolyError, Polynomial, Term};
use crate::polyhedra::{HalfSpace, Polyhedron, PolyhedronError, Relation};
use crate::scalar::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("no generators given")]
    NoGenerators,
    #[error("generators have different arities")]
    Arity,
    #[error("operation requires {expected:?} mode")]
    Mode { expected: Mode },
    #[error("ambient dimension mismatch: polynomial in {poly} variables, complex in {complex}")]
    Ambient { poly: usize, complex: usize },
    #[error(transparent)]
    Polyhedron(#[from] PolyhedronError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Parallel evaluation of cell intersections. Results are identical either
/// way since cells are sorted afterwards.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VarietyOptions {
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub polyhedron: Polyhedron,
    pub dim: i64,
    pub interior: Vec<Rational>,
    /// Variables set to bottom, sorted; empty for cells in `R^n`.
    pub stratum: Vec<usize>,
}

impl Cell {
    fn build(polyhedron: Polyhedron, stratum: Vec<usize>) -> Option<Cell> {
        let polyhedron = polyhedron.simplified();
        let interior = polyhedron.relative_interior_point().ok()?;
        let dim = polyhedron.dimension();
        Some(Cell { polyhedron, dim, interior, stratum })
    }

    fn key(&self) -> (Vec<usize>, String) {
        (self.stratum.clone(), self.polyhedron.canonical_key())
    }

    /// Serialized form used for ordering and JSON output.
    pub fn to_json(&self) -> CellJson {
        let cs = self.polyhedron.constraints();
        CellJson {
            stratum: self.stratum.clone(),
            normals: cs.iter().map(|c| c.normal.iter().map(format_rational).collect()).collect(),
            rhs: cs.iter().map(|c| format_rational(&c.rhs)).collect(),
            relations: cs
                .iter()
                .map(|c| match c.relation {
                    Relation::Le => "<=".to_string(),
                    Relation::Eq => "=".to_string(),
                })
                .collect(),
            dim: self.dim,
            interior_point: self.interior.iter().map(format_rational).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellJson {
    pub stratum: Vec<usize>,
    pub normals: Vec<Vec<String>>,
    pub rhs: Vec<String>,
    pub relations: Vec<String>,
    pub dim: i64,
    pub interior_point: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexJson {
    pub ambient: usize,
    pub dim: i64,
    pub cells: Vec<CellJson>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyComplex {
    n: usize,
    cells: Vec<Cell>,
}

impl PolyComplex {
    pub fn empty(n: usize) -> Self {
        PolyComplex { n, cells: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dim(&self) -> i64 {
        complex_dim(self)
    }

    /// Cells lying in `R^n` (empty stratum).
    pub fn torus_cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.stratum.is_empty())
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson { ambient: self.n, dim: self.dim(), cells: self.cells.iter().map(Cell::to_json).collect() }
    }

    /// Is every point of `self` in some cell of `other` and vice versa?
    /// Decided cell by cell, which is exact when both complexes come from
    /// the same tie-and-dominate enumeration up to redundant constraints.
    pub fn same_cells(&self, other: &PolyComplex) -> bool {
        let covered = |a: &PolyComplex, b: &PolyComplex| {
            a.cells.iter().all(|c| {
                b.cells.iter().any(|d| d.stratum == c.stratum && d.polyhedron.contains(&c.polyhedron))
            })
        };
        self.n == other.n && covered(self, other) && covered(other, self)
    }

    /// Does some cell contain the point `p` of `R^n`?
    pub fn contains_point(&self, p: &[Rational]) -> bool {
        self.torus_cells().any(|c| c.polyhedron.contains_point(p))
    }

    /// Drop cells contained in another cell of the same stratum and sort.
    fn from_cells(n: usize, cells: Vec<Cell>) -> PolyComplex {
        let mut cells = cells;
        cells.sort_by_key(Cell::key);
        cells.dedup_by(|a, b| a.key() == b.key());
        // larger cells first so that containment drops the smaller ones
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.sort_by(|&a, &b| cells[b].dim.cmp(&cells[a].dim).then(a.cmp(&b)));
        let mut kept: Vec<usize> = Vec::new();
        for i in order {
            let c = &cells[i];
            let dominated = kept.iter().any(|&k| {
                let d = &cells[k];
                d.stratum == c.stratum && d.polyhedron.contains(&c.polyhedron)
            });
            if !dominated {
                kept.push(i);
            }
        }
        kept.sort_unstable();
        let cells = kept.into_iter().map(|i| cells[i].clone()).collect();
        PolyComplex { n, cells }
    }
}

/// Value of a term as an affine function: `(exponents, coefficient)`.
fn affine(term: &Term) -> (Vec<Rational>, Rational) {
    (term.mono.exps().iter().map(|&e| Rational::from_integer(e.into())).collect(), term.coef.clone())
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `{x : term_i(x) = term_j(x) ≥ term_k(x) for all k}`.
fn tie_cell(terms: &[Term], i: usize, j: usize, n: usize) -> Polyhedron {
    let (ai, ci) = affine(&terms[i]);
    let (aj, cj) = affine(&terms[j]);
    let mut cs = vec![HalfSpace::eq(sub(&ai, &aj), &cj - &ci)];
    for (k, t) in terms.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        let (ak, ck) = affine(t);
        cs.push(HalfSpace::le(sub(&ak, &ai), &ci - &ck));
    }
    Polyhedron::new(n, cs).expect("tie constraints have ambient n")
}

fn raw_hypersurface_cells(f: &Polynomial, stratum: &[usize]) -> Vec<Cell> {
    let terms = f.term_list();
    let n = f.arity();
    let mut out = Vec::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            if let Some(c) = Cell::build(tie_cell(&terms, i, j, n), stratum.to_vec()) {
                out.push(c);
            }
        }
    }
    out
}

/// The tropical hypersurface of `f`: one cell per pair of terms that can tie
/// at the maximum. Monomials and the zero polynomial give the empty complex.
pub fn hypersurface(f: &Polynomial) -> PolyComplex {
    PolyComplex::from_cells(f.arity(), raw_hypersurface_cells(f, &[]))
}

fn intersect_cells(a: &[Cell], b: &[Cell], opts: VarietyOptions) -> Vec<Cell> {
    let pairs: Vec<(&Cell, &Cell)> = a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).collect();
    let meet = |(x, y): &(&Cell, &Cell)| -> Option<Cell> {
        let p = x.polyhedron.intersect(&y.polyhedron).ok()?;
        Cell::build(p, x.stratum.clone())
    };
    if opts.parallel {
        pairs.par_iter().filter_map(meet).collect()
    } else {
        pairs.iter().filter_map(meet).collect()
    }
}

/// Cells of the prevariety in `R^m` of generators already restricted to a
/// stratum. The zero polynomial imposes no condition.
fn prevariety_cells(gens: &[Polynomial], m: usize, stratum: &[usize], opts: VarietyOptions) -> Vec<Cell> {
    let mut current: Option<PolyComplex> = None;
    for g in gens.iter().filter(|g| !g.is_zero()) {
        if g.is_monomial() {
            return Vec::new();
        }
        let h = PolyComplex::from_cells(m, raw_hypersurface_cells(g, stratum));
        current = Some(match current {
            None => h,
            Some(c) => PolyComplex::from_cells(m, intersect_cells(&c.cells, &h.cells, opts)),
        });
        if current.as_ref().is_some_and(PolyComplex::is_empty) {
            return Vec::new();
        }
    }
    match current {
        Some(c) => c.cells,
        None => Cell::build(Polyhedron::full(m), stratum.to_vec()).into_iter().collect(),
    }
}

fn common_arity(gens: &[Polynomial]) -> Result<usize, VarietyError> {
    let n = gens.first().ok_or(VarietyError::NoGenerators)?.arity();
    if gens.iter().any(|g| g.arity() != n) {
        return Err(VarietyError::Arity);
    }
    Ok(n)
}

/// Intersection of the hypersurfaces of `gens` in `R^n`.
pub fn prevariety(gens: &[Polynomial]) -> Result<PolyComplex, VarietyError> {
    prevariety_with(gens, VarietyOptions::default())
}

pub fn prevariety_with(gens: &[Polynomial], opts: VarietyOptions) -> Result<PolyComplex, VarietyError> {
    let n = common_arity(gens)?;
    Ok(PolyComplex::from_cells(n, prevariety_cells(gens, n, &[], opts)))
}

/// Prevariety over `T^n`, stratified by the set of variables equal to bottom.
pub fn affine_prevariety(gens: &[Polynomial]) -> Result<PolyComplex, VarietyError> {
    affine_prevariety_with(gens, VarietyOptions::default())
}

pub fn affine_prevariety_with(gens: &[Polynomial], opts: VarietyOptions) -> Result<PolyComplex, VarietyError> {
    let n = common_arity(gens)?;
    if gens.iter().any(|g| g.mode() != Mode::Poly) {
        return Err(VarietyError::Mode { expected: Mode::Poly });
    }
    let mut cells = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let stratum: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let restricted: Vec<Polynomial> = gens.iter().map(|g| g.substitute_bottom(&stratum)).collect();
        cells.extend(prevariety_cells(&restricted, n - stratum.len(), &stratum, opts));
    }
    Ok(PolyComplex::from_cells(n, cells))
}

/// Maximum cell dimension, −1 for the empty complex.
pub fn complex_dim(x: &PolyComplex) -> i64 {
    x.cells.iter().map(|c| c.dim).max().unwrap_or(-1)
}

/// Does `f` tropically vanish on every point of `x`? A cell fails exactly
/// when some term of `f` is the strict unique maximum somewhere on it.
pub fn vanishes_on_complex(f: &Polynomial, x: &PolyComplex) -> Result<bool, VarietyError> {
    if f.arity() != x.n {
        return Err(VarietyError::Ambient { poly: f.arity(), complex: x.n });
    }
    for cell in &x.cells {
        let g = f.substitute_bottom(&cell.stratum);
        if g.is_zero() {
            continue;
        }
        let terms = g.term_list();
        for (i, ti) in terms.iter().enumerate() {
            let (ai, ci) = affine(ti);
            let mut region = cell.polyhedron.clone();
            let mut strict = Vec::new();
            for (k, t) in terms.iter().enumerate() {
                if k != i {
                    let (ak, ck) = affine(t);
                    strict.push((sub(&ak, &ai), &ci - &ck));
                }
            }
            if region_nonempty_strict(&mut region, strict) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Is `region ∩ {a·x < b for all (a, b)}` non-empty? The strict system is
/// feasible iff its closure is and no strict row is an implied equality.
fn region_nonempty_strict(region: &mut Polyhedron, strict: Vec<(Vec<Rational>, Rational)>) -> bool {
    let base = region.constraints().len();
    for (a, b) in &strict {
        region.push(HalfSpace::le(a.clone(), b.clone())).expect("matching ambient");
    }
    if region.is_empty() {
        return false;
    }
    let implicit = region.implicit_equalities();
    !implicit.iter().any(|&i| i >= base)
}
