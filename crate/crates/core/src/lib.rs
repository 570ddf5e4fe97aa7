//! Exact tropical commutative algebra over the rationals.
//!
//! The crate works with the tropical semifield `T = Q ∪ {−∞}` (max, +) and
//! the polynomial and Laurent polynomial semirings over it. It provides bend
//! relations and twisted products, prime congruences given by admissible
//! matrices, a checker for congruence derivations, exact rational polyhedra,
//! tropical hypersurfaces and prevarieties, the dimension of coordinate
//! semirings with an explicit witness prime, and degree-truncated tropical
//! linear algebra.

pub mod cli;
pub mod krull;
pub mod linalg;
pub mod linear;
pub mod poly;
pub mod polyhedra;
pub mod prime;
pub mod sampling;
pub mod scalar;
pub mod svg;
pub mod text;
pub mod trace;
pub mod variety;

pub use poly::{Mode, Monomial, Pair, PolyError, Polynomial, Term};
pub use scalar::{Rational, TropScalar};
