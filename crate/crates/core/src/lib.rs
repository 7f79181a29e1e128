//! Exact-arithmetic toolkit for special sets of the Hermitian surface H(3,q²).
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: table-driven arithmetic in GF(q²) with its index-2 subfield GF(q)
//!   (trace, norm, Frobenius, squareness, norm-equation solving);
//! - [`projective`]: points, rank tests, Baer sublines and subgeometries of PG(3,q²);
//! - [`hermitian`]: the fixed Hermitian form, the surface H(3,q²), collinearity,
//!   totally isotropic lines and the line-to-set correspondence;
//! - [`invariants`]: the Segre invariant of a triple and the perspective /
//!   degenerate-plane predicates, plus their closed forms on parametrised families;
//! - [`constructions`]: the Hermitian Veronesean and every other explicit family;
//! - [`group`]: semilinear collineations, the {P,Q,S} stabilizer, constructive
//!   canonicalisation of pairs and triples, and the classicality test;
//! - [`verify`]: one executable check per statement, emitting structured reports;
//! - [`search`]: symmetry-reduced backtracking search for special sets.
//!
//! All arithmetic is exact; there is no floating point anywhere.

// indexed loops stay as-is in the small fixed-size linear algebra
#![allow(clippy::needless_range_loop)]

pub mod bitset;
pub mod constructions;
pub mod error;
pub mod field;
pub mod group;
pub mod hermitian;
pub mod invariants;
mod mat;
pub mod projective;
pub mod search;
pub mod verify;

pub use error::Error;
pub use field::{Felt, Field};
pub use hermitian::Hermitian;
pub use projective::{PointSet, ProjPoint};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
