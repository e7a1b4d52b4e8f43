//! Counting homomorphisms, surjective homomorphisms and condensations between
//! finite relational structures, together with exact expansions of the latter
//! two counts as linear combinations of homomorphism counts.
//!
//! The crate is organised bottom-up:
//!
//! - [`structure`]: signatures, structures, induced substructures, deducts and
//!   disjoint unions.
//! - [`canon`]: brute-force canonical labeling, isomorphism, `Indsub`/`Deducts`
//!   counts and enumeration of isomorphism-class representatives.
//! - [`counting`]: backtracking counters for the three kinds of maps.
//! - [`basis`]: hom-basis expansions and the matrix views of the two
//!   decomposition identities.
//! - [`interpolation`]: distinguishers, exact Vandermonde solving and
//!   recovery of individual hom values from a linear-combination oracle.
//!
//! Linear algebra and linear combinations are generic over a [`Field`]
//! scalar; everything that must be exact uses [`Rational`].

pub mod basis;
pub mod canon;
pub mod counting;
mod error;
pub mod interpolation;
pub mod io;
pub mod linalg;
pub mod sample;
pub mod scalar;
pub mod structure;

pub use basis::{ExpansionKind, LinearCombination, MatrixView, Term};
pub use canon::CanonicalKey;
pub use error::{Error, Result};
pub use interpolation::{CountOracle, VandermondeSystem};
pub use scalar::{ExactScalar, Field};
pub use structure::{Signature, Structure};

/// Exact arbitrary-precision count of maps.
pub type Count = num_bigint::BigUint;

/// Exact rational scalar used throughout the toolkit.
pub type Rational = num_rational::BigRational;

/// Hom-basis expansion with exact rational coefficients.
pub type Expansion = LinearCombination<Rational>;

/// Dense matrix of exact rationals.
pub type RationalMatrix = linalg::Matrix<Rational>;

/// Vandermonde system over the exact rationals.
pub type RationalVandermonde = VandermondeSystem<Rational>;
