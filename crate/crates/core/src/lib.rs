//! Exact computation of Kazhdan-Lusztig bases, cells, star operations,
//! generalized Vogan classes and Knuth classes for finite Coxeter groups
//! with unequal parameters.
//!
//! The coefficient ring everywhere is the group algebra Z[Gamma] of a
//! totally ordered abelian group Gamma = Z^r (lexicographic order). All core
//! arithmetic is generic over the integer scalar through [`laurent::Coeff`];
//! the aliases below fix arbitrary-precision integers, which the command
//! line tool and the verification suites use throughout.

pub mod canonical;
pub mod cells;
pub mod coxeter;
pub mod cyclo;
pub mod error;
pub mod hecke;
pub mod io;
pub mod knuth;
pub mod laurent;
pub mod permgroup;
pub mod star;
pub mod util;
pub mod verify;
pub mod vogan;

pub use coxeter::{CoxeterGroup, CoxeterMatrix, DescentSet, Elt};
pub use error::{Error, Result};

/// Arbitrary-precision integer scalar used by the concrete aliases.
pub type Int = num_bigint::BigInt;

/// Laurent element over Z[Z^r] with big-integer coefficients.
pub type Laurent = laurent::LaurentElement<Int>;

/// Sparse Hecke algebra element with big-integer coefficients.
pub type HeckeElt = hecke::HeckeElement<Int>;

/// Hecke algebra context with big-integer coefficients.
pub type HeckeAlg<'a> = hecke::HeckeAlgebra<'a, Int>;

/// Kazhdan-Lusztig coefficient cache with big-integer coefficients.
pub type KLCache = hecke::KLCache<Int>;
