//! Exact-arithmetic toolkit for 2x2 Kronecker modules with entries in a
//! 4-dimensional space of linear forms.
//!
//! Everything is computed over an exact field: arbitrary-precision rationals
//! or a prime field `F_p` with `p` odd. The library covers the semi-invariants
//! `det`, `e`, `epsilon`, `rho` of a module, GIT (semi-)stability tests with an
//! independent brute-force oracle, constructive reduction to normal form, the
//! weighted-projective hypersurface model `res(q) = p^2` of the moduli space,
//! and the blow-down map from the bigraded matrix model on `P^1 x P^1`.

// index-juggling over two rows of the same matrix reads better as loops
#![allow(clippy::needless_range_loop)]

pub mod blowdown;
pub mod campaign;
pub mod error;
pub mod field;
pub mod json;
pub mod kronecker;
pub mod mat;
pub mod modulimap;
pub mod multilinear;
pub mod normalform;
pub mod sample;
pub mod stability;

pub use error::Error;
pub use field::{FieldSpec, Scalar};
pub use kronecker::{GroupElem, KModule};
pub use modulimap::WPoint;
pub use multilinear::{CoordChange, LinForm, QuadForm, TernaryQuadForm, Var};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
