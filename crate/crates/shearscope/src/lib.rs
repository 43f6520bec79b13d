//! Exact-arithmetic toolkit for planar polynomial maps.
//!
//! The crate classifies maps `(P(x,y), Q(x,y))` with rational coefficients:
//! it decides whether a map has constant nonzero jacobian determinant,
//! whether its nonlinear part is divergence-free, and whether the map is a
//! shear (all nonlinear terms powers of a single linear form). For shear
//! maps it produces the decomposition data, an explicit polynomial inverse,
//! and the conjugated normal form `(u, v) -> (u, v + g(u))`. An enumeration
//! harness sweeps small coefficient spaces to confirm that every
//! divergence-free jacobian map found is a shear.
//!
//! All arithmetic is exact: coefficients are arbitrary-precision rationals
//! and every predicate is decided syntactically on canonical forms.

pub mod conditions;
pub mod expr;
pub mod harness;
pub mod jacobian;
pub mod poly;
pub mod report;
pub mod shear;

#[cfg(test)]
pub(crate) mod testutil;

pub use poly::{frac, rat, Monomial, Poly, PolyMap, Rational, Var};
