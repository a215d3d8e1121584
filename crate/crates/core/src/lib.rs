//! Exact mixed-integer hulls `conv(P ∩ (Z^n × R^d))` of rational polyhedra.
//!
//! All arithmetic is exact over arbitrary-precision rationals. The library
//! computes mixed-integer hulls from an inequality description (by scaling the
//! continuous block until every relevant fiber vertex is integral) and from a
//! vertex description (by enumerating small vertex subsets and their integer
//! fibers), reduces unbounded inputs to polytopes, and minimizes concave
//! objectives over the mixed-integer points. Brute-force oracles for every
//! hull computation live alongside the algorithms.

pub mod concmin;
pub mod error;
pub mod format;
pub mod gen;
pub mod hull;
pub mod inthull;
pub mod lp;
pub mod mihull;
pub mod polyrep;
pub mod rat;

pub use error::{Error, Result};
