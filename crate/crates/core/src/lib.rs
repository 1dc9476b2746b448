//! Sparse polynomial interpolation codes.
//!
//! A `t`-sparse polynomial over `F_p` is encoded by its values at
//! `1, alpha, alpha^2, ..., alpha^(n-1)` for a primitive `m`-th root of unity
//! `alpha`. Decoding runs Berlekamp–Massey and Ben-Or–Tiwari interpolation on
//! error-free windows of the received word: contiguous blocks (majority and
//! classic list decoding) or arithmetic-progression subsequences (affine list
//! decoding). The [`radius`] module computes how long a word must be for an
//! error-free progression to always exist, and [`charzero`] covers the
//! rational variant with distinct positive evaluation points.

pub mod charzero;
pub mod codec;
pub mod error;
pub mod experiment;
pub mod field;
pub mod prony;
pub mod radius;
pub mod recurrence;
pub mod sparse_poly;

pub use error::{Error, Result};
pub use field::{DiscreteLogTable, Field, FieldElement, PrimeField, Rational, RationalField};
pub use sparse_poly::SparsePolynomial;
