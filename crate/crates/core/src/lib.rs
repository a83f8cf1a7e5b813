//! Sums of translates `F(y, t) = J(t) + Σ Kᵢ(t − yᵢ)` on `[0, 1]`: interval
//! maxima, the difference map `Φ`, its inversion, and the interpolation and
//! weighted Chebyshev problems built on top of it.

// Negated comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod branch;
pub mod calculus;
pub mod config;
pub mod error;
pub mod ext;
pub mod fields;
pub mod gallery;
pub mod kernels;
pub mod landscape;
mod optimize;
pub mod solver;

pub use error::{Error, Result};
pub use ext::{Difference, ExtReal};
