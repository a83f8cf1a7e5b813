//! Interpolation with moving nodes, weighted Chebyshev (Bojanov) problems and
//! the intertwining property of interval maxima.

pub mod bojanov;
pub mod interpolation;
pub mod intertwining;
