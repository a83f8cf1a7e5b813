//! For kernels that are positive multiples of one strictly concave singular
//! kernel, the interval maxima of two distinct node systems cannot majorize
//! each other: some `m_i` is strictly smaller and some `m_j` strictly larger.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::Field;
use crate::kernels::Kernel;
use crate::landscape::{classify, interval_maxima, Classification, NodeSystem, DEFAULT_TOL};

/// Differences of interval maxima below this are treated as zero.
pub const TOL_STRICT: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Intertwining {
    /// `m_i(x) < m_i(y)` and `m_j(x) > m_j(y)`.
    Witness { i: usize, j: usize },
    /// All interval maxima agree to [`TOL_STRICT`].
    Indistinguishable,
    /// `m(x) ≤ m(y)` componentwise with some strict inequality.
    XBelow,
    /// `m(x) ≥ m(y)` componentwise with some strict inequality.
    XAbove,
}

/// Compares the interval maxima at `x` and `y`; both must be regular.
pub fn intertwining_probe(kernels: &[Kernel], field: &Field, x: &NodeSystem, y: &NodeSystem) -> Result<Intertwining> {
    for nodes in [x, y] {
        if let Classification::Singular(j) = classify(field, kernels, nodes) {
            return Err(Error::NotRegular(j));
        }
    }
    let mx = interval_maxima(kernels, field, x, DEFAULT_TOL)?;
    let my = interval_maxima(kernels, field, y, DEFAULT_TOL)?;
    let diffs: Vec<f64> = mx.m.iter().zip(&my.m).map(|(a, b)| a.to_f64() - b.to_f64()).collect();
    if diffs.iter().any(|d| !d.is_finite()) {
        return Err(Error::NotRegular(
            diffs.iter().position(|d| !d.is_finite()).unwrap_or(0),
        ));
    }
    let (i, lowest) = diffs
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least two intervals");
    let (j, highest) = diffs
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least two intervals");
    Ok(match (lowest < -TOL_STRICT, highest > TOL_STRICT) {
        (true, true) => Intertwining::Witness { i, j },
        (false, false) => Intertwining::Indistinguishable,
        (true, false) => Intertwining::XBelow,
        (false, true) => Intertwining::XAbove,
    })
}
