//! The sum of translates `F(y, t) = J(t) + Σ Kᵢ(t − yᵢ)`, its interval
//! maxima `m_j(y) = sup { F(y, t) : t ∈ [y_j, y_{j+1}] }` and the difference
//! map `Φ(y) = (m_1 − m_0, …, m_n − m_{n−1})`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::{Difference, ExtReal};
use crate::fields::Field;
use crate::kernels::Kernel;
use crate::optimize::golden_max;

/// Default golden-section tolerance in `t`.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Candidates within this much of the best value are merged into the
/// argmax bracket.
pub const Q_BRACKET: f64 = 1e-8;

/// An ordered node system `0 ≤ y_1 ≤ … ≤ y_n ≤ 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct NodeSystem(Vec<f64>);

impl NodeSystem {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidParameter("at least one node is required".into()));
        }
        if nodes.iter().any(|y| !(0.0..=1.0).contains(y)) {
            return Err(Error::InvalidParameter("nodes must lie in [0, 1]".into()));
        }
        if nodes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("nodes must be non-decreasing".into()));
        }
        Ok(NodeSystem(nodes))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// `y_j` with the sentinels `y_0 = 0` and `y_{n+1} = 1`.
    pub fn boundary(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else if j > self.0.len() {
            1.0
        } else {
            self.0[j - 1]
        }
    }

    /// `I_j = [y_j, y_{j+1}]` for `j = 0..=n`.
    pub fn interval(&self, j: usize) -> (f64, f64) {
        (self.boundary(j), self.boundary(j + 1))
    }

    /// Whether `0 < y_1 < … < y_n < 1`.
    pub fn strict(&self) -> bool {
        (0..=self.0.len()).all(|j| {
            let (a, b) = self.interval(j);
            a < b
        })
    }

    /// Smallest interval length `min_j |I_j|`.
    pub fn min_gap(&self) -> f64 {
        (0..=self.0.len())
            .map(|j| {
                let (a, b) = self.interval(j);
                b - a
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Where the near-maximizers of `F` on one interval were found.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    /// A representative maximizer.
    pub z: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximaReport {
    pub m: Vec<ExtReal>,
    pub brackets: Vec<Option<Bracket>>,
    pub phi: Vec<Difference>,
    pub regular: bool,
    pub tol: f64,
    /// Set when the field is sampled, so the maxima are only as accurate as
    /// the sampling grid.
    pub grid_limited: bool,
}

impl MaximaReport {
    /// `Φ(y)` as plain reals, or the first interval whose maximum is `−∞`.
    pub fn phi_values(&self) -> Result<Vec<f64>> {
        if let Some(j) = self.m.iter().position(|m| m.is_neg_inf()) {
            return Err(Error::NotRegular(j));
        }
        Ok(self.phi.iter().map(|d| d.as_finite().expect("regular")).collect())
    }

    /// The representative maximizers `z_0, …, z_n` of a regular report.
    pub fn argmax(&self) -> Vec<f64> {
        self.brackets.iter().map(|b| b.map_or(f64::NAN, |b| b.z)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "class", content = "interval")]
pub enum Classification {
    Regular,
    Singular(usize),
    Degenerate,
}

fn check_arity(kernels: &[Kernel], y: &NodeSystem) -> Result<()> {
    if kernels.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "{} kernels given for {} nodes",
            kernels.len(),
            y.len()
        )));
    }
    Ok(())
}

fn kernel_sum(kernels: &[Kernel], y: &[f64], t: f64) -> ExtReal {
    kernels.iter().zip(y).map(|(k, yi)| k.eval(t - yi)).sum()
}

/// `F(y, t)`.
pub fn eval_f(kernels: &[Kernel], field: &Field, y: &NodeSystem, t: f64) -> Result<ExtReal> {
    check_arity(kernels, y)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(t, "[0, 1]"));
    }
    Ok(field.eval(t) + kernel_sum(kernels, y.nodes(), t))
}

/// A piece of `I_j` on which `F` is given by one closed-form field branch
/// and is concave.
struct Cell<'a> {
    lo: f64,
    hi: f64,
    branch: &'a crate::branch::Branch,
}

fn cells<'a>(field: &'a Field, kinks: &[f64], a: f64, b: f64) -> (Vec<Cell<'a>>, Vec<f64>) {
    let mut cells = Vec::new();
    let mut points = Vec::new();
    for piece in field.pieces() {
        if piece.is_point() {
            if piece.lo >= a && piece.lo <= b {
                points.push(piece.lo);
            }
            continue;
        }
        let (lo, hi) = (piece.lo.max(a), piece.hi.min(b));
        if lo > hi {
            continue;
        }
        if lo == hi {
            if piece.contains(lo) {
                points.push(lo);
            }
            continue;
        }
        let mut cuts: Vec<f64> = kinks.iter().copied().filter(|&k| k > lo && k < hi).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut start = lo;
        for cut in cuts.into_iter().chain(std::iter::once(hi)) {
            cells.push(Cell {
                lo: start,
                hi: cut,
                branch: &piece.branch,
            });
            start = cut;
        }
    }
    (cells, points)
}

/// Absolute positions `yᵢ + κ` of every kernel kink.
fn kink_positions(kernels: &[Kernel], y: &[f64]) -> Vec<f64> {
    kernels
        .iter()
        .zip(y)
        .flat_map(|(k, yi)| k.kinks().into_iter().map(move |kappa| yi + kappa))
        .collect()
}

/// Local maximizers of `F` on `[a, b]`: one per concave cell, plus every
/// support point of the field.
fn interval_candidates(
    kernels: &[Kernel],
    field: &Field,
    y: &[f64],
    kinks: &[f64],
    (a, b): (f64, f64),
    tol: f64,
) -> Vec<(f64, ExtReal)> {
    let (cells, points) = cells(field, kinks, a, b);
    let mut found: Vec<(f64, ExtReal)> = Vec::new();
    for x in points {
        found.push((x, field.eval(x) + kernel_sum(kernels, y, x)));
    }
    for cell in cells {
        let f = |t: f64| cell.branch.eval(t) + kernel_sum(kernels, y, t);
        found.push(golden_max(f, cell.lo, cell.hi, tol));
    }
    found
}

fn maximize_interval(
    kernels: &[Kernel],
    field: &Field,
    y: &[f64],
    kinks: &[f64],
    interval: (f64, f64),
    tol: f64,
) -> (ExtReal, Option<Bracket>) {
    let found = interval_candidates(kernels, field, y, kinks, interval, tol);
    let best = found.iter().map(|&(_, v)| v).max().unwrap_or(ExtReal::NEG_INF);
    let Some(m) = best.as_finite() else {
        return (ExtReal::NEG_INF, None);
    };
    let mut bracket: Option<Bracket> = None;
    for &(t, v) in &found {
        if v.as_finite().is_some_and(|v| v >= m - Q_BRACKET) {
            bracket = Some(match bracket {
                None => Bracket { lo: t, hi: t, z: t },
                Some(br) => Bracket {
                    lo: br.lo.min(t),
                    hi: br.hi.max(t),
                    z: br.z,
                },
            });
        }
    }
    let mut bracket = bracket.expect("best value is among the candidates");
    bracket.z = found
        .iter()
        .find(|&&(_, v)| v == best)
        .map(|&(t, _)| t)
        .expect("best value is among the candidates");
    (best, Some(bracket))
}

/// Interval maxima, argmax brackets and `Φ` at `y`.
///
/// On each interval the field is cut into its pieces and every piece further
/// at the kernel kinks, so that `F` is concave on every cell; each cell is
/// maximized by golden-section search and support points of the field are
/// evaluated directly. Maxima on intervals where `F ≡ −∞` are reported as
/// `−∞`.
pub fn interval_maxima(kernels: &[Kernel], field: &Field, y: &NodeSystem, tol: f64) -> Result<MaximaReport> {
    check_arity(kernels, y)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let kinks = kink_positions(kernels, y.nodes());
    let (m, brackets): (Vec<_>, Vec<_>) = (0..=y.len())
        .map(|j| maximize_interval(kernels, field, y.nodes(), &kinks, y.interval(j), tol))
        .unzip();
    let phi: Vec<Difference> = m.windows(2).map(|w| w[1].diff(w[0])).collect();
    let regular = m.iter().all(|v| v.is_finite());
    Ok(MaximaReport {
        m,
        brackets,
        phi,
        regular,
        tol,
        grid_limited: field.grid_limited(),
    })
}

/// Local maximizers `(t, F(y, t))` of every interval `I_j`, one per concave
/// cell of `F` and one per support point of the field, unsorted.
pub fn local_maxima(kernels: &[Kernel], field: &Field, y: &NodeSystem, tol: f64) -> Result<Vec<Vec<(f64, ExtReal)>>> {
    check_arity(kernels, y)?;
    let kinks = kink_positions(kernels, y.nodes());
    Ok((0..=y.len())
        .map(|j| interval_candidates(kernels, field, y.nodes(), &kinks, y.interval(j), tol))
        .collect())
}

/// `Φ(y)`; fails with the index of the first interval whose maximum is `−∞`.
pub fn phi(kernels: &[Kernel], field: &Field, y: &NodeSystem, tol: f64) -> Result<Vec<f64>> {
    interval_maxima(kernels, field, y, tol)?.phi_values()
}

/// Whether `F(y, ·)` is finite somewhere on `I_j`, decided without
/// optimization.
fn interval_is_finite(kernels: &[Kernel], field: &Field, y: &[f64], (a, b): (f64, f64)) -> bool {
    field.pieces().iter().any(|piece| {
        let (lo, hi) = (piece.lo.max(a), piece.hi.min(b));
        if lo < hi {
            // Branches are finite inside their pieces and kernels are finite
            // away from the nodes.
            return true;
        }
        lo == hi && piece.contains(lo) && (piece.branch.eval(lo) + kernel_sum(kernels, y, lo)).is_finite()
    })
}

pub fn classify(field: &Field, kernels: &[Kernel], y: &NodeSystem) -> Classification {
    if !y.strict() {
        return Classification::Degenerate;
    }
    match (0..=y.len()).find(|&j| !interval_is_finite(kernels, field, y.nodes(), y.interval(j))) {
        Some(j) => Classification::Singular(j),
        None => Classification::Regular,
    }
}
