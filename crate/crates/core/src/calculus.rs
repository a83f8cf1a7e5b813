//! Derivatives of the interval maxima and of `Φ`.
//!
//! Matrices are stored with rows indexing components of `Φ` and columns
//! indexing nodes. `A = −Φ′` is the matrix whose column dominance is
//! checked.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::Field;
use crate::kernels::Kernel;
use crate::landscape::{classify, interval_maxima, Classification, MaximaReport, NodeSystem, DEFAULT_TOL};

/// Brackets narrower than this are treated as a single maximizer.
pub const W_UNIQUE: f64 = 1e-7;

/// Slack for [`dominance_check`].
pub const TOL_DOM: f64 = 1e-6;

/// Default finite-difference step.
pub const FD_STEP: f64 = 1e-6;

/// Two finite-difference estimates further apart than this flag a kink.
pub const KINK_FLAG_TOL: f64 = 1e-3;

/// A maximizer this close to a breakpoint is taken to sit on it.
const PIN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Analytic,
    FiniteDifference,
    SandwichMidpoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobianEstimate {
    /// `Φ′(y)`, `n × n`.
    pub matrix: Vec<Vec<f64>>,
    /// For interval `j = 0..=n` and node `r`, an interval containing the
    /// kernel slope `μ_{jr}` with `∂_r m_j = −μ_{jr}`; infinite when the
    /// slope could not be evaluated.
    pub mu_bounds: Vec<Vec<[f64; 2]>>,
    /// `min_r (a_rr − Σ_{j≠r} |a_jr|)` for `A = −Φ′`.
    pub dominance_margin: f64,
    pub method: Method,
    /// Set by the finite-difference estimate when halving the step changed
    /// some entry by more than [`KINK_FLAG_TOL`].
    pub kink_flag: bool,
}

impl JacobianEstimate {
    pub fn from_matrix(matrix: Vec<Vec<f64>>, method: Method) -> Self {
        let a: Vec<Vec<f64>> = matrix.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
        JacobianEstimate {
            dominance_margin: dominance_margin(&a),
            matrix,
            mu_bounds: Vec::new(),
            method,
            kink_flag: false,
        }
    }

    /// `A = −Φ′`.
    pub fn a_matrix(&self) -> Vec<Vec<f64>> {
        self.matrix.iter().map(|row| row.iter().map(|x| -x).collect()).collect()
    }

    /// Largest off-diagonal entry of `A`.
    pub fn max_offdiagonal(&self) -> f64 {
        let a = self.a_matrix();
        let mut worst = f64::NEG_INFINITY;
        for (j, row) in a.iter().enumerate() {
            for (r, v) in row.iter().enumerate() {
                if j != r {
                    worst = worst.max(*v);
                }
            }
        }
        worst
    }
}

/// Column dominance `min_r (a_rr − Σ_{j≠r} |a_jr|)` of a square matrix.
pub fn dominance_margin(a: &[Vec<f64>]) -> f64 {
    (0..a.len())
        .map(|r| {
            let off: f64 = (0..a.len()).filter(|&j| j != r).map(|j| a[j][r].abs()).sum();
            a[r][r] - off
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn dominance_check(est: &JacobianEstimate, c: f64) -> bool {
    est.dominance_margin >= c - TOL_DOM
}

/// Bounds on the kernel slopes at the argmax brackets:
/// `D+K_r(z_j^* − y_r) ≤ μ_{jr} ≤ D−K_r(z_{*j} − y_r)`.
pub fn mu_bounds(kernels: &[Kernel], y: &NodeSystem, report: &MaximaReport) -> Vec<Vec<[f64; 2]>> {
    report
        .brackets
        .iter()
        .map(|bracket| {
            kernels
                .iter()
                .zip(y.nodes())
                .map(|(k, yr)| match bracket {
                    Some(b) => [
                        k.d_plus(b.hi - yr).unwrap_or(f64::NEG_INFINITY),
                        k.d_minus(b.lo - yr).unwrap_or(f64::INFINITY),
                    ],
                    None => [f64::NEG_INFINITY, f64::INFINITY],
                })
                .collect()
        })
        .collect()
}

fn not_applicable(msg: impl Into<String>) -> Error {
    Error::NotApplicable(msg.into())
}

fn slope(k: &Kernel, s: f64) -> Result<f64> {
    let (l, r) = (k.d_minus(s), k.d_plus(s));
    match (l, r) {
        (Ok(l), Ok(r)) if (l - r).abs() <= 1e-9 * (1.0 + l.abs()) => Ok(l),
        (Ok(_), Ok(_)) => Err(not_applicable(format!("kernel has a kink at {s}"))),
        _ => Err(not_applicable(format!("kernel slope undefined at {s}"))),
    }
}

/// Gradient of an interval maximum with respect to the nodes, taken along
/// the local maximizer `z`: the gradient of `m_j` when `z` is its unique
/// maximizer.
pub fn gradient_at(kernels: &[Kernel], field: &Field, y: &[f64], z: f64) -> Result<Vec<f64>> {
    if y.iter().any(|yi| (z - yi).abs() <= PIN_TOL) {
        return Err(not_applicable("maximizer sits on a node"));
    }
    let kinked: Vec<usize> = kernels
        .iter()
        .zip(y)
        .enumerate()
        .filter(|(_, (k, yi))| k.kinks().iter().any(|kappa| (z - *yi - kappa).abs() <= PIN_TOL))
        .map(|(i, _)| i)
        .collect();
    let field_pinned = field.is_discrete()
        || z <= PIN_TOL
        || z >= 1.0 - PIN_TOL
        || field.breakpoints().iter().any(|b| (z - b).abs() <= PIN_TOL);

    match kinked.as_slice() {
        [] => kernels
            .iter()
            .zip(y)
            .map(|(k, yi)| slope(k, z - yi).map(|d| -d))
            .collect(),
        [pinned] if !field_pinned => {
            // The maximizer rides on the kink of K_pinned and moves with
            // its node; every other kernel is differentiable there.
            let jp = field
                .derivative(z)
                .ok_or_else(|| not_applicable("field not differentiable at the maximizer"))?;
            let mut others = 0.0;
            let mut grad = vec![0.0; kernels.len()];
            for (i, (k, yi)) in kernels.iter().zip(y).enumerate() {
                if i != *pinned {
                    let d = slope(k, z - yi)?;
                    others += d;
                    grad[i] = -d;
                }
            }
            let k = &kernels[*pinned];
            let s = z - y[*pinned];
            let left = jp + others + k.d_minus(s).map_err(|_| not_applicable("kink slope"))?;
            let right = jp + others + k.d_plus(s).map_err(|_| not_applicable("kink slope"))?;
            if !(left > 1e-9 && right < -1e-9) {
                return Err(not_applicable("maximizer at a kink is not strictly pinned"));
            }
            grad[*pinned] = jp + others;
            Ok(grad)
        }
        _ => Err(not_applicable("maximizer pinned by more than one breakpoint")),
    }
}

/// `Φ′(y)` from the maximizers in `report`.
///
/// Requires every bracket to be narrower than [`W_UNIQUE`]. The partials
/// are `∂_i m_j = −K_i′(z_j − y_i)` when `F(y, ·)` is smooth or kinked only
/// because of the field at `z_j`; when `z_j` sits on a kink of a single
/// kernel the maximizer moves with that kernel's node and the chain rule is
/// applied accordingly. Anything else is reported as not applicable.
pub fn analytic_jacobian(
    kernels: &[Kernel],
    field: &Field,
    y: &NodeSystem,
    report: &MaximaReport,
) -> Result<JacobianEstimate> {
    if let Some(j) = report.m.iter().position(|m| m.is_neg_inf()) {
        return Err(Error::NotRegular(j));
    }
    let mut grads = Vec::with_capacity(report.brackets.len());
    for (j, bracket) in report.brackets.iter().enumerate() {
        let b = bracket.expect("regular report has brackets");
        if b.width() > W_UNIQUE {
            return Err(not_applicable(format!(
                "argmax bracket {j} has width {} > {W_UNIQUE}",
                b.width()
            )));
        }
        grads.push(gradient_at(kernels, field, y.nodes(), b.z)?);
    }
    let matrix = grads
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
        .collect();
    let mut est = JacobianEstimate::from_matrix(matrix, Method::Analytic);
    est.mu_bounds = mu_bounds(kernels, y, report);
    Ok(est)
}

/// `Φ′(y)` from the midpoints of the slope bounds in `report`.
pub fn sandwich_jacobian(kernels: &[Kernel], y: &NodeSystem, report: &MaximaReport) -> Result<JacobianEstimate> {
    if let Some(j) = report.m.iter().position(|m| m.is_neg_inf()) {
        return Err(Error::NotRegular(j));
    }
    let mu = mu_bounds(kernels, y, report);
    if mu.iter().flatten().any(|b| !b[0].is_finite() || !b[1].is_finite()) {
        return Err(not_applicable("slope bounds are unbounded"));
    }
    let grads: Vec<Vec<f64>> = mu
        .iter()
        .map(|row| row.iter().map(|b| -0.5 * (b[0] + b[1])).collect())
        .collect();
    let matrix = grads
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
        .collect();
    let mut est = JacobianEstimate::from_matrix(matrix, Method::SandwichMidpoint);
    est.mu_bounds = mu;
    Ok(est)
}

fn phi_at(kernels: &[Kernel], field: &Field, nodes: Vec<f64>) -> Option<Vec<f64>> {
    let y = NodeSystem::new(nodes).ok()?;
    if classify(field, kernels, &y) != Classification::Regular {
        return None;
    }
    interval_maxima(kernels, field, &y, DEFAULT_TOL).ok()?.phi_values().ok()
}

fn central_column(kernels: &[Kernel], field: &Field, y: &[f64], i: usize, h: f64) -> Option<Vec<f64>> {
    let mut plus = y.to_vec();
    let mut minus = y.to_vec();
    plus[i] += h;
    minus[i] -= h;
    let fp = phi_at(kernels, field, plus)?;
    let fm = phi_at(kernels, field, minus)?;
    Some(fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
}

/// Central-difference `Φ′(y)` with one step halving.
///
/// Where the two estimates agree to [`KINK_FLAG_TOL`] the Richardson
/// combination is returned; otherwise the half-step estimate is kept and
/// the kink flag is raised. If a perturbed point leaves the regularity set
/// the step is divided by ten, at most three times.
#[allow(clippy::needless_range_loop)]
pub fn fd_jacobian(kernels: &[Kernel], field: &Field, y: &NodeSystem, h: f64) -> Result<JacobianEstimate> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
    }
    let report = interval_maxima(kernels, field, y, DEFAULT_TOL)?;
    report.phi_values()?;
    let n = y.len();
    let mut matrix = vec![vec![0.0; n]; n];
    let mut kink_flag = false;
    for i in 0..n {
        let mut step = h;
        let mut columns = None;
        for _ in 0..=3 {
            if let (Some(full), Some(half)) = (
                central_column(kernels, field, y.nodes(), i, step),
                central_column(kernels, field, y.nodes(), i, step / 2.0),
            ) {
                columns = Some((full, half));
                break;
            }
            step /= 10.0;
        }
        let (full, half) = columns.ok_or(Error::LeftDomain(3))?;
        for j in 0..n {
            if (full[j] - half[j]).abs() > KINK_FLAG_TOL {
                kink_flag = true;
                matrix[j][i] = half[j];
            } else {
                matrix[j][i] = (4.0 * half[j] - full[j]) / 3.0;
            }
        }
    }
    let mut est = JacobianEstimate::from_matrix(matrix, Method::FiniteDifference);
    est.mu_bounds = mu_bounds(kernels, y, &report);
    est.kink_flag = kink_flag;
    Ok(est)
}
