//! Weighted Bojanov problem: among `T(x) = Π (x − x_k)^{ν_k}` with
//! `a ≤ x_1 ≤ … ≤ x_n ≤ b`, minimize `sup_{[a, b]} w·|T|`.
//!
//! The extremal nodes are characterized by equioscillation of `w·|T|`, i.e.
//! by `Φ(y) = 0` for the kernels `ν_k·log|t|` and the field `log w`. The
//! problem is solved on `[0, 1]` and carried back affinely.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{make_log_weight_field, Weight};
use crate::kernels::{make_log_kernel, Kernel};
use crate::solver::{solve_equioscillation, SolveConfig, SolveReport};

/// Relative tolerance of the equioscillation certificate.
pub const CERT_TOL: f64 = 1e-6;
/// Monomial coefficients are reported up to this many nodes.
pub const MAX_EXPANDED: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BojanovResult {
    /// Extremal nodes in `[a, b]`.
    pub nodes: Vec<f64>,
    pub multiplicities: Vec<f64>,
    /// `sup_{[a, b]} w·|T|`.
    pub minimax: f64,
    /// Points `t_0 < … < t_n` in `[a, b]` where `w·|T|` attains the minimax.
    pub equioscillation_points: Vec<f64>,
    /// `w(t_k)·|T(t_k)|` recomputed directly.
    pub equioscillation_values: Vec<f64>,
    /// `max_k |w(t_k)|T(t_k)| − M| / M`.
    pub certificate_error: f64,
    pub certified: bool,
    /// Coefficients of `T`, leading first, when every `ν_k` is an integer and
    /// `n ≤ 12`.
    pub monomial_coefficients: Option<Vec<f64>>,
    pub solve: SolveReport,
}

/// `Π |x − x_k|^{ν_k}`.
pub fn abs_product(nodes: &[f64], nu: &[f64], x: f64) -> f64 {
    nodes.iter().zip(nu).map(|(xk, v)| (x - xk).abs().powf(*v)).product()
}

/// Coefficients of `Π (x − x_k)^{ν_k}` for integer `ν`, leading first.
pub fn expand_monomial(nodes: &[f64], nu: &[u32]) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    for (xk, &m) in nodes.iter().zip(nu) {
        for _ in 0..m {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * xk;
            }
            coeffs = next;
        }
    }
    coeffs
}

/// Solves the weighted Bojanov problem for multiplicities `nu`, weight `w`
/// given on `[a, b]`.
pub fn bojanov_extremal(
    nu: &[f64],
    weight: &Weight,
    (a, b): (f64, f64),
    config: &SolveConfig,
) -> Result<BojanovResult> {
    if nu.is_empty() {
        return Err(Error::InvalidParameter("at least one multiplicity is required".into()));
    }
    let unit_weight = weight.to_unit(a, b)?;
    let field = make_log_weight_field(&unit_weight)?;
    let kernels: Vec<Kernel> = nu.iter().map(|&v| make_log_kernel(v)).collect::<Result<_>>()?;
    let eq = solve_equioscillation(&kernels, &field, config)?;
    let len = b - a;
    let to_ab = |s: f64| a + len * s;
    let nodes: Vec<f64> = eq.solve.y_solution.iter().map(|&s| to_ab(s)).collect();
    let total: f64 = nu.iter().sum();
    let minimax = eq.common_max.exp() * len.powf(total);
    let points: Vec<f64> = eq.points.iter().map(|&s| to_ab(s)).collect();
    let values: Vec<f64> = eq
        .points
        .iter()
        .zip(&points)
        .map(|(&s, &t)| field.eval(s).to_f64().exp() * abs_product(&nodes, nu, t))
        .collect();
    let certificate_error = values.iter().map(|v| (v - minimax).abs() / minimax).fold(0.0, f64::max);
    let monomial_coefficients = (nu.len() <= MAX_EXPANDED && nu.iter().all(|v| v.fract() == 0.0)).then(|| {
        let ints: Vec<u32> = nu.iter().map(|&v| v as u32).collect();
        expand_monomial(&nodes, &ints)
    });
    Ok(BojanovResult {
        nodes,
        multiplicities: nu.to_vec(),
        minimax,
        equioscillation_points: points,
        equioscillation_values: values,
        certified: certificate_error <= CERT_TOL,
        certificate_error,
        monomial_coefficients,
        solve: eq.solve,
    })
}
