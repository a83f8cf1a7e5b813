//! Interpolation by generalized polynomials `G(t) = C · Π L_k(|t − y_k|)`
//! whose nodes `y_k` are unknowns.
//!
//! Lagrange-type: prescribe `G(x_j) = α_j` at fixed abscissae. The nodes
//! then interlace, `x_j < y_{j+1} < x_{j+1}`.
//!
//! Hermite–Fejér-type: prescribe the values `α_j` of `w·G` at its interval
//! maxima, which are unknown as well.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{make_discrete_field, make_log_weight_field, validate_field, Field, Weight};
use crate::kernels::{make_log_kernel, make_sine_kernel, Kernel};
use crate::solver::{solve_phi, SolveConfig, SolveReport};

/// Tolerance for `|G(x_j) − α_j|`, relative to `max α`.
pub const INTERP_TOL: f64 = 1e-8;
/// Tolerance for `|(wG)′(z_j)|`, relative to `max(1, max α)`.
pub const STAT_TOL: f64 = 1e-5;
const STAT_STEP: f64 = 1e-6;
/// Critical points this close to a weight breakpoint are not checked.
const STAT_SKIP: f64 = 1e-9;

/// A log-concave factor `L` of the interpolant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Factor {
    /// `L(t) = t^ν`
    Power { nu: f64 },
    /// `L(t) = |sin(aπt)|^ν`
    Sine { nu: f64, a: f64 },
}

impl Factor {
    /// `log L(|t|)` as a kernel.
    pub fn kernel(&self) -> Result<Kernel> {
        match *self {
            Factor::Power { nu } => make_log_kernel(nu),
            Factor::Sine { nu, a } => make_sine_kernel(nu, a),
        }
    }

    /// `L(|t|)`.
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Factor::Power { nu } => t.abs().powf(nu),
            Factor::Sine { nu, a } => (a * std::f64::consts::PI * t).sin().abs().powf(nu),
        }
    }

    fn nu(&self) -> f64 {
        match *self {
            Factor::Power { nu } | Factor::Sine { nu, .. } => nu,
        }
    }

    /// Whether the factor is periodic (`|sin(πt)|^ν`), which needs the
    /// abscissae to span less than a full period.
    fn periodic(&self) -> bool {
        matches!(*self, Factor::Sine { a, .. } if a == 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolationProblem {
    pub factors: Vec<Factor>,
    /// `x_0 < … < x_n` in `[0, 1]`.
    pub abscissae: Vec<f64>,
    /// `α_0, …, α_n > 0`.
    pub values: Vec<f64>,
}

/// Stationarity of `w·G` at one critical point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stationarity {
    pub z: f64,
    /// Central-difference derivative; absent where the check is skipped.
    pub derivative: Option<f64>,
    pub ok: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterpolationResult {
    pub nodes: Vec<f64>,
    pub scale: f64,
    /// `|G(x_j) − α_j|`, or `|w(z_j)G(z_j) − α_j|` for moving-node problems.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub interlacing: bool,
    /// `(−1)^{Σ_{k>j} ν_k} α_j` when every multiplicity is an integer: the
    /// values of the signed product `C · Π (t − y_k)^{ν_k}`.
    pub signed_values: Option<Vec<f64>>,
    /// Maximum points `z_0, …, z_n` of `w·G` (moving-node problems only).
    pub critical_points: Option<Vec<f64>>,
    pub stationarity: Option<Vec<Stationarity>>,
    pub solve: SolveReport,
}

impl InterpolationResult {
    pub fn converged(&self) -> bool {
        self.solve.converged()
    }
}

fn validate_values(values: &[f64], n: usize) -> Result<()> {
    if values.len() != n + 1 {
        return Err(Error::InvalidParameter(format!(
            "{} values given, expected {}",
            values.len(),
            n + 1
        )));
    }
    if values.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(Error::InvalidParameter("values must be positive".into()));
    }
    Ok(())
}

fn log_ratios(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| (w[1] / w[0]).ln()).collect()
}

fn product(factors: &[Factor], nodes: &[f64], t: f64) -> f64 {
    factors.iter().zip(nodes).map(|(f, y)| f.eval(t - y)).product()
}

fn signed_values(factors: &[Factor], values: &[f64]) -> Option<Vec<f64>> {
    let nus: Vec<f64> = factors.iter().map(Factor::nu).collect();
    if nus.iter().any(|nu| nu.fract() != 0.0) {
        return None;
    }
    Some(
        values
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let exponent: f64 = nus[j..].iter().sum();
                if exponent as i64 % 2 == 0 {
                    *a
                } else {
                    -a
                }
            })
            .collect(),
    )
}

/// Solves `G(x_j) = α_j`, `j = 0..=n`.
///
/// The problem is posed on the field that is `0` at the abscissae and `−∞`
/// elsewhere; the node system is then the solution of
/// `Φ(y) = (log(α_j/α_{j−1}))_j`.
pub fn lagrange_interpolate(problem: &InterpolationProblem, config: &SolveConfig) -> Result<InterpolationResult> {
    let n = problem.factors.len();
    if n == 0 {
        return Err(Error::InvalidParameter("at least one factor is required".into()));
    }
    let x = &problem.abscissae;
    if x.len() != n + 1 {
        return Err(Error::InvalidParameter(format!(
            "{} abscissae given, expected {}",
            x.len(),
            n + 1
        )));
    }
    if x.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::InvalidParameter("abscissae must lie in [0, 1]".into()));
    }
    validate_values(&problem.values, n)?;
    if problem.factors.iter().any(Factor::periodic) && !(x[n] - x[0] < 1.0) {
        return Err(Error::InvalidProblem(
            "periodic factors need the abscissae to span less than 1".into(),
        ));
    }
    let kernels = problem.factors.iter().map(Factor::kernel).collect::<Result<Vec<_>>>()?;
    let field = make_discrete_field(x, &vec![0.0; n + 1])?;
    let solve = solve_phi(&kernels, &field, &log_ratios(&problem.values), config, None)?;
    let y = solve.y_solution.clone();
    let scale = problem.values[0] / product(&problem.factors, &y, x[0]);
    let residuals: Vec<f64> = x
        .iter()
        .zip(&problem.values)
        .map(|(xj, a)| (scale * product(&problem.factors, &y, *xj) - a).abs())
        .collect();
    let interlacing = (0..n).all(|k| x[k] < y[k] && y[k] < x[k + 1]);
    Ok(InterpolationResult {
        nodes: y,
        scale,
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        residuals,
        interlacing,
        signed_values: signed_values(&problem.factors, &problem.values),
        critical_points: None,
        stationarity: None,
        solve,
    })
}

/// Lagrange interpolation by `C · Π |sin(a_k π(t − y_k))|^{ν_k}`.
pub fn trig_interpolate(problem: &InterpolationProblem, config: &SolveConfig) -> Result<InterpolationResult> {
    if problem.factors.iter().any(|f| !matches!(f, Factor::Sine { .. })) {
        return Err(Error::InvalidParameter(
            "trigonometric interpolation needs sine factors".into(),
        ));
    }
    lagrange_interpolate(problem, config)
}

fn stationarity(field: &Field, factors: &[Factor], nodes: &[f64], scale: f64, z: f64, tol: f64) -> Stationarity {
    let skip = Stationarity {
        z,
        derivative: None,
        ok: None,
    };
    if z - STAT_STEP <= 0.0 || z + STAT_STEP >= 1.0 {
        return skip;
    }
    if field
        .breakpoints()
        .iter()
        .any(|b| (z - b).abs() <= STAT_SKIP.max(2.0 * STAT_STEP))
    {
        return skip;
    }
    let wg = |t: f64| field.eval(t).to_f64().exp() * scale * product(factors, nodes, t);
    let d = (wg(z + STAT_STEP) - wg(z - STAT_STEP)) / (2.0 * STAT_STEP);
    Stationarity {
        z,
        derivative: Some(d),
        ok: Some(d.abs() <= tol),
    }
}

/// Finds nodes `y` and `C` such that `w·G` attains the value `α_j` as its
/// maximum on `[y_j, y_{j+1}]`, at the point `z_j`.
pub fn hermite_fejer_moving_nodes(
    factors: &[Factor],
    weight: &Weight,
    values: &[f64],
    config: &SolveConfig,
) -> Result<InterpolationResult> {
    let n = factors.len();
    if n == 0 {
        return Err(Error::InvalidParameter("at least one factor is required".into()));
    }
    validate_values(values, n)?;
    let field = make_log_weight_field(weight)?;
    if !validate_field(&field, n).passes {
        return Err(Error::InvalidProblem(format!(
            "weight is nonzero at too few points for {n} nodes"
        )));
    }
    let kernels = factors.iter().map(Factor::kernel).collect::<Result<Vec<_>>>()?;
    let solve = solve_phi(&kernels, &field, &log_ratios(values), config, None)?;
    let y = solve.y_solution.clone();
    let maxima = solve.maxima.as_ref().expect("solver reports maxima");
    let z = maxima.argmax();
    let scale = values[0] * (-maxima.m[0].to_f64()).exp();
    let wg = |t: f64| field.eval(t).to_f64().exp() * scale * product(factors, &y, t);
    let residuals: Vec<f64> = z.iter().zip(values).map(|(zj, a)| (wg(*zj) - a).abs()).collect();
    let max_alpha = values.iter().copied().fold(0.0, f64::max);
    let stat_tol = STAT_TOL * max_alpha.max(1.0);
    let stationarity = z
        .iter()
        .map(|&zj| stationarity(&field, factors, &y, scale, zj, stat_tol))
        .collect();
    let interlacing = (0..n).all(|k| z[k] < y[k] && y[k] < z[k + 1]);
    Ok(InterpolationResult {
        nodes: y,
        scale,
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        residuals,
        interlacing,
        signed_values: signed_values(factors, values),
        critical_points: Some(z),
        stationarity: Some(stationarity),
        solve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(factors: Vec<Factor>, x: &[f64], a: &[f64]) -> InterpolationProblem {
        InterpolationProblem {
            factors,
            abscissae: x.to_vec(),
            values: a.to_vec(),
        }
    }

    #[test]
    fn linear_factor_single_node() {
        let r = lagrange_interpolate(
            &problem(vec![Factor::Power { nu: 1.0 }], &[0.0, 1.0], &[1.0, 1.0]),
            &SolveConfig::default(),
        )
        .unwrap();
        assert!((r.nodes[0] - 0.5).abs() < 1e-10);
        assert!((r.scale - 2.0).abs() < 1e-9);
        assert_eq!(r.signed_values, Some(vec![-1.0, 1.0]));
    }

    #[test]
    fn quadratic_factor() {
        let r = lagrange_interpolate(
            &problem(vec![Factor::Power { nu: 2.0 }], &[0.0, 1.0], &[1.0, 4.0]),
            &SolveConfig::default(),
        )
        .unwrap();
        assert!((r.nodes[0] - 1.0 / 3.0).abs() < 1e-10);
        assert!((r.scale - 9.0).abs() < 1e-8);
        assert!(r.max_residual <= 4.0 * INTERP_TOL);
        assert!(r.interlacing);
    }

    #[test]
    fn two_linear_factors() {
        let r = lagrange_interpolate(
            &problem(vec![Factor::Power { nu: 1.0 }; 2], &[0.0, 0.5, 1.0], &[1.0; 3]),
            &SolveConfig::default(),
        )
        .unwrap();
        let s = 2f64.sqrt();
        assert!((r.nodes[0] - (2.0 - s) / 4.0).abs() < 1e-9);
        assert!((r.nodes[1] - (2.0 + s) / 4.0).abs() < 1e-9);
        assert!((r.scale - 8.0).abs() < 1e-7);
    }

    #[test]
    fn trig_symmetric() {
        let r = trig_interpolate(
            &problem(vec![Factor::Sine { nu: 1.0, a: 1.0 }], &[0.25, 0.75], &[1.0, 1.0]),
            &SolveConfig::default(),
        )
        .unwrap();
        assert!((r.nodes[0] - 0.5).abs() < 1e-10);
        assert!((r.scale - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn trig_window_is_enforced() {
        let err = trig_interpolate(
            &problem(vec![Factor::Sine { nu: 1.0, a: 1.0 }], &[0.0, 1.0], &[1.0, 1.0]),
            &SolveConfig::default(),
        );
        assert!(matches!(err, Err(Error::InvalidProblem(_))));
        let ok = trig_interpolate(
            &problem(vec![Factor::Sine { nu: 1.0, a: 0.5 }], &[0.0, 1.0], &[1.0, 1.0]),
            &SolveConfig::default(),
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn hermite_fejer_unweighted_quadratic() {
        let r = hermite_fejer_moving_nodes(
            &[Factor::Power { nu: 1.0 }; 2],
            &Weight::Constant { value: 1.0 },
            &[1.0; 3],
            &SolveConfig::default(),
        )
        .unwrap();
        let s = 2f64.sqrt();
        assert!((r.nodes[0] - (2.0 - s) / 4.0).abs() < 1e-9);
        assert!((r.scale - 8.0).abs() < 1e-7);
        let z = r.critical_points.as_ref().unwrap();
        assert!(z[0].abs() < 1e-12 && (z[1] - 0.5).abs() < 1e-8 && (z[2] - 1.0).abs() < 1e-12);
        let st = r.stationarity.as_ref().unwrap();
        assert_eq!(st[1].ok, Some(true));
        assert_eq!(st[0].ok, None);
    }

    #[test]
    fn rejects_nonpositive_values() {
        let err = lagrange_interpolate(
            &problem(vec![Factor::Power { nu: 1.0 }], &[0.0, 1.0], &[1.0, 0.0]),
            &SolveConfig::default(),
        );
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }
}
