//! Inversion of `Φ`: find the node system `y` with `Φ(y) = d`.
//!
//! The iteration is a damped Newton method with Armijo backtracking on the
//! sup-norm residual. Steps are truncated so that iterates stay strictly
//! ordered, inside `[0, 1]` and regular. When Newton stalls, the target is
//! approached by continuation along `(1 − s)·Φ(y_start) + s·d`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::calculus::{
    analytic_jacobian, fd_jacobian, gradient_at, sandwich_jacobian, JacobianEstimate, FD_STEP, W_UNIQUE,
};
use crate::error::{Error, Result};
use crate::fields::{validate_field, Field};
use crate::kernels::Kernel;
use crate::landscape::{
    classify, interval_maxima, local_maxima, Classification, MaximaReport, NodeSystem, DEFAULT_TOL,
};

/// Consecutive line-search failures before switching to continuation.
const STALL_LIMIT: usize = 5;
/// Fraction of the distance to an ordering violation a step may use.
const TRUNCATION: f64 = 0.9;
const ARMIJO_SIGMA: f64 = 1e-4;
const MIN_LEG: f64 = 1e-6;
/// Competing local maximizers considered per interval after a damped step.
const MAX_RIVALS: usize = 3;
/// Cap on the number of maximizer selections tried after a damped step.
const MAX_SELECTIONS: usize = 32;
/// Analytic Jacobians with a smaller dominance margin are cross-checked by
/// finite differences.
const MARGIN_FLOOR: f64 = 1e-8;
const NUDGE_ATTEMPTS: usize = 100;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JacobianMode {
    #[default]
    Auto,
    Analytic,
    Fd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveConfig {
    /// Sup-norm residual at which the iteration stops.
    pub residual_tol: f64,
    pub max_iters: usize,
    /// Backtracking factor.
    pub damping: f64,
    pub max_halvings: usize,
    /// Initial continuation step in `s`.
    pub continuation_step: f64,
    /// Minimal distance of iterates to `0`, `1` and each other.
    pub boundary_margin: f64,
    pub jacobian_mode: JacobianMode,
    /// Golden-section tolerance for the interval maxima.
    pub maxima_tol: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            residual_tol: 1e-10,
            max_iters: 200,
            damping: 0.5,
            max_halvings: 40,
            continuation_step: 1.0,
            boundary_margin: 1e-14,
            jacobian_mode: JacobianMode::Auto,
            maxima_tol: DEFAULT_TOL,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.residual_tol,
            self.damping,
            self.continuation_step,
            self.boundary_margin,
            self.maxima_tol,
        ];
        if positive.iter().any(|x| !(*x > 0.0 && x.is_finite())) || self.max_iters == 0 || self.max_halvings == 0 {
            return Err(Error::InvalidParameter("solver settings must be positive".into()));
        }
        if self.residual_tol < 1e-14 {
            return Err(Error::InvalidParameter("residual_tol must be at least 1e-14".into()));
        }
        if self.damping >= 1.0 {
            return Err(Error::InvalidParameter("damping must be below 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    MaxIters,
    LeftDomain,
    InvalidProblem,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub y_solution: Vec<f64>,
    /// Sup-norm residuals at accepted iterates; strictly decreasing.
    pub residual_history: Vec<f64>,
    pub iterations: usize,
    pub jacobian_diagnostics: Option<JacobianEstimate>,
    pub status: Status,
    pub residual: f64,
    /// Interval maxima at the returned nodes.
    pub maxima: Option<MaximaReport>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}

/// Result of [`solve_equioscillation`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquioscillationReport {
    pub solve: SolveReport,
    /// Common value of the interval maxima.
    pub common_max: f64,
    /// Maximizers `z_0, …, z_n`.
    pub points: Vec<f64>,
}

/// Checks that `Φ` is known to be a homeomorphism for these kernels and
/// field, so that a solution exists and is unique.
///
/// Every kernel must be singular, and either every kernel satisfies the
/// periodized monotonicity condition with a positive constant, or every
/// kernel is strictly concave with a nonnegative constant and the field
/// satisfies one of the endpoint conditions.
pub fn admissibility(kernels: &[Kernel], field: &Field) -> Result<()> {
    if kernels.is_empty() {
        return Err(Error::InvalidProblem("at least one kernel is required".into()));
    }
    if let Some(i) = kernels.iter().position(|k| !k.is_singular()) {
        return Err(Error::InvalidProblem(format!(
            "kernel {i} ({}) is not singular at 0",
            kernels[i].label()
        )));
    }
    let census = validate_field(field, kernels.len());
    // n + 1 distinct finite points already make the regularity set nonempty,
    // even when two of them are the endpoints (interpolation at 0 and 1).
    let enough_points = field.support_points().is_some_and(|pts| pts.len() > kernels.len());
    if !census.passes && !enough_points {
        return Err(Error::InvalidProblem(format!(
            "field is finite at {} weighted points, needs more than {}",
            census.weighted_count, census.n
        )));
    }
    let positive_pm = kernels.iter().all(|k| k.pm_constant().is_some_and(|c| c > 0.0));
    if positive_pm {
        return Ok(());
    }
    let periodic_ok = kernels
        .iter()
        .all(|k| k.is_strictly_concave() && k.pm_constant().is_some_and(|c| c >= 0.0));
    if periodic_ok && field.hints().any() {
        return Ok(());
    }
    Err(Error::InvalidProblem(
        "kernels lack a positive monotonicity constant and the field satisfies no endpoint condition".into(),
    ))
}

/// A regular starting point: nodes placed midway between `n + 1` anchors
/// spread over the set where the field is finite.
pub fn initial_point(kernels: &[Kernel], field: &Field) -> Result<NodeSystem> {
    let n = kernels.len();
    let mut anchors: Vec<f64> = Vec::new();
    for piece in field.pieces() {
        if piece.is_point() {
            if piece.branch.eval(piece.lo).is_finite() {
                anchors.push(piece.lo);
            }
        } else {
            let len = piece.hi - piece.lo;
            anchors.extend((0..=n).map(|k| piece.lo + len * (k as f64 + 0.5) / (n as f64 + 1.0)));
        }
    }
    anchors.sort_by(f64::total_cmp);
    anchors.dedup();
    if anchors.len() < n + 1 {
        return Err(Error::InvalidProblem("field is finite at too few points".into()));
    }
    let m = anchors.len() - 1;
    let picked: Vec<f64> = (0..=n).map(|k| anchors[(k * m + n / 2) / n]).collect();
    let base: Vec<f64> = picked.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let mut candidate = base.clone();
    let mut shrink = 0.25 * picked.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    for attempt in 0..=NUDGE_ATTEMPTS {
        if let Ok(y) = NodeSystem::new(candidate.clone()) {
            if classify(field, kernels, &y) == Classification::Regular {
                return Ok(y);
            }
        }
        // Deterministic zig-zag perturbations with geometric shrink.
        shrink *= 0.8;
        candidate = base
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let sign = if (i + attempt) % 2 == 0 { 1.0 } else { -1.0 };
                (b + sign * shrink).clamp(0.0, 1.0)
            })
            .collect();
    }
    Err(Error::InvalidProblem("could not find a regular starting point".into()))
}

struct Eval {
    y: NodeSystem,
    report: MaximaReport,
    phi: Vec<f64>,
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

enum Failure {
    /// Every trial point along the step left the regularity set.
    Domain,
    /// Trial points stayed regular but never decreased the residual enough.
    Decrease,
}

enum Leg {
    Converged,
    Stalled(Failure),
    OutOfIterations,
}

struct Solver<'a> {
    kernels: &'a [Kernel],
    field: &'a Field,
    config: &'a SolveConfig,
    iterations: usize,
    last_jacobian: Option<JacobianEstimate>,
}

impl<'a> Solver<'a> {
    fn evaluate(&self, nodes: Vec<f64>) -> Option<Eval> {
        let y = NodeSystem::new(nodes).ok()?;
        if classify(self.field, self.kernels, &y) != Classification::Regular {
            return None;
        }
        let report = interval_maxima(self.kernels, self.field, &y, self.config.maxima_tol).ok()?;
        let phi = report.phi_values().ok()?;
        Some(Eval { y, report, phi })
    }

    fn jacobian(&self, at: &Eval, alternate: bool) -> Option<JacobianEstimate> {
        let analytic = || analytic_jacobian(self.kernels, self.field, &at.y, &at.report).ok();
        let fd = || fd_jacobian(self.kernels, self.field, &at.y, FD_STEP).ok();
        let sandwich = || sandwich_jacobian(self.kernels, &at.y, &at.report).ok();
        let mode = match (self.config.jacobian_mode, alternate) {
            (JacobianMode::Analytic, false) | (JacobianMode::Fd, true) => JacobianMode::Analytic,
            (JacobianMode::Fd, false) | (JacobianMode::Analytic, true) => JacobianMode::Fd,
            (JacobianMode::Auto, alt) => {
                let first = analytic().filter(|e| e.dominance_margin >= MARGIN_FLOOR);
                return if alt {
                    fd().or(first).or_else(sandwich)
                } else {
                    first.or_else(fd).or_else(analytic).or_else(sandwich)
                };
            }
        };
        match mode {
            JacobianMode::Analytic => analytic().or_else(fd),
            _ => fd().or_else(analytic),
        }
        .or_else(sandwich)
    }

    /// Largest `τ ≤ 1` keeping `y + τ·Δ` ordered with room to spare.
    fn truncation(&self, y: &[f64], delta: &[f64]) -> f64 {
        let n = y.len();
        let margin = self.config.boundary_margin;
        let pos = |k: usize, v: &[f64], edge: f64| {
            if k == 0 {
                0.0
            } else if k > n {
                edge
            } else {
                v[k - 1]
            }
        };
        let mut tau: f64 = 1.0;
        for k in 0..=n {
            let gap = pos(k + 1, y, 1.0) - pos(k, y, 0.0) - margin;
            let shrink = pos(k, delta, 0.0) - pos(k + 1, delta, 0.0);
            if shrink > 0.0 {
                tau = tau.min(TRUNCATION * gap.max(0.0) / shrink);
            }
        }
        tau
    }

    /// Newton iteration from `current` toward `target`.
    fn newton(&mut self, current: &mut Eval, target: &[f64], tol: f64, history: &mut Vec<f64>, record: bool) -> Leg {
        let mut failures = 0;
        let mut residual = sup_dist(&current.phi, target);
        loop {
            if residual <= tol {
                return Leg::Converged;
            }
            if self.iterations >= self.config.max_iters {
                return Leg::OutOfIterations;
            }
            self.iterations += 1;
            let alternate = failures % 2 == 1;
            let step = self.jacobian(current, alternate).and_then(|jac| {
                let n = current.phi.len();
                let m = DMatrix::from_fn(n, n, |j, i| jac.matrix[j][i]);
                let rhs = DVector::from_iterator(n, current.phi.iter().zip(target).map(|(p, d)| d - p));
                let delta = m.lu().solve(&rhs)?;
                self.last_jacobian = Some(jac);
                Some(delta.iter().copied().collect::<Vec<f64>>())
            });
            let primary = match step {
                Some(delta) if delta.iter().all(|d| d.is_finite()) => {
                    self.line_search(current, &delta, target, residual)
                }
                _ => Err(Failure::Decrease),
            };
            // A damped or failed step often means the maximizer of some
            // interval is about to change; try the Jacobians of the rivals.
            let outcome = match primary {
                Ok(full) if full.2 >= 1.0 => Ok(full),
                other => match (other, self.rival_step(current, target, residual)) {
                    (Ok(a), Some(b)) => Ok(if b.1 < a.1 { b } else { a }),
                    (Ok(a), None) => Ok(a),
                    (Err(_), Some(b)) => Ok(b),
                    (Err(f), None) => Err(f),
                },
            };
            let failure = match outcome {
                Ok((next, r, _)) => {
                    *current = next;
                    residual = r;
                    failures = 0;
                    if record && history.last().is_none_or(|&last| r < last) {
                        history.push(r);
                    }
                    continue;
                }
                Err(f) => f,
            };
            failures += 1;
            if failures >= STALL_LIMIT {
                return Leg::Stalled(failure);
            }
        }
    }

    /// Best Newton step over the selections of near-maximal local maximizers,
    /// one per interval, with Jacobians built along the selected maximizers.
    fn rival_step(&self, current: &Eval, target: &[f64], residual: f64) -> Option<(Eval, f64, f64)> {
        let locals = local_maxima(self.kernels, self.field, &current.y, self.config.maxima_tol).ok()?;
        let gap = residual.min(1.0);
        let rivals: Vec<Vec<f64>> = locals
            .iter()
            .zip(&current.report.m)
            .map(|(list, m)| {
                let m = m.to_f64();
                let mut near: Vec<(f64, f64)> = list
                    .iter()
                    .filter_map(|&(t, v)| v.as_finite().map(|v| (t, v)))
                    .filter(|&(_, v)| v >= m - gap)
                    .collect();
                near.sort_by(|a, b| b.1.total_cmp(&a.1));
                let mut zs: Vec<f64> = Vec::new();
                for (t, _) in near {
                    if zs.iter().all(|z| (z - t).abs() > W_UNIQUE) {
                        zs.push(t);
                    }
                }
                zs.truncate(MAX_RIVALS);
                zs
            })
            .collect();
        if rivals.iter().any(Vec::is_empty) || rivals.iter().all(|r| r.len() == 1) {
            return None;
        }
        let y = current.y.nodes();
        let grads: Vec<Vec<Option<Vec<f64>>>> = rivals
            .iter()
            .map(|zs| {
                zs.iter()
                    .map(|&z| gradient_at(self.kernels, self.field, y, z).ok())
                    .collect()
            })
            .collect();
        let n = y.len();
        let rhs = DVector::from_iterator(n, current.phi.iter().zip(target).map(|(p, d)| d - p));
        let mut best: Option<(Eval, f64, f64)> = None;
        let mut choice = vec![0usize; rivals.len()];
        for _ in 0..MAX_SELECTIONS {
            let rows: Option<Vec<&Vec<f64>>> = choice.iter().zip(&grads).map(|(&c, g)| g[c].as_ref()).collect();
            if let Some(rows) = rows {
                let m = DMatrix::from_fn(n, n, |j, i| rows[j + 1][i] - rows[j][i]);
                if let Some(delta) = m.lu().solve(&rhs) {
                    let delta: Vec<f64> = delta.iter().copied().collect();
                    if delta.iter().all(|d| d.is_finite()) {
                        if let Ok(found) = self.line_search(current, &delta, target, residual) {
                            if best.as_ref().is_none_or(|b| found.1 < b.1) {
                                best = Some(found);
                            }
                        }
                    }
                }
            }
            // Next selection in mixed-radix order.
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < rivals[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
        best
    }

    fn line_search(
        &self,
        current: &Eval,
        delta: &[f64],
        target: &[f64],
        residual: f64,
    ) -> Result<(Eval, f64, f64), Failure> {
        let y = current.y.nodes();
        let mut lambda = self.truncation(y, delta);
        let mut any_regular = false;
        for _ in 0..=self.config.max_halvings {
            let trial: Vec<f64> = y.iter().zip(delta).map(|(a, d)| a + lambda * d).collect();
            if let Some(next) = self.evaluate(trial) {
                any_regular = true;
                let r = sup_dist(&next.phi, target);
                if r <= (1.0 - ARMIJO_SIGMA * lambda) * residual {
                    return Ok((next, r, lambda));
                }
            }
            lambda *= self.config.damping;
        }
        Err(if any_regular {
            Failure::Decrease
        } else {
            Failure::Domain
        })
    }
}

/// Solves `Φ(y) = d`.
///
/// Refuses with [`Error::InvalidProblem`] when [`admissibility`] fails.
/// Non-convergence is reported through [`SolveReport::status`].
pub fn solve_phi(
    kernels: &[Kernel],
    field: &Field,
    d: &[f64],
    config: &SolveConfig,
    y0: Option<&NodeSystem>,
) -> Result<SolveReport> {
    config.validate()?;
    admissibility(kernels, field)?;
    if d.len() != kernels.len() || d.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "target must have {} finite entries",
            kernels.len()
        )));
    }
    let start = match y0 {
        Some(y) => y.clone(),
        None => initial_point(kernels, field)?,
    };
    if start.len() != kernels.len() {
        return Err(Error::InvalidParameter("initial point has the wrong length".into()));
    }
    let mut solver = Solver {
        kernels,
        field,
        config,
        iterations: 0,
        last_jacobian: None,
    };
    let mut current = solver
        .evaluate(start.into_vec())
        .ok_or_else(|| Error::InvalidParameter("initial point is not regular".into()))?;
    let tol = config.residual_tol;
    let mut history = vec![sup_dist(&current.phi, d)];

    let mut outcome = solver.newton(&mut current, d, tol, &mut history, true);
    if let Leg::Stalled(_) = outcome {
        outcome = continuation(&mut solver, &mut current, d, &mut history);
    }
    let residual = sup_dist(&current.phi, d);
    let status = match outcome {
        Leg::Converged => Status::Converged,
        Leg::OutOfIterations => Status::MaxIters,
        Leg::Stalled(Failure::Domain) => Status::LeftDomain,
        Leg::Stalled(Failure::Decrease) => Status::MaxIters,
    };
    let jacobian = solver.jacobian(&current, false).or(solver.last_jacobian.take());
    Ok(SolveReport {
        y_solution: current.y.nodes().to_vec(),
        residual_history: history,
        iterations: solver.iterations,
        jacobian_diagnostics: jacobian,
        status,
        residual,
        maxima: Some(current.report),
    })
}

fn continuation(solver: &mut Solver<'_>, current: &mut Eval, d: &[f64], history: &mut Vec<f64>) -> Leg {
    let phi0 = current.phi.clone();
    let tol = solver.config.residual_tol;
    let mut s = 0.0;
    let mut ds = solver.config.continuation_step.min(1.0) * 0.5;
    while s < 1.0 {
        let s_next = (s + ds).min(1.0);
        let target: Vec<f64> = phi0
            .iter()
            .zip(d)
            .map(|(a, b)| (1.0 - s_next) * a + s_next * b)
            .collect();
        let leg_tol = if s_next >= 1.0 { tol } else { tol.max(1e-8) };
        let mut trial = Eval {
            y: current.y.clone(),
            report: current.report.clone(),
            phi: current.phi.clone(),
        };
        let mut scratch = Vec::new();
        match solver.newton(&mut trial, &target, leg_tol, &mut scratch, false) {
            Leg::Converged => {
                *current = trial;
                s = s_next;
                ds *= 2.0;
                let r = sup_dist(&current.phi, d);
                if history.last().is_none_or(|&last| r < last) {
                    history.push(r);
                }
            }
            Leg::OutOfIterations => return Leg::OutOfIterations,
            Leg::Stalled(f) => {
                ds *= 0.5;
                if ds < MIN_LEG {
                    return Leg::Stalled(f);
                }
            }
        }
    }
    Leg::Converged
}

/// Solves `Φ(y) = 0`: all interval maxima equal.
pub fn solve_equioscillation(kernels: &[Kernel], field: &Field, config: &SolveConfig) -> Result<EquioscillationReport> {
    let solve = solve_phi(kernels, field, &vec![0.0; kernels.len()], config, None)?;
    let maxima = solve.maxima.as_ref().expect("solver reports maxima");
    let common_max = maxima.m.iter().map(|m| m.to_f64()).fold(f64::NEG_INFINITY, f64::max);
    let points = maxima.argmax();
    Ok(EquioscillationReport {
        solve,
        common_max,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{make_discrete_field, make_jump_field, make_kinked_field, make_plateau_field, make_zero_field};
    use crate::kernels::{make_kinked_log_kernel, make_log_kernel, make_reciprocal_kernel, make_sqrt_kernel};

    #[test]
    fn symmetric_single_node() {
        let k = vec![make_log_kernel(1.0).unwrap()];
        let r = solve_phi(&k, &make_zero_field(), &[0.0], &SolveConfig::default(), None).unwrap();
        assert!(r.converged());
        assert!((r.y_solution[0] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn kinked_example_target() {
        let k = vec![make_kinked_log_kernel()];
        let r = solve_phi(&k, &make_kinked_field(), &[0.6f64.ln()], &SolveConfig::default(), None).unwrap();
        assert!(r.converged());
        assert!((r.y_solution[0] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn chebyshev_quadratic() {
        let k = vec![make_log_kernel(1.0).unwrap(); 2];
        let r = solve_equioscillation(&k, &make_zero_field(), &SolveConfig::default()).unwrap();
        assert!(r.solve.converged());
        let s = 2f64.sqrt();
        assert!((r.solve.y_solution[0] - (2.0 - s) / 4.0).abs() < 1e-9);
        assert!((r.solve.y_solution[1] - (2.0 + s) / 4.0).abs() < 1e-9);
        assert!((r.common_max - (1.0f64 / 8.0).ln()).abs() < 1e-9);
    }

    #[test]
    fn chebyshev_cubic() {
        let k = vec![make_log_kernel(1.0).unwrap(); 3];
        let r = solve_equioscillation(&k, &make_zero_field(), &SolveConfig::default()).unwrap();
        for (i, y) in r.solve.y_solution.iter().enumerate() {
            let expected = (1.0 + ((2 * (3 - i) - 1) as f64 * std::f64::consts::PI / 6.0).cos()) / 2.0;
            assert!((y - expected).abs() < 1e-8, "{y} vs {expected}");
        }
        assert!((r.common_max + 5.0 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn refuses_counterexample_classes() {
        let cfg = SolveConfig::default();
        assert!(matches!(
            solve_phi(&[make_sqrt_kernel()], &make_jump_field(), &[0.0], &cfg, None),
            Err(Error::InvalidProblem(_))
        ));
        assert!(matches!(
            solve_phi(&[make_reciprocal_kernel()], &make_plateau_field(), &[0.0], &cfg, None),
            Err(Error::InvalidProblem(_))
        ));
        let thin = make_discrete_field(&[0.0, 1.0], &[0.0, 0.0]).unwrap();
        assert!(matches!(
            solve_phi(&vec![make_log_kernel(1.0).unwrap(); 2], &thin, &[0.0, 0.0], &cfg, None),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn residual_history_decreases() {
        let k = vec![make_log_kernel(1.0).unwrap(); 3];
        let r = solve_phi(&k, &make_zero_field(), &[5.0, -3.0, 2.0], &SolveConfig::default(), None).unwrap();
        assert!(r.converged());
        assert!(r.residual_history.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn discrete_start_is_regular() {
        let f = make_discrete_field(&[0.0, 0.3, 0.6, 1.0], &[0.0; 4]).unwrap();
        let k = vec![make_log_kernel(1.0).unwrap(); 2];
        let y = initial_point(&k, &f).unwrap();
        assert_eq!(classify(&f, &k, &y), Classification::Regular);
    }
}
