//! Kernel functions `K: [−1, 1] → ℝ ∪ {−∞}`, concave on `(−1, 0)` and on
//! `(0, 1)`, together with their one-sided derivatives and the metadata the
//! solver needs to decide whether a problem is well posed.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::branch::Branch;
use crate::error::{Error, Result};
use crate::ext::ExtReal;

/// Derivatives are refused this close to `0` (and to `±1` when the kernel
/// has an infinite slope there).
pub const SINGULAR_GUARD: f64 = 1e-12;

/// Tolerance used by [`check_pm`].
pub const PM_TOL: f64 = 1e-9;

/// Absolute tolerance for matching branch values at piecewise junctions.
pub const JUNCTION_TOL: f64 = 1e-9;

/// One branch of a piecewise kernel, valid on `[from, to]`.
///
/// Pieces live either in `[−1, 0]` or in `[0, 1]`; none may straddle `0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelPiece {
    pub from: f64,
    pub to: f64,
    pub branch: Branch,
}

#[derive(Clone, Debug, PartialEq)]
enum Shape {
    /// `ν·log|t|`
    Log {
        nu: f64,
    },
    /// `ν·log|sin(aπt)|`
    Sine {
        nu: f64,
        a: f64,
    },
    /// `√|t|`
    Sqrt,
    /// `−1 / (|t|(1 − |t|))`
    Reciprocal,
    Piecewise(Vec<KernelPiece>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    shape: Shape,
    scale: f64,
    singular: bool,
    strictly_concave: bool,
    pm_constant: Option<f64>,
    label: String,
}

pub fn make_log_kernel(nu: f64) -> Result<Kernel> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::InvalidParameter(format!("log kernel needs nu > 0, got {nu}")));
    }
    // 1/t − 1/(t − 1) attains its minimum 4 at t = 1/2.
    Ok(Kernel {
        shape: Shape::Log { nu },
        scale: 1.0,
        singular: true,
        strictly_concave: true,
        pm_constant: Some(4.0 * nu),
        label: format!("{nu}*log|t|"),
    })
}

pub fn make_sine_kernel(nu: f64, a: f64) -> Result<Kernel> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::InvalidParameter(format!("sine kernel needs nu > 0, got {nu}")));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "sine kernel needs 0 < a <= 1, got {a}"
        )));
    }
    let pm = if a < 1.0 {
        let half = a * PI / 2.0;
        2.0 * nu * a * PI * half.cos() / half.sin()
    } else {
        0.0
    };
    Ok(Kernel {
        shape: Shape::Sine { nu, a },
        scale: 1.0,
        singular: true,
        strictly_concave: true,
        pm_constant: Some(pm),
        label: format!("{nu}*log|sin({a}*pi*t)|"),
    })
}

/// `√|t|`: concave but not singular.
pub fn make_sqrt_kernel() -> Kernel {
    Kernel {
        shape: Shape::Sqrt,
        scale: 1.0,
        singular: false,
        strictly_concave: true,
        // 1/(2√t) + 1/(2√(1−t)) is smallest at t = 1/2.
        pm_constant: Some(std::f64::consts::SQRT_2),
        label: "sqrt|t|".into(),
    }
}

/// `−1/(|t|(1−|t|))`: singular at `0` and `±1`, and 1-periodic.
pub fn make_reciprocal_kernel() -> Kernel {
    Kernel {
        shape: Shape::Reciprocal,
        scale: 1.0,
        singular: true,
        strictly_concave: true,
        pm_constant: Some(0.0),
        label: "-1/(|t|(1-|t|))".into(),
    }
}

/// The 1-periodic kernel `log t` on `(0, 2/3)`, `log(2(1 − t))` on `[2/3, 1)`,
/// extended by `K(t) = K(t + 1)` to `(−1, 0)`.
pub fn make_kinked_log_kernel() -> Kernel {
    let pieces = vec![
        KernelPiece {
            from: -1.0,
            to: -1.0 / 3.0,
            branch: Branch::log(1.0, 1.0, 1.0),
        },
        KernelPiece {
            from: -1.0 / 3.0,
            to: 0.0,
            branch: Branch::log(1.0, -2.0, 0.0),
        },
        KernelPiece {
            from: 0.0,
            to: 2.0 / 3.0,
            branch: Branch::log(1.0, 1.0, 0.0),
        },
        KernelPiece {
            from: 2.0 / 3.0,
            to: 1.0,
            branch: Branch::log(1.0, -2.0, 2.0),
        },
    ];
    let mut k = make_piecewise_kernel(pieces, true, Some(0.0)).expect("built-in kinked kernel is well formed");
    k.label = "kinked-log".into();
    k
}

/// Builds a kernel from branches on sub-intervals of `[−1, 0]` and `[0, 1]`.
///
/// The pieces must cover both halves without gaps, agree at interior
/// junctions to within [`JUNCTION_TOL`], and be concave across each
/// junction. Whether the kernel is singular is read off its value at `0`.
pub fn make_piecewise_kernel(
    mut pieces: Vec<KernelPiece>,
    strictly_concave: bool,
    pm_constant: Option<f64>,
) -> Result<Kernel> {
    if pieces.is_empty() {
        return Err(Error::InvalidKernel("no pieces".into()));
    }
    for p in &pieces {
        p.branch.validate()?;
        if !(p.from < p.to) || p.from < -1.0 || p.to > 1.0 || (p.from < 0.0 && p.to > 0.0) {
            return Err(Error::InvalidKernel(format!(
                "piece [{}, {}] must be a proper sub-interval of [-1, 0] or [0, 1]",
                p.from, p.to
            )));
        }
        if p.branch.has_root_inside(p.from, p.to) {
            return Err(Error::InvalidKernel(format!(
                "branch on [{}, {}] is singular inside its piece",
                p.from, p.to
            )));
        }
    }
    if let Some(c) = pm_constant {
        if !(c >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pm constant must be nonnegative, got {c}"
            )));
        }
    }
    pieces.sort_by(|a, b| a.from.total_cmp(&b.from));
    if pieces[0].from != -1.0 || pieces[pieces.len() - 1].to != 1.0 {
        return Err(Error::InvalidKernel("pieces must cover [-1, 1]".into()));
    }
    for pair in pieces.windows(2) {
        let (left, right) = (&pair[0], &pair[1]);
        if left.to != right.from {
            return Err(Error::InvalidKernel(format!(
                "gap or overlap between pieces at {} and {}",
                left.to, right.from
            )));
        }
        let at = left.to;
        let (lv, rv) = (left.branch.eval(at), right.branch.eval(at));
        let matches = match (lv.as_finite(), rv.as_finite()) {
            (Some(a), Some(b)) => (a - b).abs() <= JUNCTION_TOL,
            (None, None) => true,
            _ => false,
        };
        if !matches {
            return Err(Error::InvalidKernel(format!(
                "branch values disagree at junction {at}: {lv} vs {rv}"
            )));
        }
        if at != 0.0 && lv.is_finite() {
            let (dl, dr) = (left.branch.derivative(at), right.branch.derivative(at));
            if dl < dr - JUNCTION_TOL {
                return Err(Error::InvalidKernel(format!(
                    "kernel is not concave across {at}: left slope {dl} < right slope {dr}"
                )));
            }
        }
    }
    let mut k = Kernel {
        shape: Shape::Piecewise(pieces),
        scale: 1.0,
        singular: false,
        strictly_concave,
        pm_constant,
        label: "piecewise".into(),
    };
    k.singular = k.eval(0.0).is_neg_inf();
    Ok(k)
}

/// Sampled check of `D−K(t) − D−K(t − 1) ≥ c` on `t = k/grid_size`.
pub fn check_pm(kernel: &Kernel, c: f64, grid_size: usize) -> bool {
    let grid_size = grid_size.max(2);
    (1..grid_size).all(|k| {
        let t = k as f64 / grid_size as f64;
        match (kernel.d_minus(t), kernel.d_minus(t - 1.0)) {
            (Ok(right), Ok(left)) => right - left >= c - PM_TOL,
            _ => false,
        }
    })
}

impl Kernel {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn is_strictly_concave(&self) -> bool {
        self.strictly_concave
    }

    pub fn pm_constant(&self) -> Option<f64> {
        self.pm_constant
    }

    /// `λ·K` for `λ > 0`; the PM constant scales along.
    pub fn scaled(&self, factor: f64) -> Result<Kernel> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kernel scale must be positive, got {factor}"
            )));
        }
        let mut k = self.clone();
        k.scale *= factor;
        k.pm_constant = k.pm_constant.map(|c| c * factor);
        k.label = format!("{factor}*({})", self.label);
        Ok(k)
    }

    /// `K(−1), K(0), K(1)`.
    pub fn endpoint_values(&self) -> [ExtReal; 3] {
        [self.eval(-1.0), self.eval(0.0), self.eval(1.0)]
    }

    /// `K(t)` for `t ∈ [−1, 1]`; values outside are clamped to the nearest
    /// endpoint only within rounding (`1e−15`), otherwise `−∞`.
    pub fn eval(&self, t: f64) -> ExtReal {
        let t = if t.abs() > 1.0 && t.abs() <= 1.0 + 1e-15 {
            t.signum()
        } else {
            t
        };
        if !(-1.0..=1.0).contains(&t) {
            return ExtReal::NEG_INF;
        }
        let raw = match &self.shape {
            Shape::Log { nu } => {
                if t == 0.0 {
                    return ExtReal::NEG_INF;
                }
                nu * t.abs().ln()
            }
            Shape::Sine { nu, a } => {
                let s = (a * PI * t).sin().abs();
                if t == 0.0 || (*a == 1.0 && t.abs() == 1.0) || s == 0.0 {
                    return ExtReal::NEG_INF;
                }
                nu * s.ln()
            }
            Shape::Sqrt => t.abs().sqrt(),
            Shape::Reciprocal => {
                let s = t.abs();
                if s == 0.0 || s == 1.0 {
                    return ExtReal::NEG_INF;
                }
                -1.0 / (s * (1.0 - s))
            }
            Shape::Piecewise(pieces) => {
                let piece = pieces
                    .iter()
                    .find(|p| p.from <= t && t <= p.to)
                    .expect("pieces cover [-1, 1]");
                return scale_ext(piece.branch.eval(t), self.scale);
            }
        };
        ExtReal::new(self.scale * raw)
    }

    fn check_derivative_domain(&self, t: f64) -> Result<()> {
        if !(t > -1.0 && t < 1.0) {
            return Err(Error::Domain(t, "(-1, 0) ∪ (0, 1)"));
        }
        if t.abs() < SINGULAR_GUARD {
            return Err(Error::NearSingularity(t));
        }
        if 1.0 - t.abs() < SINGULAR_GUARD && !self.endpoint_slope_finite(t.signum()) {
            return Err(Error::NearSingularity(t));
        }
        Ok(())
    }

    fn endpoint_slope_finite(&self, side: f64) -> bool {
        match &self.shape {
            Shape::Log { .. } | Shape::Sqrt => true,
            Shape::Sine { a, .. } => *a < 1.0,
            Shape::Reciprocal => false,
            Shape::Piecewise(_) => self.eval(side).is_finite(),
        }
    }

    fn smooth_derivative(&self, t: f64) -> f64 {
        let raw = match &self.shape {
            Shape::Log { nu } => nu / t,
            Shape::Sine { nu, a } => {
                let x = a * PI * t;
                nu * a * PI * x.cos() / x.sin()
            }
            Shape::Sqrt => t.signum() / (2.0 * t.abs().sqrt()),
            Shape::Reciprocal => {
                let s = t.abs();
                let q = s * (1.0 - s);
                t.signum() * (1.0 - 2.0 * s) / (q * q)
            }
            Shape::Piecewise(_) => unreachable!("piecewise derivatives are one-sided"),
        };
        self.scale * raw
    }

    /// Left derivative `D−K(t)`.
    pub fn d_minus(&self, t: f64) -> Result<f64> {
        self.check_derivative_domain(t)?;
        Ok(match &self.shape {
            Shape::Piecewise(pieces) => {
                let piece = pieces
                    .iter()
                    .find(|p| p.from < t && t <= p.to)
                    .expect("pieces cover [-1, 1]");
                self.scale * piece.branch.derivative(t)
            }
            _ => self.smooth_derivative(t),
        })
    }

    /// Right derivative `D+K(t)`.
    pub fn d_plus(&self, t: f64) -> Result<f64> {
        self.check_derivative_domain(t)?;
        Ok(match &self.shape {
            Shape::Piecewise(pieces) => {
                let piece = pieces
                    .iter()
                    .find(|p| p.from <= t && t < p.to)
                    .expect("pieces cover [-1, 1]");
                self.scale * piece.branch.derivative(t)
            }
            _ => self.smooth_derivative(t),
        })
    }

    /// Points of `(−1, 0) ∪ (0, 1)` where `D−K ≠ D+K`.
    pub fn kinks(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Piecewise(pieces) => pieces
                .windows(2)
                .map(|w| w[0].to)
                .filter(|&t| t != 0.0)
                .filter(|&t| {
                    let (l, r) = (self.d_minus(t), self.d_plus(t));
                    matches!((l, r), (Ok(l), Ok(r)) if (l - r).abs() > JUNCTION_TOL)
                })
                .collect(),
            _ => Vec::new(),
        }
    }
}

fn scale_ext(v: ExtReal, scale: f64) -> ExtReal {
    match v.as_finite() {
        Some(x) => ExtReal::finite(scale * x),
        None => ExtReal::NEG_INF,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn log_kernel_values() {
        let k = make_log_kernel(1.0).unwrap();
        assert!(close(k.eval(0.5).to_f64(), -std::f64::consts::LN_2, 1e-15));
        assert!(close(k.d_minus(0.25).unwrap(), 4.0, 1e-15));
        let k2 = make_log_kernel(2.0).unwrap();
        assert!(close(k2.eval(-0.5).to_f64(), -1.386_294_361_119_890_6, 1e-15));
        assert!(k.eval(0.0).is_neg_inf());
        assert_eq!(k.pm_constant(), Some(4.0));
        assert!(k.is_singular());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_log_kernel(0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_log_kernel(-1.0), Err(Error::InvalidParameter(_))));
        assert!(make_sine_kernel(1.0, 0.0).is_err());
        assert!(make_sine_kernel(1.0, 1.5).is_err());
        assert!(make_sine_kernel(-1.0, 0.5).is_err());
    }

    #[test]
    fn sine_kernel_values() {
        let k = make_sine_kernel(1.0, 1.0).unwrap();
        assert!(close(k.eval(0.5).to_f64(), 0.0, 1e-15));
        assert_eq!(k.pm_constant(), Some(0.0));
        let half = make_sine_kernel(1.0, 0.5).unwrap();
        assert!(close(half.pm_constant().unwrap(), PI, 1e-12));
        assert!(k.eval(1.0).is_neg_inf());
        assert!(k.eval(-1.0).is_neg_inf());
        assert!(half.eval(1.0).is_finite());
    }

    #[test]
    fn kinked_kernel_branches() {
        let k = make_kinked_log_kernel();
        assert!(close(k.eval(0.5).to_f64(), 0.5f64.ln(), 1e-15));
        assert!(close(k.eval(0.8).to_f64(), 0.4f64.ln(), 1e-15));
        // periodic extension
        assert!(close(k.eval(-0.5).to_f64(), 0.5f64.ln(), 1e-15));
        assert!(close(k.eval(-0.2).to_f64(), 0.4f64.ln(), 1e-15));
        assert!(k.is_singular());
        assert!(k.eval(1.0).is_neg_inf() && k.eval(-1.0).is_neg_inf());
        let kinks = k.kinks();
        assert_eq!(kinks.len(), 2);
        assert!(close(k.d_minus(2.0 / 3.0).unwrap(), 1.5, 1e-12));
        assert!(close(k.d_plus(2.0 / 3.0).unwrap(), -3.0, 1e-12));
        assert!(check_pm(&k, 0.0, 1000));
    }

    #[test]
    fn reciprocal_kernel_value() {
        let k = make_reciprocal_kernel();
        assert!(close(k.eval(0.5).to_f64(), -4.0, 1e-15));
        assert!(close(k.eval(-0.5).to_f64(), -4.0, 1e-15));
        assert!(k.eval(0.0).is_neg_inf());
        assert!(check_pm(&k, 0.0, 1000));
        assert!(!check_pm(&k, 0.1, 1000));
    }

    #[test]
    fn pm_checks() {
        assert!(check_pm(&make_log_kernel(1.0).unwrap(), 4.0, 1000));
        assert!(!check_pm(&make_log_kernel(1.0).unwrap(), 4.1, 1000));
        let sine = make_sine_kernel(1.0, 1.0).unwrap();
        assert!(check_pm(&sine, 0.0, 1000));
        assert!(!check_pm(&sine, 0.1, 1000));
        let half = make_sine_kernel(1.0, 0.5).unwrap();
        assert!(check_pm(&half, half.pm_constant().unwrap(), 1000));
        assert!(check_pm(&make_sqrt_kernel(), std::f64::consts::SQRT_2, 1000));
    }

    #[test]
    fn derivative_guards() {
        let k = make_log_kernel(1.0).unwrap();
        assert!(matches!(k.d_minus(1e-13), Err(Error::NearSingularity(_))));
        assert!(matches!(k.d_plus(0.0), Err(Error::NearSingularity(_))));
        assert!(k.d_minus(1.0 - 1e-13).is_ok());
        let s = make_sine_kernel(1.0, 1.0).unwrap();
        assert!(matches!(s.d_minus(1.0 - 1e-13), Err(Error::NearSingularity(_))));
        assert!(matches!(k.d_minus(1.5), Err(Error::Domain(..))));
    }

    #[test]
    fn piecewise_junction_mismatch_is_rejected() {
        let pieces = vec![
            KernelPiece {
                from: -1.0,
                to: 0.0,
                branch: Branch::log(1.0, -1.0, 0.0),
            },
            KernelPiece {
                from: 0.0,
                to: 0.5,
                branch: Branch::log(1.0, 1.0, 0.0),
            },
            KernelPiece {
                from: 0.5,
                to: 1.0,
                branch: Branch::constant(0.0),
            },
        ];
        assert!(matches!(
            make_piecewise_kernel(pieces, true, None),
            Err(Error::InvalidKernel(_))
        ));
    }

    #[test]
    fn scaling_multiplies_values_and_pm() {
        let k = make_log_kernel(1.0).unwrap().scaled(3.0).unwrap();
        assert!(close(k.eval(0.5).to_f64(), 3.0 * 0.5f64.ln(), 1e-14));
        assert!(close(k.d_plus(0.5).unwrap(), 6.0, 1e-14));
        assert_eq!(k.pm_constant(), Some(12.0));
    }
}
