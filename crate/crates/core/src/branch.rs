//! Closed-form concave branches `c + s·t + Σ wₖ·log|aₖ·t + bₖ|`.
//!
//! Both piecewise kernels and piecewise fields are described by these. With
//! nonnegative weights a branch is concave on every interval that avoids the
//! roots of its affine arguments, and `log` of a product of affine factors
//! covers every closed form the built-in examples need.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtReal;

/// `weight · log|slope·t + intercept|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogTerm {
    pub weight: f64,
    pub slope: f64,
    pub intercept: f64,
}

impl LogTerm {
    fn arg(&self, t: f64) -> f64 {
        self.slope * t + self.intercept
    }

    fn root(&self) -> Option<f64> {
        (self.slope != 0.0).then(|| -self.intercept / self.slope)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub linear: f64,
    #[serde(default)]
    pub logs: Vec<LogTerm>,
}

impl Branch {
    pub fn constant(c: f64) -> Self {
        Branch {
            constant: c,
            ..Default::default()
        }
    }

    /// `weight · log|slope·t + intercept|`
    pub fn log(weight: f64, slope: f64, intercept: f64) -> Self {
        Branch::default().with_log(weight, slope, intercept)
    }

    pub fn with_log(mut self, weight: f64, slope: f64, intercept: f64) -> Self {
        self.logs.push(LogTerm {
            weight,
            slope,
            intercept,
        });
        self
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.constant += c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.constant.is_finite() || !self.linear.is_finite() {
            return Err(Error::InvalidParameter("branch coefficients must be finite".into()));
        }
        for term in &self.logs {
            if !(term.weight >= 0.0 && term.weight.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "log weight {} must be finite and nonnegative",
                    term.weight
                )));
            }
            if !term.slope.is_finite() || !term.intercept.is_finite() {
                return Err(Error::InvalidParameter("log term coefficients must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> ExtReal {
        let mut acc = self.constant + self.linear * t;
        for term in &self.logs {
            if term.weight == 0.0 {
                continue;
            }
            let arg = term.arg(t).abs();
            if arg == 0.0 {
                return ExtReal::NEG_INF;
            }
            acc += term.weight * arg.ln();
        }
        ExtReal::new(acc)
    }

    /// Derivative at a point where every affine argument is nonzero.
    pub fn derivative(&self, t: f64) -> f64 {
        self.logs
            .iter()
            .fold(self.linear, |acc, term| acc + term.weight * term.slope / term.arg(t))
    }

    /// Roots of the affine arguments; the branch is `−∞` there.
    pub fn singular_points(&self) -> impl Iterator<Item = f64> + '_ {
        self.logs
            .iter()
            .filter(|term| term.weight > 0.0)
            .filter_map(LogTerm::root)
    }

    /// Whether the branch reaches `−∞` at `t` (up to `tol`).
    pub fn is_singular_at(&self, t: f64, tol: f64) -> bool {
        self.logs.iter().any(|term| {
            term.weight > 0.0 && (term.arg(t).abs() <= tol * (term.slope.abs() + term.intercept.abs()).max(1.0))
        })
    }

    pub fn is_strictly_concave(&self) -> bool {
        self.logs.iter().any(|term| term.weight > 0.0 && term.slope != 0.0)
    }

    /// The branch `s ↦ g(scale·s + shift)`.
    pub fn compose_affine(&self, scale: f64, shift: f64) -> Branch {
        Branch {
            constant: self.constant + self.linear * shift,
            linear: self.linear * scale,
            logs: self
                .logs
                .iter()
                .map(|term| LogTerm {
                    weight: term.weight,
                    slope: term.slope * scale,
                    intercept: term.slope * shift + term.intercept,
                })
                .collect(),
        }
    }

    /// Whether some log argument vanishes strictly inside `(lo, hi)`.
    pub fn has_root_inside(&self, lo: f64, hi: f64) -> bool {
        self.singular_points().any(|r| r > lo && r < hi)
    }
}
