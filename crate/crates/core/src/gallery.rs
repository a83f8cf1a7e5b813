//! Three single-node examples with closed-form interval maxima, and sweeps
//! comparing the numerics against them.
//!
//! * `Kinked`: a kinked periodic log kernel and the field
//!   `min(log|10t|, 0, log|10(1 − t)|)`. `Φ` is a homeomorphism but is not
//!   differentiable at `y = 7/30`.
//! * `Jump`: the non-singular kernel `√|t|` and a step field. `Φ` jumps at
//!   `y = 1/2`.
//! * `Plateau`: the periodic kernel `−1/(|t|(1 − |t|))` with a field that is
//!   finite at `0` and carries no endpoint condition. `Φ ≡ −1` on an
//!   interval, so it is not injective.

use serde::Serialize;

use crate::ext::ExtReal;
use crate::fields::{make_jump_field, make_kinked_field, make_plateau_field, Field};
use crate::kernels::{make_kinked_log_kernel, make_reciprocal_kernel, make_sqrt_kernel, Kernel};
use crate::landscape::{interval_maxima, NodeSystem, DEFAULT_TOL};

/// Right end of the plateau, `(5 + √5)/10`.
pub const PLATEAU_END: f64 = 0.723_606_797_749_979;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Example {
    Kinked,
    Jump,
    Plateau,
}

impl Example {
    pub fn kernels(self) -> Vec<Kernel> {
        vec![match self {
            Example::Kinked => make_kinked_log_kernel(),
            Example::Jump => make_sqrt_kernel(),
            Example::Plateau => make_reciprocal_kernel(),
        }]
    }

    pub fn field(self) -> Field {
        match self {
            Example::Kinked => make_kinked_field(),
            Example::Jump => make_jump_field(),
            Example::Plateau => make_plateau_field(),
        }
    }

    /// Closed-form `(m_0(y), m_1(y))` for `y ∈ (0, 1)`.
    pub fn closed_form(self, y: f64) -> (f64, f64) {
        match self {
            Example::Kinked => {
                let m0 = if y <= 0.2 {
                    (5.0 * y * y).ln()
                } else if y <= 1.0 / 3.0 + 0.1 {
                    (2.0 * (y - 0.1)).ln()
                } else {
                    (2.0f64 / 3.0).ln()
                };
                let m1 = if y < 1.0 / 3.0 - 0.1 {
                    (2.0f64 / 3.0).ln()
                } else if y < 0.8 {
                    (0.9 - y).ln()
                } else {
                    (2.5 * (1.0 - y) * (1.0 - y)).ln()
                };
                (m0, m1)
            }
            Example::Jump => {
                let m0 = if y < 0.5 { y.sqrt() } else { (y - 0.5).sqrt() + 1.0 };
                (m0, 1.0 + (1.0 - y).sqrt())
            }
            Example::Plateau => {
                let q = y * (1.0 - y);
                let m0 = if y <= PLATEAU_END { 1.0 - 1.0 / q } else { -4.0 };
                let m1 = if y <= 0.5 { -4.0 } else { -1.0 / q };
                (m0, m1)
            }
        }
    }

    /// Computed `(m_0(y), m_1(y))`.
    pub fn computed(self, y: f64) -> (ExtReal, ExtReal) {
        let nodes = NodeSystem::new(vec![y]).expect("y in [0, 1]");
        let r = interval_maxima(&self.kernels(), &self.field(), &nodes, DEFAULT_TOL).expect("one kernel");
        (r.m[0], r.m[1])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleReport {
    pub example: Example,
    pub grid_points: usize,
    pub max_dev_m0: f64,
    pub max_dev_m1: f64,
    pub max_dev_phi: f64,
    pub details: Details,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Details {
    /// One-sided slopes of the computed `Φ` on either side of `y`.
    Kink { y: f64, left_slope: f64, right_slope: f64 },
    /// Limit of `Φ` from the left at `y` and the value at `y`.
    Jump {
        y: f64,
        left_limit: f64,
        value: f64,
        jump: f64,
    },
    /// Largest deviation of `Φ` from `value` on `[from, to]`, and two
    /// distinct node positions with the same `Φ`.
    Plateau {
        value: f64,
        from: f64,
        to: f64,
        max_dev: f64,
        witnesses: [f64; 2],
        witness_phi: [f64; 2],
    },
}

fn computed_phi(ex: Example, y: f64) -> f64 {
    let (m0, m1) = ex.computed(y);
    m1.to_f64() - m0.to_f64()
}

/// Sweeps `y` over `grid` interior points and compares with the closed forms.
pub fn run_example(ex: Example, grid: usize) -> ExampleReport {
    let grid = grid.max(2);
    let (mut d0, mut d1, mut dphi) = (0.0f64, 0.0f64, 0.0f64);
    for k in 1..=grid {
        let y = k as f64 / (grid + 1) as f64;
        let (c0, c1) = ex.closed_form(y);
        let (m0, m1) = ex.computed(y);
        let (m0, m1) = (m0.to_f64(), m1.to_f64());
        d0 = d0.max((m0 - c0).abs());
        d1 = d1.max((m1 - c1).abs());
        dphi = dphi.max(((m1 - m0) - (c1 - c0)).abs());
    }
    let details = match ex {
        Example::Kinked => {
            let y = 1.0 / 3.0 - 0.1;
            let h = 1e-5;
            let at = computed_phi(ex, y);
            Details::Kink {
                y,
                left_slope: (at - computed_phi(ex, y - h)) / h,
                right_slope: (computed_phi(ex, y + h) - at) / h,
            }
        }
        Example::Jump => {
            let left_limit = computed_phi(ex, 0.5 - 1e-12);
            let value = computed_phi(ex, 0.5);
            Details::Jump {
                y: 0.5,
                left_limit,
                value,
                jump: left_limit - value,
            }
        }
        Example::Plateau => {
            let max_dev = (0..=grid)
                .map(|k| 0.5 + (PLATEAU_END - 0.5) * k as f64 / grid as f64)
                .map(|y| (computed_phi(ex, y) + 1.0).abs())
                .fold(0.0, f64::max);
            let witnesses = [0.55, 0.7];
            Details::Plateau {
                value: -1.0,
                from: 0.5,
                to: PLATEAU_END,
                max_dev,
                witnesses,
                witness_phi: witnesses.map(|y| computed_phi(ex, y)),
            }
        }
    };
    ExampleReport {
        example: ex,
        grid_points: grid,
        max_dev_m0: d0,
        max_dev_m1: d1,
        max_dev_phi: dphi,
        details,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinked_sweep() {
        let r = run_example(Example::Kinked, 400);
        assert!(r.max_dev_m0 <= 1e-8 && r.max_dev_m1 <= 1e-8);
        match r.details {
            Details::Kink {
                left_slope,
                right_slope,
                ..
            } => {
                assert!((left_slope + 7.5).abs() < 1e-3);
                assert!((right_slope + 9.0).abs() < 1e-3);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn jump_sweep() {
        let r = run_example(Example::Jump, 400);
        assert!(r.max_dev_phi <= 1e-8);
        match r.details {
            Details::Jump { jump, value, .. } => {
                assert!((jump - (1.0 - 0.5f64.sqrt())).abs() < 1e-6);
                assert!((value - 0.5f64.sqrt()).abs() < 1e-9);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn plateau_sweep() {
        let r = run_example(Example::Plateau, 400);
        assert!(r.max_dev_phi <= 1e-8);
        match r.details {
            Details::Plateau {
                max_dev, witness_phi, ..
            } => {
                assert!(max_dev <= 1e-8);
                assert!((witness_phi[0] - witness_phi[1]).abs() <= 1e-8);
            }
            _ => unreachable!(),
        }
    }
}
