//! External field functions `J: [0, 1] → ℝ ∪ {−∞}`.
//!
//! Every field is stored as a finite list of pieces, each an interval (or a
//! single point) carrying a closed-form concave [`Branch`]. `J(t)` is the
//! largest value among the pieces containing `t` and `−∞` if there are none.
//! On a piece the sum `F = J + Σ Kᵢ(· − yᵢ)` is concave between kernel kinks,
//! which is what makes per-piece maximization reliable.

use serde::{Deserialize, Serialize};

use crate::branch::Branch;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::optimize::golden_max;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldPiece {
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "yes")]
    pub lo_closed: bool,
    #[serde(default = "yes")]
    pub hi_closed: bool,
    pub branch: Branch,
}

fn yes() -> bool {
    true
}

impl FieldPiece {
    pub fn closed(lo: f64, hi: f64, branch: Branch) -> Self {
        FieldPiece {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
            branch,
        }
    }

    pub fn point(x: f64, value: f64) -> Self {
        FieldPiece::closed(x, x, Branch::constant(value))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, t: f64) -> bool {
        let above = if self.lo_closed { t >= self.lo } else { t > self.lo };
        let below = if self.hi_closed { t <= self.hi } else { t < self.hi };
        above && below
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Zero,
    Discrete,
    LogWeight,
    Piecewise,
    Sampled,
}

/// Endpoint conditions. The `−∞` limits are computed exactly from the pieces;
/// the cusp conditions are declared by whoever builds the field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hints {
    /// `J(0) = lim_{t↓0} J(t) = −∞`
    pub infinite_at_0: bool,
    /// `J(1) = lim_{t↑1} J(t) = −∞`
    pub infinite_at_1: bool,
    /// Declared: the lower difference quotients at `0` blow up to `+∞`.
    pub cusp_at_0: bool,
    /// Declared: the upper difference quotients at `1` blow down to `−∞`.
    pub cusp_at_1: bool,
}

impl Hints {
    pub fn any(&self) -> bool {
        self.infinite_at_0 || self.infinite_at_1 || self.cusp_at_0 || self.cusp_at_1
    }
}

/// A weight `w ≥ 0` whose logarithm becomes a field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Weight {
    Constant {
        value: f64,
    },
    /// `scale · t^a · (1 − t)^b`
    Jacobi {
        scale: f64,
        a: f64,
        b: f64,
    },
    /// Piecewise constant: `values[k]` on the k-th cell cut out by `breaks`.
    /// At a break the larger neighbour wins, which keeps `w` upper
    /// semicontinuous.
    Step {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
    /// Samples `(points[k], values[k])`, evaluated by the nearest sample.
    Samples {
        points: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Weight {
    /// Reads `self` as a weight on `[a, b]` and returns the weight
    /// `s ↦ w(a + (b − a)s)` on `[0, 1]`. A Jacobi weight on `[a, b]` means
    /// `scale · (x − a)^α · (b − x)^β`.
    pub fn to_unit(&self, a: f64, b: f64) -> Result<Weight> {
        if !(a < b && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("[{a}, {b}] is not an interval")));
        }
        let len = b - a;
        let unit = |x: f64| (x - a) / len;
        Ok(match self {
            Weight::Constant { value } => Weight::Constant { value: *value },
            Weight::Jacobi { scale, a: p, b: q } => Weight::Jacobi {
                scale: scale * len.powf(p + q),
                a: *p,
                b: *q,
            },
            Weight::Step { breaks, values } => Weight::Step {
                breaks: breaks.iter().map(|&x| unit(x)).collect(),
                values: values.clone(),
            },
            Weight::Samples { points, values } => Weight::Samples {
                points: points.iter().map(|&x| unit(x)).collect(),
                values: values.clone(),
            },
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Weight::Constant { value } => *value,
            Weight::Jacobi { scale, a, b } => scale * t.powf(*a) * (1.0 - t).powf(*b),
            Weight::Step { breaks, values } => {
                let mut best = 0.0f64;
                for (k, v) in values.iter().enumerate() {
                    let lo = if k == 0 { 0.0 } else { breaks[k - 1] };
                    let hi = breaks.get(k).copied().unwrap_or(1.0);
                    if t >= lo && t <= hi {
                        best = best.max(*v);
                    }
                }
                best
            }
            Weight::Samples { .. } => {
                let field = make_log_weight_field(self).expect("validated weight");
                field.eval(t).to_f64().exp()
            }
        }
    }
}

/// Outcome of the finiteness census.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Census {
    /// Weighted number of points where `J` is finite (endpoints count
    /// `1/2`); infinite when some piece has positive length.
    pub weighted_count: f64,
    pub n: usize,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    kind: FieldKind,
    pieces: Vec<FieldPiece>,
    hints: Hints,
    upper_bound: f64,
    grid_limited: bool,
}

pub fn make_zero_field() -> Field {
    Field::build(
        FieldKind::Zero,
        vec![FieldPiece::closed(0.0, 1.0, Branch::constant(0.0))],
        false,
    )
    .expect("zero field is valid")
}

pub fn make_discrete_field(points: &[f64], values: &[f64]) -> Result<Field> {
    if points.len() != values.len() || points.is_empty() {
        return Err(Error::InvalidParameter(
            "discrete field needs equally many points and values".into(),
        ));
    }
    if points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "support points must be strictly increasing".into(),
        ));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("values must be finite".into()));
    }
    let pieces = points
        .iter()
        .zip(values)
        .map(|(&x, &v)| FieldPiece::point(x, v))
        .collect();
    Field::build(FieldKind::Discrete, pieces, false)
}

pub fn make_log_weight_field(weight: &Weight) -> Result<Field> {
    let negative = || Error::InvalidParameter("weight values must be nonnegative".into());
    match weight {
        Weight::Constant { value } => {
            if !(*value >= 0.0 && value.is_finite()) {
                return Err(negative());
            }
            let pieces = if *value > 0.0 {
                vec![FieldPiece::closed(0.0, 1.0, Branch::constant(value.ln()))]
            } else {
                Vec::new()
            };
            Field::build(FieldKind::LogWeight, pieces, false)
        }
        Weight::Jacobi { scale, a, b } => {
            if !(*scale > 0.0 && scale.is_finite()) || !(*a >= 0.0) || !(*b >= 0.0) {
                return Err(Error::InvalidParameter(
                    "Jacobi weight needs scale > 0 and exponents >= 0".into(),
                ));
            }
            let branch = Branch::constant(scale.ln())
                .with_log(*a, 1.0, 0.0)
                .with_log(*b, -1.0, 1.0);
            Field::build(FieldKind::LogWeight, vec![FieldPiece::closed(0.0, 1.0, branch)], false)
        }
        Weight::Step { breaks, values } => {
            if values.len() != breaks.len() + 1 {
                return Err(Error::InvalidParameter(
                    "step weight needs one more value than breaks".into(),
                ));
            }
            let mut cuts = vec![0.0];
            cuts.extend(breaks.iter().copied());
            cuts.push(1.0);
            if cuts.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidParameter(
                    "step breaks must be strictly increasing inside (0, 1)".into(),
                ));
            }
            if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                return Err(negative());
            }
            let pieces = values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v > 0.0)
                .map(|(k, v)| FieldPiece::closed(cuts[k], cuts[k + 1], Branch::constant(v.ln())))
                .collect();
            Field::build(FieldKind::LogWeight, pieces, false)
        }
        Weight::Samples { points, values } => {
            if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                return Err(negative());
            }
            let logs: Vec<f64> = values
                .iter()
                .map(|v| if *v > 0.0 { v.ln() } else { f64::NEG_INFINITY })
                .collect();
            make_sampled_field(points, &logs)
        }
    }
}

/// A field given by samples of `J`; `−∞` samples are allowed.
///
/// Each sample owns the cell between the midpoints to its neighbours, and at
/// a midpoint the larger of the two values is taken. Maxima computed on such
/// a field are only as good as the sampling grid.
pub fn make_sampled_field(points: &[f64], values: &[f64]) -> Result<Field> {
    if points.len() != values.len() || points.is_empty() {
        return Err(Error::InvalidParameter(
            "sampled field needs equally many points and values".into(),
        ));
    }
    if points.windows(2).any(|w| !(w[0] < w[1])) || points[0] < 0.0 || points[points.len() - 1] > 1.0 {
        return Err(Error::InvalidParameter(
            "sample points must be strictly increasing in [0, 1]".into(),
        ));
    }
    if values.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(Error::InvalidParameter("sample values must be < +inf".into()));
    }
    let m = points.len();
    let pieces = (0..m)
        .filter(|&k| values[k].is_finite())
        .map(|k| {
            let lo = if k == 0 { 0.0 } else { 0.5 * (points[k - 1] + points[k]) };
            let hi = if k + 1 == m {
                1.0
            } else {
                0.5 * (points[k] + points[k + 1])
            };
            FieldPiece::closed(lo, hi, Branch::constant(values[k]))
        })
        .collect();
    Field::build(FieldKind::Sampled, pieces, true)
}

/// A field from explicit pieces; each branch must be finite inside its piece.
pub fn make_piecewise_field(pieces: Vec<FieldPiece>) -> Result<Field> {
    Field::build(FieldKind::Piecewise, pieces, false)
}

/// `min(log|10t|, 0, log|10(1 − t)|)`.
pub fn make_kinked_field() -> Field {
    make_piecewise_field(vec![
        FieldPiece::closed(0.0, 0.1, Branch::log(1.0, 10.0, 0.0)),
        FieldPiece::closed(0.1, 0.9, Branch::constant(0.0)),
        FieldPiece::closed(0.9, 1.0, Branch::log(1.0, -10.0, 10.0)),
    ])
    .expect("built-in field is valid")
}

/// `0` on `[0, 1/2)` and `1` on `[1/2, 1]`.
pub fn make_jump_field() -> Field {
    make_piecewise_field(vec![
        FieldPiece {
            lo: 0.0,
            hi: 0.5,
            lo_closed: true,
            hi_closed: false,
            branch: Branch::constant(0.0),
        },
        FieldPiece::closed(0.5, 1.0, Branch::constant(1.0)),
    ])
    .expect("built-in field is valid")
}

/// `1` at `0` and `0` on `(0, 1]`.
pub fn make_plateau_field() -> Field {
    make_piecewise_field(vec![
        FieldPiece::point(0.0, 1.0),
        FieldPiece {
            lo: 0.0,
            hi: 1.0,
            lo_closed: false,
            hi_closed: true,
            branch: Branch::constant(0.0),
        },
    ])
    .expect("built-in field is valid")
}

pub fn validate_field(field: &Field, n: usize) -> Census {
    let mut count = 0.0;
    let mut points: Vec<f64> = Vec::new();
    for piece in &field.pieces {
        if piece.is_point() {
            if piece.branch.eval(piece.lo).is_finite() {
                points.push(piece.lo);
            }
        } else {
            count = f64::INFINITY;
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    for x in points {
        count += if x == 0.0 || x == 1.0 { 0.5 } else { 1.0 };
    }
    Census {
        weighted_count: count,
        n,
        passes: count > n as f64,
    }
}

impl Field {
    fn build(kind: FieldKind, mut pieces: Vec<FieldPiece>, grid_limited: bool) -> Result<Field> {
        for p in &pieces {
            p.branch.validate()?;
            if !(0.0 <= p.lo && p.lo <= p.hi && p.hi <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "field piece [{}, {}] is not inside [0, 1]",
                    p.lo, p.hi
                )));
            }
            if p.is_point() && !(p.lo_closed && p.hi_closed) {
                return Err(Error::InvalidParameter("point pieces must be closed".into()));
            }
            if p.branch.has_root_inside(p.lo, p.hi) {
                return Err(Error::InvalidParameter(format!(
                    "field branch is -inf inside [{}, {}]",
                    p.lo, p.hi
                )));
            }
        }
        pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        let mut field = Field {
            kind,
            pieces,
            hints: Hints::default(),
            upper_bound: f64::NEG_INFINITY,
            grid_limited,
        };
        field.upper_bound = field.compute_upper_bound();
        field.hints.infinite_at_0 = field.limit_is_neg_inf(0.0);
        field.hints.infinite_at_1 = field.limit_is_neg_inf(1.0);
        Ok(field)
    }

    fn compute_upper_bound(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| {
                let (_, v) = golden_max(|t| p.branch.eval(t), p.lo, p.hi, 1e-12);
                v.to_f64()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether `J(e) = −∞` and `J(t) → −∞` as `t → e` from inside `[0, 1]`.
    fn limit_is_neg_inf(&self, e: f64) -> bool {
        if self.eval(e).is_finite() {
            return false;
        }
        self.pieces
            .iter()
            .filter(|p| !p.is_point() && (p.lo == e || p.hi == e))
            .all(|p| p.branch.eval(e).is_neg_inf())
    }

    /// Declares the cusp conditions at `0` and/or `1`.
    pub fn with_cusp_hints(mut self, at_0: bool, at_1: bool) -> Field {
        self.hints.cusp_at_0 = at_0;
        self.hints.cusp_at_1 = at_1;
        self
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn pieces(&self) -> &[FieldPiece] {
        &self.pieces
    }

    pub fn hints(&self) -> Hints {
        self.hints
    }

    /// `sup J`, up to the golden-section tolerance.
    pub fn upper_bound(&self) -> f64 {
        self.upper_bound
    }

    /// Whether maxima over this field are limited by a sampling grid.
    pub fn grid_limited(&self) -> bool {
        self.grid_limited
    }

    /// `true` when `J` is finite at finitely many points only.
    pub fn is_discrete(&self) -> bool {
        self.pieces.iter().all(FieldPiece::is_point)
    }

    /// Points where `J` is finite, for fields that are finite at finitely
    /// many points.
    pub fn support_points(&self) -> Option<Vec<f64>> {
        self.is_discrete().then(|| self.pieces.iter().map(|p| p.lo).collect())
    }

    /// Maximal closed intervals (possibly degenerate) outside of which `J`
    /// is `−∞`.
    pub fn support(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for p in &self.pieces {
            match out.last_mut() {
                Some(last) if p.lo <= last.1 => last.1 = last.1.max(p.hi),
                _ => out.push((p.lo, p.hi)),
            }
        }
        out
    }

    /// Endpoints of every piece: the places where `J` may fail to be
    /// differentiable.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.pieces.iter().flat_map(|p| [p.lo, p.hi]).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    pub fn eval(&self, t: f64) -> ExtReal {
        self.pieces
            .iter()
            .filter(|p| p.contains(t))
            .map(|p| p.branch.eval(t))
            .max()
            .unwrap_or(ExtReal::NEG_INF)
    }

    /// `J′(t)` when `t` lies strictly inside exactly one continuous piece and
    /// no other piece contains it.
    pub fn derivative(&self, t: f64) -> Option<f64> {
        let mut containing = self.pieces.iter().filter(|p| p.contains(t));
        let p = containing.next()?;
        if containing.next().is_some() || p.is_point() || !(p.lo < t && t < p.hi) {
            return None;
        }
        Some(p.branch.derivative(t))
    }

    /// Whether `J(e) ≥ lim sup J` at every piece endpoint, within `1e−12`.
    pub fn is_upper_semicontinuous(&self) -> bool {
        self.pieces.iter().all(|p| {
            [p.lo, p.hi].iter().all(|&e| {
                let limit = p.branch.eval(e);
                let value = self.eval(e);
                match (value.as_finite(), limit.as_finite()) {
                    (_, None) => true,
                    (None, Some(_)) => false,
                    (Some(v), Some(l)) => v >= l - 1e-12,
                }
            })
        })
    }

    /// Finite-sample look at the cusp condition at `0` (`at_0`) or `1`:
    /// returns the sampled one-sided difference quotients at `t = 10⁻ᵏ`
    /// (resp. `1 − 10⁻ᵏ`), `k = 2..=8`, each infimum (supremum) taken over
    /// `s` in a geometric grid between the endpoint and `t`. A necessary
    /// condition for the cusp is that these grow without bound in modulus;
    /// this never certifies it.
    pub fn cusp_quotients(&self, at_0: bool) -> Vec<f64> {
        (2..=8)
            .map(|k| {
                let d = 10f64.powi(-k);
                let t = if at_0 { d } else { 1.0 - d };
                let jt = self.eval(t);
                let quotients = (0..=40).map(|m| {
                    let frac = if m == 40 { 1.0 } else { 1.0 - 0.7f64.powi(m) };
                    let s = if at_0 { d * (1.0 - frac) } else { 1.0 - d * (1.0 - frac) };
                    match jt.diff(self.eval(s)) {
                        crate::ext::Difference::Finite(x) => x / (t - s),
                        crate::ext::Difference::PosInf => {
                            if at_0 {
                                f64::INFINITY
                            } else {
                                f64::NEG_INFINITY
                            }
                        }
                        _ => f64::NAN,
                    }
                });
                if at_0 {
                    quotients.filter(|q| !q.is_nan()).fold(f64::INFINITY, f64::min)
                } else {
                    quotients.filter(|q| !q.is_nan()).fold(f64::NEG_INFINITY, f64::max)
                }
            })
            .collect()
    }
}
