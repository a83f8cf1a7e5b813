//! Extended reals `ℝ ∪ {−∞}` and the signed differences built from them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A real number or `−∞`. `+∞` and NaN are never representable.
#[derive(Clone, Copy, PartialEq)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const NEG_INF: ExtReal = ExtReal(f64::NEG_INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    /// Wraps a float. NaN and `−∞` both map to `−∞`; `+∞` is rejected.
    ///
    /// NaN arises from `log` of negative rounding noise and similar
    /// evaluations at the edge of a domain, where the only meaningful
    /// extended value is the singular one.
    pub fn new(x: f64) -> Self {
        assert!(x != f64::INFINITY, "+inf is not an extended-real value");
        if x.is_nan() {
            ExtReal::NEG_INF
        } else {
            ExtReal(x)
        }
    }

    pub fn finite(x: f64) -> Self {
        debug_assert!(x.is_finite());
        ExtReal(x)
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// The raw float, `f64::NEG_INFINITY` for `−∞`.
    pub fn to_f64(self) -> f64 {
        self.0
    }

    pub fn as_finite(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    /// `self − other` in `[−∞, +∞]`; undefined when both are `−∞`.
    pub fn diff(self, other: ExtReal) -> Difference {
        match (self.as_finite(), other.as_finite()) {
            (Some(a), Some(b)) => Difference::Finite(a - b),
            (Some(_), None) => Difference::PosInf,
            (None, Some(_)) => Difference::NegInf,
            (None, None) => Difference::Undefined,
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal::new(x)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        // −∞ absorbs every finite summand.
        ExtReal(self.0 + rhs.0)
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: f64) -> ExtReal {
        ExtReal::new(self.0 + rhs)
    }
}

impl std::iter::Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> Self {
        iter.fold(ExtReal::ZERO, |a, b| a + b)
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_neg_inf() {
            f.write_str("-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.as_finite() {
            Some(x) => s.serialize_f64(x),
            None => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) if x.is_finite() => Ok(ExtReal(x)),
            Repr::Text(t) if t == "-inf" => Ok(ExtReal::NEG_INF),
            _ => Err(serde::de::Error::custom("expected a finite number or \"-inf\"")),
        }
    }
}

/// Extended difference of two interval maxima.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Difference {
    Finite(f64),
    PosInf,
    NegInf,
    /// `(−∞) − (−∞)`: the node system lies outside the domain of the map.
    Undefined,
}

impl Difference {
    pub fn as_finite(self) -> Option<f64> {
        match self {
            Difference::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// Absolute value, `+∞` for the infinite cases and NaN when undefined.
    pub fn abs(self) -> f64 {
        match self {
            Difference::Finite(x) => x.abs(),
            Difference::PosInf | Difference::NegInf => f64::INFINITY,
            Difference::Undefined => f64::NAN,
        }
    }
}

impl Serialize for Difference {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Difference::Finite(x) => s.serialize_f64(*x),
            Difference::PosInf => s.serialize_str("inf"),
            Difference::NegInf => s.serialize_str("-inf"),
            Difference::Undefined => s.serialize_str("undefined"),
        }
    }
}
