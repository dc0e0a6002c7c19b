use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A real number or `+∞`.
///
/// `-∞` never arises for the conjugates in scope, so it is not representable.
/// Ordering is total with `+∞` as the maximum; NaN is rejected on
/// construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInf,
}

pub use ExtendedReal::PosInf;

impl ExtendedReal {
    pub const ZERO: Self = ExtendedReal::Finite(0.0);

    /// Converts an `f64`, mapping `f64::INFINITY` to `+∞`.
    ///
    /// Panics on NaN and `-inf`; both indicate a bug upstream.
    pub fn from_f64(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN is not an extended real");
        assert!(x != f64::NEG_INFINITY, "-inf is outside (-inf, +inf]");
        if x == f64::INFINITY {
            PosInf
        } else {
            ExtendedReal::Finite(x)
        }
    }

    /// Like [`from_f64`](Self::from_f64) but maps NaN to `+∞`.
    pub fn from_f64_or_inf(x: f64) -> Self {
        if x.is_nan() {
            PosInf
        } else {
            Self::from_f64(x)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            PosInf => None,
        }
    }

    /// The value as `f64` (`+∞` becomes `f64::INFINITY`).
    pub fn value(self) -> f64 {
        match self {
            ExtendedReal::Finite(x) => x,
            PosInf => f64::INFINITY,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Multiplication by a nonnegative scalar with `0 · ∞ = 0`.
    pub fn scale(self, c: f64) -> Self {
        debug_assert!(c >= 0.0);
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(c * x),
            PosInf if c == 0.0 => Self::ZERO,
            PosInf => PosInf,
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Eq for ExtendedReal {}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.total_cmp(b),
            (ExtendedReal::Finite(_), PosInf) => Ordering::Less,
            (PosInf, ExtendedReal::Finite(_)) => Ordering::Greater,
            (PosInf, PosInf) => Ordering::Equal,
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::from_f64_or_inf(a + b),
            _ => PosInf,
        }
    }
}

impl Add<f64> for ExtendedReal {
    type Output = ExtendedReal;
    fn add(self, rhs: f64) -> Self {
        self + ExtendedReal::from_f64(rhs)
    }
}

/// `x - c` for finite `c`; `∞ - c = ∞`.
impl Sub<f64> for ExtendedReal {
    type Output = ExtendedReal;
    fn sub(self, rhs: f64) -> Self {
        assert!(rhs.is_finite(), "cannot subtract a non-finite value");
        match self {
            ExtendedReal::Finite(a) => ExtendedReal::Finite(a - rhs),
            PosInf => PosInf,
        }
    }
}

impl Mul<f64> for ExtendedReal {
    type Output = ExtendedReal;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

/// Negation is only defined on finite values.
impl Neg for ExtendedReal {
    type Output = f64;
    fn neg(self) -> f64 {
        match self {
            ExtendedReal::Finite(x) => -x,
            PosInf => panic!("negating +inf leaves (-inf, +inf]"),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            PosInf => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedReal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        match t {
            "inf" | "+inf" | "Infinity" | "+Infinity" => Ok(PosInf),
            _ => {
                let x: f64 = t.parse().map_err(|_| Error::Parse(format!("not a number: {t:?}")))?;
                if x.is_nan() || x == f64::NEG_INFINITY {
                    return Err(Error::Parse(format!("value outside (-inf, +inf]: {t:?}")));
                }
                Ok(ExtendedReal::from_f64(x))
            }
        }
    }
}

/// Finite values serialize as JSON numbers, `+∞` as the string `"inf"`.
impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(x) => serializer.serialize_f64(*x),
            PosInf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(x) => Ok(ExtendedReal::from_f64_or_inf(x)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_addition() {
        let x = ExtendedReal::Finite(2.0);
        assert_eq!(x + PosInf, PosInf);
        assert_eq!(PosInf + x, PosInf);
        assert_eq!(x + ExtendedReal::Finite(1.5), ExtendedReal::Finite(3.5));
        assert_eq!(x.min(PosInf), x);
        assert_eq!(PosInf.scale(0.0), ExtendedReal::ZERO);
    }

    #[test]
    fn ordering_has_infinity_on_top() {
        let mut v = vec![PosInf, ExtendedReal::Finite(3.0), ExtendedReal::Finite(-1.0)];
        v.sort();
        assert_eq!(v, vec![ExtendedReal::Finite(-1.0), ExtendedReal::Finite(3.0), PosInf]);
    }

    #[test]
    fn text_and_json_round_trip() {
        assert_eq!("inf".parse::<ExtendedReal>().unwrap(), PosInf);
        assert_eq!(" 1.5 ".parse::<ExtendedReal>().unwrap(), ExtendedReal::Finite(1.5));
        assert!("-inf".parse::<ExtendedReal>().is_err());
        assert_eq!(serde_json::to_string(&PosInf).unwrap(), "\"inf\"");
        let back: ExtendedReal = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(back, PosInf);
        let back: ExtendedReal = serde_json::from_str("0.25").unwrap();
        assert_eq!(back, ExtendedReal::Finite(0.25));
    }
}
