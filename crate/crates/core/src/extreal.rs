//! Extended reals `R ∪ {-∞, +∞}` with the inf-residual.
//!
//! Addition of a finite real absorbs into an infinite value, and the
//! inf-residual `s ∸ t = inf{r ∈ R : s ≤ t + r}` replaces subtraction so that
//! empty set values (`+∞` scalarizations) and whole-space values (`-∞`) flow
//! through difference quotients without special cases.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::report::Float17;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

pub use ExtReal::{NegInf as NEG_INF, PosInf as POS_INF};

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Maps `±inf` floats onto the infinite variants; rejects NaN.
    pub fn new(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::NotANumber)
        } else if x == f64::INFINITY {
            Ok(ExtReal::PosInf)
        } else if x == f64::NEG_INFINITY {
            Ok(ExtReal::NegInf)
        } else {
            Ok(ExtReal::Finite(x))
        }
    }

    /// Panics on NaN. For values produced by arithmetic on validated inputs.
    pub fn finite(x: f64) -> Self {
        Self::new(x).expect("NaN reached ExtReal::finite")
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn as_finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// `-inf`, the value, or `+inf` as an `f64`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(x) => x,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// `self + r` for finite `r`; infinities absorb.
    pub fn add(self, r: f64) -> Self {
        debug_assert!(r.is_finite());
        match self {
            ExtReal::Finite(x) => ExtReal::finite(x + r),
            inf => inf,
        }
    }

    /// Multiplication by a positive finite scalar.
    pub fn scale(self, lambda: f64) -> Self {
        debug_assert!(lambda > 0.0 && lambda.is_finite());
        match self {
            ExtReal::Finite(x) => ExtReal::finite(x * lambda),
            inf => inf,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal form with 17 significant digits, or `-inf` / `+inf`.
    pub fn to_report_string(self) -> String {
        match self {
            ExtReal::NegInf => "-inf".to_owned(),
            ExtReal::PosInf => "+inf".to_owned(),
            ExtReal::Finite(x) => Float17(x).to_string(),
        }
    }

    /// Inverse of [`ExtReal::to_report_string`].
    pub fn parse_report(s: &str) -> Result<Self> {
        match s {
            "-inf" => Ok(ExtReal::NegInf),
            "+inf" => Ok(ExtReal::PosInf),
            other => other
                .parse::<f64>()
                .map_err(|e| Error::Schema(format!("bad extended real `{other}`: {e}")))
                .and_then(ExtReal::new),
        }
    }
}

/// `s + r` for finite `r`.
pub fn ext_add(s: ExtReal, r: f64) -> ExtReal {
    s.add(r)
}

/// `s ∸ t = inf{r ∈ R : s ≤ t + r}`.
///
/// `(-∞) ∸ t = s ∸ (+∞) = -∞`; `(+∞) ∸ t = +∞` and `s ∸ (-∞) = +∞` otherwise.
pub fn inf_residual(s: ExtReal, t: ExtReal) -> ExtReal {
    use ExtReal::*;
    match (s, t) {
        (NegInf, _) | (_, PosInf) => NegInf,
        (PosInf, _) | (_, NegInf) => PosInf,
        (Finite(a), Finite(b)) => ExtReal::finite(a - b),
    }
}

impl Eq for ExtReal {}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.partial_cmp(b).expect("ExtReal holds no NaN"),
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::PosInf => ExtReal::NegInf,
            ExtReal::Finite(x) => ExtReal::Finite(-x),
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal::finite(x)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("+inf"),
            ExtReal::Finite(x) => fmt_real(*x, f),
        }
    }
}

/// Plain notation for moderate magnitudes, scientific otherwise.
pub fn fmt_real(x: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x != 0.0 && !(1e-4..1e16).contains(&x.abs()) {
        write!(f, "{x:e}")
    } else {
        write!(f, "{x}")
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::NegInf => serializer.serialize_str("-inf"),
            ExtReal::PosInf => serializer.serialize_str("+inf"),
            ExtReal::Finite(x) => Float17(*x).serialize(serializer),
        }
    }
}
