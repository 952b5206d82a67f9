//! JSON report plumbing: 17-significant-digit floats and point lists.

use std::fmt;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A float written as a JSON number with 17 significant digits.
///
/// Non-finite values fall back to the strings `-inf`, `+inf`, `nan`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Float17(pub f64);

impl fmt::Display for Float17 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.0;
        if x.is_nan() {
            f.write_str("nan")
        } else if x.is_infinite() {
            f.write_str(if x > 0.0 { "+inf" } else { "-inf" })
        } else {
            write!(f, "{x:.16e}")
        }
    }
}

impl Serialize for Float17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_str(&self.to_string());
        }
        let raw = RawValue::from_string(self.to_string()).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

/// Serializes a vector of floats at 17 significant digits.
pub fn ser_vec<S: Serializer>(v: &[f64], serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(v.iter().map(|&x| Float17(x)))
}

pub fn ser_opt_vec<S: Serializer>(v: &Option<Vec<f64>>, serializer: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_vec(v, serializer),
        None => serializer.serialize_none(),
    }
}

pub fn ser_vecs<S: Serializer>(v: &[Vec<f64>], serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(v.iter().map(|p| p.iter().map(|&x| Float17(x)).collect::<Vec<_>>()))
}

pub fn ser_f64<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    Float17(*x).serialize(serializer)
}

pub fn ser_opt_f64<S: Serializer>(x: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => Float17(*x).serialize(serializer),
        None => serializer.serialize_none(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization is infallible");
    s.push('\n');
    s
}
