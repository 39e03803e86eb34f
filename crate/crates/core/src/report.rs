//! Exact number formatting for reports: rationals as `"a/b"` strings,
//! durations as rational seconds.

use std::time::Duration;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use serde::{Serialize, Serializer};

/// A rational in lowest terms, serialized as `"a/b"` (or `"a"` when the
/// denominator is one).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(pub BigRational);

impl ExactRational {
    pub fn new(num: i64, den: i64) -> Self {
        ExactRational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        Self::new(*r.numer(), *r.denom())
    }
}

impl std::fmt::Display for ExactRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        format_rational(&self.0).fmt(f)
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Wall time as an exact rational number of seconds, in microseconds.
pub fn seconds(d: Duration) -> String {
    format_rational(&BigRational::new(
        BigInt::from(d.as_micros()),
        BigInt::from(1_000_000u32),
    ))
}
