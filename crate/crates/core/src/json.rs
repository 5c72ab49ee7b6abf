//! JSON interchange helpers.
//!
//! Integers are arbitrary precision. They are written as JSON numbers while
//! they fit in the IEEE-754 safe range (|x| <= 2^53 - 1) and as decimal
//! strings beyond it; readers accept either form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const MAX_SAFE_INTEGER: i64 = (1 << 53) - 1;

/// Arbitrary-precision integer with the JSON rendering described above.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub BigInt);

impl From<BigInt> for Int {
    fn from(x: BigInt) -> Self {
        Int(x)
    }
}

impl From<&BigInt> for Int {
    fn from(x: &BigInt) -> Self {
        Int(x.clone())
    }
}

impl From<u64> for Int {
    fn from(x: u64) -> Self {
        Int(BigInt::from(x))
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() <= MAX_SAFE_INTEGER => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = Int;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(BigInt::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(BigInt::from(v)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                v.trim()
                    .parse::<BigInt>()
                    .map(Int)
                    .map_err(|_| E::custom(format!("invalid integer string `{v}`")))
            }
        }

        d.deserialize_any(IntVisitor)
    }
}

pub fn ints(xs: &[BigInt]) -> Vec<Int> {
    xs.iter().map(Int::from).collect()
}

pub fn unints(xs: Vec<Int>) -> Vec<BigInt> {
    xs.into_iter().map(|x| x.0).collect()
}
