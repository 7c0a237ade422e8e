//! Rational helpers: reduction modulo 1 and the `"p/q"` string format used in
//! every serialized output.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Representative of `x` in `[0, 1)`.
pub fn mod_one(x: Rat) -> Rat {
    let r = x - x.floor();
    debug_assert!(!r.is_negative() && r < Rat::from_integer(1));
    r
}

pub fn reduce_all(v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|&x| mod_one(x)).collect()
}

/// Additive order of `x` in `Q/Z`.
pub fn order_mod_one(x: Rat) -> u64 {
    *mod_one(x).denom() as u64
}

/// Additive order of a vector in `(Q/Z)^n`: lcm of the coordinate orders.
pub fn vector_order(v: &[Rat]) -> u64 {
    v.iter().fold(1u64, |acc, &x| acc.lcm(&order_mod_one(x)))
}

pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

pub fn parse_vec<S: AsRef<str>>(v: &[S]) -> Result<Vec<Rat>> {
    v.iter().map(|s| parse_rat(s.as_ref())).collect()
}

/// Serde adapter for `Vec<Rat>` as an array of `"p/q"` strings.
pub mod serde_rat_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        format_vec(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        parse_vec(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a single `Rat` as a `"p/q"` string.
pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        parse_rat(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
