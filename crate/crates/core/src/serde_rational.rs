//! Exact rationals serialize as `{"num": "<decimal>", "den": "<decimal>"}`
//! and integers as decimal strings, so no JSON reader ever sees a float.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combinat::{Integer, Rational};

#[derive(Serialize, Deserialize)]
struct Wire {
    num: String,
    den: String,
}

pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    Wire { num: x.numer().to_string(), den: x.denom().to_string() }.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let w = Wire::deserialize(d)?;
    let num: BigInt = w.num.parse().map_err(D::Error::custom)?;
    let den: BigInt = w.den.parse().map_err(D::Error::custom)?;
    if den == BigInt::from(0) {
        return Err(D::Error::custom("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

pub mod opt_int {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Integer>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(|v| v.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Integer>, D::Error> {
        Option::<String>::deserialize(d)?.map(|s| s.parse().map_err(D::Error::custom)).transpose()
    }
}

/// Finite floats as JSON numbers; infinities and NaN as the strings
/// `"inf"`, `"-inf"` and `"nan"`, which plain JSON cannot carry.
pub mod float {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Wire {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Wire::deserialize(d)? {
            Wire::Num(x) => Ok(x),
            Wire::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(D::Error::custom(format!("not a float: {other:?}"))),
            },
        }
    }
}
