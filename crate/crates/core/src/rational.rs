//! Exact rational helpers and their `{"num": .., "den": ..}` JSON form.
//!
//! Small rationals (`Ratio<i64>`) carry the sum metrics and closed-form
//! bounds. Access weights use [`BigRational`] because Zipf denominators grow
//! past 64 bits quickly.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = Ratio<i64>;

/// Integer component of the wire form: a JSON number when it fits in `i64`,
/// otherwise a decimal string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Component {
    Small(i64),
    Big(String),
}

impl Component {
    fn from_big(value: &BigInt) -> Self {
        match value.to_i64() {
            Some(v) => Component::Small(v),
            None => Component::Big(value.to_string()),
        }
    }

    fn to_big<E: serde::de::Error>(&self) -> Result<BigInt, E> {
        match self {
            Component::Small(v) => Ok(BigInt::from(*v)),
            Component::Big(s) => s.parse().map_err(E::custom),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Wire {
    num: Component,
    den: Component,
}

impl Wire {
    fn from_big(r: &BigRational) -> Self {
        Wire {
            num: Component::from_big(r.numer()),
            den: Component::from_big(r.denom()),
        }
    }

    fn to_big<E: serde::de::Error>(&self) -> Result<BigRational, E> {
        let den = self.den.to_big::<E>()?;
        if den == BigInt::from(0) {
            return Err(E::custom("zero denominator"));
        }
        Ok(BigRational::new(self.num.to_big::<E>()?, den))
    }
}

pub fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Largest integer not exceeding `r`.
pub fn floor(r: &Rational) -> i64 {
    r.floor().to_integer()
}

/// Smallest integer not below `r`.
pub fn ceil(r: &Rational) -> i64 {
    r.ceil().to_integer()
}

pub mod small {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        Wire::from_big(&to_big(r)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let big = Wire::deserialize(d)?.to_big::<D::Error>()?;
        match (big.numer().to_i64(), big.denom().to_i64()) {
            (Some(n), Some(m)) => Ok(Rational::new(n, m)),
            _ => Err(D::Error::custom("rational does not fit in 64 bits")),
        }
    }
}

pub mod small_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(|r| Wire::from_big(&to_big(r))).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let wire = Option::<Wire>::deserialize(d)?;
        wire.map(|w| {
            let big = w.to_big::<D::Error>()?;
            match (big.numer().to_i64(), big.denom().to_i64()) {
                (Some(n), Some(m)) => Ok(Rational::new(n, m)),
                _ => Err(D::Error::custom("rational does not fit in 64 bits")),
            }
        })
        .transpose()
    }
}

pub mod big {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        Wire::from_big(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        Wire::deserialize(d)?.to_big::<D::Error>()
    }
}

pub mod big_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(Wire::from_big).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<Wire>::deserialize(d)?
            .iter()
            .map(|w| w.to_big::<D::Error>())
            .collect()
    }
}
