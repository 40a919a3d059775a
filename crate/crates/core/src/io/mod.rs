//! File formats: JSON documents for complexes and filtrations, the
//! simplicial text format, scenario bundles and reports.

pub mod json;
pub mod report;
pub mod scenario;
pub mod simplicial_text;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

const SAFE_INTEGER: i64 = (1 << 53) - 1;

/// JSON value for an integer: a number inside the 53-bit safe range, a
/// decimal string outside it.
pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() <= SAFE_INTEGER => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// Serde adapter for `Vec<BigInt>` using [`int_to_json`].
pub mod bigint_list {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(int_to_json).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let values = Vec::<Value>::deserialize(d)?;
        values
            .iter()
            .map(|v| int_from_json(v).ok_or_else(|| serde::de::Error::custom(format!("not an integer: {v}"))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_integers_become_strings() {
        assert_eq!(int_to_json(&BigInt::from(-7)), Value::from(-7));
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(int_to_json(&big), Value::String(big.to_string()));
        assert_eq!(int_from_json(&int_to_json(&big)), Some(big));
        assert_eq!(int_from_json(&Value::from(1u64 << 60)), Some(BigInt::from(1u64 << 60)));
    }
}
