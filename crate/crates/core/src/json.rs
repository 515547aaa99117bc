//! JSON helpers shared by the file schemas.

use std::fmt;

use num_bigint::BigUint;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest integer a JSON number carries exactly in IEEE doubles, `2^53 - 1`.
pub const MAX_SAFE_INTEGER: u64 = (1 << 53) - 1;

/// A natural number encoded as a JSON number when it is at most
/// [`MAX_SAFE_INTEGER`] and as a decimal string otherwise. Decoding accepts
/// either form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonNat(pub BigUint);

impl Serialize for JsonNat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(&self.0) {
            Ok(v) if v <= MAX_SAFE_INTEGER => s.serialize_u64(v),
            _ => s.serialize_str(&self.0.to_str_radix(10)),
        }
    }
}

struct NatVisitor;

impl Visitor<'_> for NatVisitor {
    type Value = JsonNat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a non-negative integer or a decimal string")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonNat, E> {
        Ok(JsonNat(BigUint::from(v)))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonNat, E> {
        u64::try_from(v)
            .map(|v| JsonNat(BigUint::from(v)))
            .map_err(|_| E::custom(format!("negative dimension {v}")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonNat, E> {
        if v.is_empty() || !v.bytes().all(|b| b.is_ascii_digit()) {
            return Err(E::custom(format!("invalid decimal string {v:?}")));
        }
        BigUint::parse_bytes(v.as_bytes(), 10)
            .map(JsonNat)
            .ok_or_else(|| E::custom(format!("invalid decimal string {v:?}")))
    }
}

impl<'de> Deserialize<'de> for JsonNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(NatVisitor)
    }
}

pub(crate) fn nats(values: &[BigUint]) -> Vec<JsonNat> {
    values.iter().cloned().map(JsonNat).collect()
}

pub(crate) fn unnats(values: Vec<JsonNat>) -> Vec<BigUint> {
    values.into_iter().map(|v| v.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_encoding() {
        let at = JsonNat(BigUint::from(MAX_SAFE_INTEGER));
        let over = JsonNat(BigUint::from(MAX_SAFE_INTEGER + 1));
        assert_eq!(serde_json::to_string(&at).unwrap(), "9007199254740991");
        assert_eq!(
            serde_json::to_string(&over).unwrap(),
            "\"9007199254740992\""
        );
    }

    #[test]
    fn decodes_both_forms() {
        let a: JsonNat = serde_json::from_str("12").unwrap();
        let b: JsonNat = serde_json::from_str("\"123456789012345678901234567890\"").unwrap();
        assert_eq!(a.0, BigUint::from(12u32));
        assert_eq!(b.0.to_string(), "123456789012345678901234567890");
        assert!(serde_json::from_str::<JsonNat>("-3").is_err());
        assert!(serde_json::from_str::<JsonNat>("\"-3\"").is_err());
        assert!(serde_json::from_str::<JsonNat>("\"\"").is_err());
        assert!(serde_json::from_str::<JsonNat>("1.5").is_err());
    }
}
