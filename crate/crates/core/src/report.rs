//! Byte-stable serialization: every float is written with 17 significant
//! digits, and every JSON report carries the config hash and crate version.

use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `x` with 17 significant digits; non-finite values as `inf`, `-inf`, `nan`.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => match n.as_f64() {
            Some(x) if x.is_finite() => Number::from_str(&fmt17(x))
                .map(Value::Number)
                .unwrap_or(Value::Number(n)),
            _ => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, normalize(v))).collect())
        }
        other => other,
    }
}

/// Serialize to a JSON value with all floats rewritten at 17 digits.
pub fn to_value<T: Serialize>(value: &T) -> Result<Value> {
    serde_json::to_value(value)
        .map(normalize)
        .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))
}

/// Pretty JSON with a trailing newline, stamped with version and config hash.
pub fn stamped_json<T: Serialize>(value: &T, config_hash: &str) -> Result<String> {
    let body = to_value(value)?;
    let mut map = Map::new();
    map.insert("version".into(), Value::String(VERSION.into()));
    map.insert("config_hash".into(), Value::String(config_hash.into()));
    map.insert("report".into(), body);
    let mut s = serde_json::to_string_pretty(&Value::Object(map))
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Non-finite floats serialize as the strings `inf`, `-inf` or `nan`.
pub mod extended_f64 {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&super::fmt17(*x))
        }
    }
}

pub mod extended_f64_vec {
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            if x.is_finite() {
                seq.serialize_element(x)?;
            } else {
                seq.serialize_element(&super::fmt17(*x))?;
            }
        }
        seq.end()
    }
}
