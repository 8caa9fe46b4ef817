//! Fixed float formatting for JSON and CSV output.
//!
//! Every float is written with 17 significant digits in scientific notation,
//! which determines an `f64` uniquely, so parsing and re-emitting a file is
//! byte-identical. Non-finite values are written as `null` and read back as
//! `+inf`.

use serde::de::{Deserialize, Deserializer};
use serde::ser::{Error as _, Serialize, SerializeSeq, Serializer};
use serde_json::value::RawValue;

/// 17 significant digits, `.` decimal separator, no locale.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Result<Box<RawValue>, serde_json::Error> {
    if x.is_finite() {
        RawValue::from_string(sig17(x))
    } else {
        RawValue::from_string("null".to_owned())
    }
}

struct Sig17(f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        raw(self.0).map_err(S::Error::custom)?.serialize(s)
    }
}

pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    Sig17(*x).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for &x in xs {
            seq.serialize_element(&Sig17(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Ok(Vec::<Option<f64>>::deserialize(d)?
            .into_iter()
            .map(|x| x.unwrap_or(f64::INFINITY))
            .collect())
    }
}

pub mod triples {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[[f64; 3]], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for p in xs {
            seq.serialize_element(&[Sig17(p[0]), Sig17(p[1]), Sig17(p[2])])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<[f64; 3]>, D::Error> {
        Vec::<[f64; 3]>::deserialize(d)
    }
}
