//! Serde adapters that put integers on the wire as decimal strings.
//!
//! Values such as `(deg φ)^21` routinely exceed 53 bits, so every integer or
//! rational is written as a string. Readers also accept plain JSON integers
//! for hand-written input files.

use std::fmt::Display;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum StrOrInt {
    Str(String),
    Int(i64),
    UInt(u64),
}

impl StrOrInt {
    fn into_string(self) -> String {
        match self {
            StrOrInt::Str(s) => s,
            StrOrInt::Int(i) => i.to_string(),
            StrOrInt::UInt(u) => u.to_string(),
        }
    }
}

fn parse<T, E>(s: &str) -> Result<T, E>
where
    T: FromStr,
    T::Err: Display,
    E: serde::de::Error,
{
    s.trim()
        .parse::<T>()
        .map_err(|e| E::custom(format!("bad integer {s:?}: {e}")))
}

pub mod dec {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let raw = StrOrInt::deserialize(d)?;
        parse(&raw.into_string())
    }
}

pub mod dec_vec {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Vec::<StrOrInt>::deserialize(d)?
            .into_iter()
            .map(|x| parse(&x.into_string()))
            .collect()
    }
}

pub mod dec_matrix {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &[Vec<T>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<Vec<T>>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Vec::<Vec<StrOrInt>>::deserialize(d)?
            .into_iter()
            .map(|row| row.into_iter().map(|x| parse(&x.into_string())).collect())
            .collect()
    }
}

pub mod dec_opt {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Option<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        match Option::<StrOrInt>::deserialize(d)? {
            Some(x) => parse(&x.into_string()).map(Some),
            None => Ok(None),
        }
    }
}

pub mod dec_opt_matrix {
    use super::*;

    pub fn deserialize<'de, T, D>(d: D) -> Result<Option<Vec<Vec<T>>>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        match Option::<Vec<Vec<StrOrInt>>>::deserialize(d)? {
            Some(rows) => rows
                .into_iter()
                .map(|row| row.into_iter().map(|x| parse(&x.into_string())).collect())
                .collect::<Result<_, _>>()
                .map(Some),
            None => Ok(None),
        }
    }
}
