//! Exact rationals and their string form (`"0"`, `"-1/2"`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

pub type Rational = BigRational;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn render(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational '{0}'")]
pub struct RationalParseError(pub String);

/// Parses `"a"` or `"a/b"` with `b != 0`; the result is reduced.
pub fn parse(text: &str) -> Result<Rational, RationalParseError> {
    let bad = || RationalParseError(text.to_string());
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.sign() == num_bigint::Sign::NoSign {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Parses `"a/b"` and insists the text is already reduced with `b > 0`.
pub fn parse_reduced(text: &str) -> Result<Rational, RationalParseError> {
    let q = parse(text)?;
    let t = text.trim();
    let given_den = match t.split_once('/') {
        Some((_, d)) => BigInt::from_str(d.trim()).map_err(|_| RationalParseError(text.to_string()))?,
        None => BigInt::one(),
    };
    if !given_den.is_positive() || &given_den != q.denom() {
        return Err(RationalParseError(text.to_string()));
    }
    Ok(q)
}

/// `serde(with = "crate::rational::as_string")`
pub mod as_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let t = String::deserialize(d)?;
        parse(&t).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["0", "-1/2", "1/6", "7"] {
            assert_eq!(render(&parse(s).unwrap()), s);
        }
        assert_eq!(render(&parse("2/4").unwrap()), "1/2");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn reduced_form_required() {
        assert!(parse_reduced("-1/2").is_ok());
        assert!(parse_reduced("2/4").is_err());
        assert!(parse_reduced("1/-2").is_err());
    }
}
