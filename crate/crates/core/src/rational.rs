//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `base^exp` for a signed exponent.
pub fn pow(base: i64, exp: i64) -> Q {
    let b = BigInt::from(base);
    let p = num_traits::pow(b, exp.unsigned_abs() as usize);
    if exp >= 0 {
        Q::from_integer(p)
    } else {
        Q::new(BigInt::one(), p)
    }
}

/// Exact integer logarithm: returns `e` with `base^e == value`, if one exists.
pub fn exact_log(base: i64, value: &Q) -> Option<i64> {
    if base < 2 || !value.is_positive() {
        return None;
    }
    let b = BigInt::from(base);
    let (mut top, bottom, sign) = if value >= &Q::one() {
        (value.numer().clone(), value.denom().clone(), 1)
    } else {
        (value.denom().clone(), value.numer().clone(), -1)
    };
    if !bottom.is_one() {
        return None;
    }
    let mut e = 0i64;
    while !top.is_one() {
        if (&top % &b).is_zero() {
            top /= &b;
            e += 1;
        } else {
            return None;
        }
    }
    Some(sign * e)
}

/// Renders as `p/q`, including integers (`1/1`).
pub fn fmt(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub mod serde_q {
    //! `serde` adapters for rationals stored as `"p/q"` strings.
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_signed() {
        assert_eq!(pow(3, 2), int(9));
        assert_eq!(pow(3, -2), q(1, 9));
        assert_eq!(pow(5, 0), int(1));
    }

    #[test]
    fn exact_log_roundtrip() {
        for e in -6..=6 {
            assert_eq!(exact_log(3, &pow(3, e)), Some(e));
        }
        assert_eq!(exact_log(3, &int(2)), None);
        assert_eq!(exact_log(3, &q(2, 9)), None);
        assert_eq!(exact_log(3, &int(0)), None);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("3/6").unwrap(), q(1, 2));
        assert_eq!(parse("-4").unwrap(), int(-4));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(fmt(&int(1)), "1/1");
        assert_eq!(fmt(&q(-2, 4)), "-1/2");
    }
}
