//! Exact rationals for every density the engines produce.
//!
//! Serialized as `{"num": "...", "den": "..."}` with decimal strings so no
//! precision is lost in JSON.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn pow(&self, e: i32) -> Self {
        ExactRational(num_traits::Pow::pow(&self.0, e))
    }

    pub fn recip(&self) -> Self {
        ExactRational(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering rounded half away from zero to `sig` significant
    /// digits, without trailing zeros.
    pub fn to_decimal(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return "0".into();
        }
        let neg = self.is_negative();
        let a = self.0.abs();
        // Exponent of the leading digit, estimated then corrected exactly.
        let mut e = a.to_f64().map(|x| x.log10().floor() as i64).unwrap_or(0);
        let ten = BigRational::from_integer(BigInt::from(10));
        let pow10 = |k: i64| -> BigRational { num_traits::Pow::pow(&ten, k as i32) };
        while a >= pow10(e + 1) {
            e += 1;
        }
        while a < pow10(e) {
            e -= 1;
        }
        let shift = sig as i64 - 1 - e;
        let scaled = &a * pow10(shift);
        let (q, r) = scaled.numer().div_rem(scaled.denom());
        let mut digits = q;
        if BigInt::from(2) * r >= *scaled.denom() {
            digits += 1;
        }
        // Rounding may carry into a new digit.
        let mut s = digits.to_string();
        if s.len() > sig {
            e += 1;
            s.truncate(sig);
        }
        // Trailing zeros carry no information once the exponent is fixed.
        let keep = s.trim_end_matches('0').len().max(1);
        s.truncate(keep);
        let body = if (-10..21).contains(&e) {
            if e >= 0 {
                let int_len = e as usize + 1;
                if s.len() <= int_len {
                    format!("{s}{}", "0".repeat(int_len - s.len()))
                } else {
                    let (i, f) = s.split_at(int_len);
                    format!("{i}.{f}")
                }
            } else {
                format!("0.{}{s}", "0".repeat((-e - 1) as usize))
            }
        } else {
            let (i, f) = s.split_at(1);
            if f.is_empty() {
                format!("{i}e{e}")
            } else {
                format!("{i}.{f}e{e}")
            }
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// `p^k` for `0 <= k`, with `p` given as a fraction.
    pub fn powu(&self, k: u32) -> Self {
        self.pow(k as i32)
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<u64> for ExactRational {
    fn from(n: u64) -> Self {
        Self::from_integer(n)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parse =
            |t: &str| BigInt::from_str(t.trim()).map_err(|e| Error::Parse(format!("{t:?}: {e}")));
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d.sign() == Sign::NoSign {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(Self::new(parse(n)?, d))
            }
            None => Ok(Self::from_integer(parse(s)?)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: String,
    den: String,
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            num: self.numer().to_string(),
            den: self.denom().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        format!("{}/{}", w.num, w.den)
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, o: Self) -> Self {
                ExactRational(self.0.$m(o.0))
            }
        }
        impl $tr<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $m(self, o: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&o.0))
            }
        }
        impl $tr<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $m(self, o: &ExactRational) -> ExactRational {
                ExactRational(self.0.$m(&o.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> Self {
        ExactRational(-self.0)
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a ExactRational> for ExactRational {
    fn sum<I: Iterator<Item = &'a ExactRational>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl Product for ExactRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}

/// Shorthand for `n/d` with machine integers.
pub fn ratio(n: i64, d: i64) -> ExactRational {
    ExactRational::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_signed() {
        let r = ratio(6, -8);
        assert_eq!(r.to_string(), "-3/4");
        assert_eq!(*r.denom(), BigInt::from(4));
        assert_eq!(ratio(4, 2).to_string(), "2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(ratio(1336688, 1594323).to_decimal(10), "0.8384047649");
        assert_eq!(ratio(1, 2).to_decimal(10), "0.5");
        assert_eq!(ratio(2, 3).to_decimal(3), "0.667");
        assert_eq!(ratio(-1, 3).to_decimal(2), "-0.33");
        assert_eq!(ratio(999, 1000).to_decimal(2), "1");
        assert_eq!(ratio(11, 32).to_decimal(10), "0.34375");
        assert_eq!(ratio(123456, 1).to_decimal(3), "123000");
        assert_eq!(ratio(1, 1_000_000_000_000).to_decimal(2), "1e-12");
        assert_eq!(ExactRational::zero().to_decimal(5), "0");
    }

    #[test]
    fn json_roundtrip() {
        let r = ratio(2112952233969, 2199023255552);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"num":"2112952233969","den":"2199023255552"}"#);
        let back: ExactRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn parse() {
        assert_eq!("3/6".parse::<ExactRational>().unwrap(), ratio(1, 2));
        assert_eq!("7".parse::<ExactRational>().unwrap(), ratio(7, 1));
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("x".parse::<ExactRational>().is_err());
    }

    #[test]
    fn arithmetic() {
        let a = ratio(1, 2);
        let b = ratio(1, 3);
        assert_eq!(&a + &b, ratio(5, 6));
        assert_eq!(&a - &b, ratio(1, 6));
        assert_eq!(&a * &b, ratio(1, 6));
        assert_eq!(&a / &b, ratio(3, 2));
        assert_eq!(a.pow(3), ratio(1, 8));
        assert_eq!(b.pow(-2), ratio(9, 1));
        assert!((ratio(1, 3).to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }
}
