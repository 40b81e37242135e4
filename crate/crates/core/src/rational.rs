//! Exact rational scalars.
//!
//! Every coordinate and dot-product target in the engine is a [`Rational`].
//! Text input accepts three literal forms: integers (`-3`), fractions
//! (`7/2`, denominator strictly positive) and decimals (`0.125`), the last
//! parsed exactly as a fraction over a power of ten.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseRationalError;

/// Arbitrary-precision fraction kept in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer.into(), denom))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Nearest double. `num-rational` rounds the quotient correctly for
    /// operands of any size.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    /// Greatest dyadic rational `k / 2^bits` not exceeding `self`.
    pub fn floor_dyadic(&self, bits: u32) -> Self {
        let scale = BigInt::one() << bits;
        let k = (self.clone() * Rational::from_integer(scale.clone())).floor();
        Rational::new(k, scale)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational(value)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational::from_integer(value)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(&self.0, rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(text: &str, original: &str) -> Result<BigInt, ParseRationalError> {
    let digits = text.strip_prefix(['+', '-']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::new(original));
    }
    BigInt::from_str(text).map_err(|_| ParseRationalError::new(original))
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let s = raw.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num = parse_int(num.trim(), raw)?;
            let den_text = den.trim();
            if den_text.starts_with(['+', '-']) {
                return Err(ParseRationalError::new(raw));
            }
            let den = parse_int(den_text, raw)?;
            if den.is_zero() {
                return Err(ParseRationalError::new(raw));
            }
            return Ok(Rational::new(num, den));
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let (negative, whole) = match whole.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, whole.strip_prefix('+').unwrap_or(whole)),
            };
            let digits_ok = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
            if (whole.is_empty() && frac.is_empty()) || !digits_ok(whole) || !digits_ok(frac) {
                return Err(ParseRationalError::new(raw));
            }
            let mantissa = format!("{whole}{frac}");
            let mantissa = BigInt::from_str(&mantissa).map_err(|_| ParseRationalError::new(raw))?;
            let scale = num_traits::pow(BigInt::from(10u8), frac.len());
            let value = Rational::new(mantissa, scale);
            return Ok(if negative { -value } else { value });
        }
        parse_int(s, raw).map(Rational::from_integer)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact comparison of `value` with `base^(−exponent)` for a positive
/// rational exponent `p/q`: the sign of `value^q · base^p − 1`.
pub fn cmp_inverse_power(value: &Rational, base: u64, exponent: &Rational) -> Ordering {
    assert!(exponent.is_positive(), "exponent must be positive");
    assert!(base >= 1, "base must be positive");
    if !value.is_positive() {
        return Ordering::Less;
    }
    let p = exponent
        .numer()
        .to_u32()
        .expect("exponent numerator too large");
    let q = exponent
        .denom()
        .to_u32()
        .expect("exponent denominator too large");
    let power = num_traits::Pow::pow(BigInt::from(base), p);
    let lhs = num_traits::Pow::pow(value.as_big(), q) * BigRational::from_integer(power);
    lhs.cmp(&BigRational::one())
}

/// Whether `value ≥ base^(−exponent)`, decided exactly.
pub fn at_least_inverse_power(value: &Rational, base: u64, exponent: &Rational) -> bool {
    cmp_inverse_power(value, base, exponent) != Ordering::Less
}

/// Sign of a rational as an [`Ordering`] against zero.
pub fn signum(value: &Rational) -> Ordering {
    match value.0.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}
