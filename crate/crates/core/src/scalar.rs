//! Exact rational scalars with a tagged floating-point fallback.
//!
//! Every invariant value computed at integer exponents is an exact
//! [`BigRational`]. As soon as an exponent is non-integral the value is
//! carried as an `f64` and tagged [`ExactScalar::Approx`]; mixing the two
//! forms in arithmetic yields the approximate form.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Absolute margin used for every comparison made in approximate mode.
pub const APPROX_MARGIN: f64 = 1e-9;

/// Sign of a value; serialized as `neg` / `zero` / `pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "neg")]
    Negative,
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "pos")]
    Positive,
}

impl Sign {
    pub fn of_ordering(ord: Ordering) -> Self {
        match ord {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "neg",
            Sign::Zero => "zero",
            Sign::Positive => "pos",
        })
    }
}

/// Whether a value (or a verdict derived from it) is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approximate,
}

#[derive(Clone, Debug)]
pub enum ExactScalar {
    /// Always kept in lowest terms with a positive denominator.
    Rational(BigRational),
    Approx(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar from {0:?}")]
pub struct ParseScalarError(pub String);

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar::Rational(BigRational::one())
    }

    pub fn from_integer(v: i64) -> Self {
        ExactScalar::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        ExactScalar::Rational(BigRational::from_integer(v))
    }

    /// Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExactScalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn approx(v: f64) -> Self {
        ExactScalar::Approx(v)
    }

    pub fn mode(&self) -> Mode {
        match self {
            ExactScalar::Rational(_) => Mode::Exact,
            ExactScalar::Approx(_) => Mode::Approximate,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ExactScalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactScalar::Rational(q) => Some(q),
            ExactScalar::Approx(_) => None,
        }
    }

    /// The value as a machine integer, when it is an exact integer that fits
    /// in `i32` (the exponent range supported by exact powers).
    pub fn as_integer(&self) -> Option<i32> {
        match self {
            ExactScalar::Rational(q) if q.is_integer() => q.to_integer().to_i32(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactScalar::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            ExactScalar::Approx(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rational(q) => q.is_zero(),
            ExactScalar::Approx(v) => *v == 0.0,
        }
    }

    /// Exact sign for rationals; for approximations values within
    /// [`APPROX_MARGIN`] of zero count as zero.
    pub fn sign(&self) -> Sign {
        self.sign_with_margin(APPROX_MARGIN)
    }

    pub fn sign_with_margin(&self, margin: f64) -> Sign {
        match self {
            ExactScalar::Rational(q) => Sign::of_ordering(q.cmp(&BigRational::zero())),
            ExactScalar::Approx(v) => {
                if v.abs() <= margin {
                    Sign::Zero
                } else if *v > 0.0 {
                    Sign::Positive
                } else {
                    Sign::Negative
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            ExactScalar::Rational(q) => ExactScalar::Rational(q.abs()),
            ExactScalar::Approx(v) => ExactScalar::Approx(v.abs()),
        }
    }

    /// `base^exp` for an integer exponent, exact.
    pub fn int_pow(base: u64, exp: i32) -> BigRational {
        let b = BigInt::from(base);
        if exp >= 0 {
            BigRational::from_integer(num_traits::pow(b, exp as usize))
        } else {
            BigRational::from_integer(num_traits::pow(b, exp.unsigned_abs() as usize)).recip()
        }
    }

    /// Exact comparison when both sides are rational; otherwise compares the
    /// floats with [`APPROX_MARGIN`].
    pub fn compare(&self, other: &ExactScalar) -> Ordering {
        match (self, other) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => a.cmp(b),
            _ => {
                let d = self.to_f64() - other.to_f64();
                if d.abs() <= APPROX_MARGIN {
                    Ordering::Equal
                } else if d > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        ExactScalar::zero()
    }
}

impl PartialEq for ExactScalar {
    /// Structural equality: an exact value never equals an approximation.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => a == b,
            (ExactScalar::Approx(a), ExactScalar::Approx(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl From<BigRational> for ExactScalar {
    fn from(q: BigRational) -> Self {
        ExactScalar::Rational(q)
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::from_integer(v)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            ExactScalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            ExactScalar::Approx(v) => write!(f, "~{v}"),
        }
    }
}

impl FromStr for ExactScalar {
    type Err = ParseScalarError;

    /// Accepts `p`, `p/q`, and decimal literals. Decimals with a fractional
    /// part become approximations; `p/q` stays exact.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseScalarError(s.to_string());
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            return Ok(ExactScalar::Rational(BigRational::new(p, q)));
        }
        if let Some(rest) = t.strip_prefix('~') {
            return rest.parse::<f64>().map(ExactScalar::Approx).map_err(|_| err());
        }
        if let Ok(i) = t.parse::<BigInt>() {
            return Ok(ExactScalar::from_bigint(i));
        }
        let v: f64 = t.parse().map_err(|_| err())?;
        if !v.is_finite() {
            return Err(err());
        }
        if v.fract() == 0.0 && v.abs() < 1e15 {
            return Ok(ExactScalar::from_integer(v as i64));
        }
        Ok(ExactScalar::Approx(v))
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExactScalar::Rational(q) => {
                serializer.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
            }
            ExactScalar::Approx(v) => serializer.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Float(f64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Float(v) => Ok(ExactScalar::Approx(v)),
        }
    }
}

fn combine(
    a: &ExactScalar,
    b: &ExactScalar,
    exact: impl Fn(&BigRational, &BigRational) -> BigRational,
    approx: impl Fn(f64, f64) -> f64,
) -> ExactScalar {
    match (a, b) {
        (ExactScalar::Rational(x), ExactScalar::Rational(y)) => ExactScalar::Rational(exact(x, y)),
        _ => ExactScalar::Approx(approx(a.to_f64(), b.to_f64())),
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                combine(self, rhs, |x, y| x $op y, |x, y| x $op y)
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                &self $op &rhs
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                &self $op rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        match self {
            ExactScalar::Rational(q) => ExactScalar::Rational(-q),
            ExactScalar::Approx(v) => ExactScalar::Approx(-v),
        }
    }
}

impl Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("3".parse::<ExactScalar>().unwrap(), ExactScalar::from_integer(3));
        assert_eq!("-2/4".parse::<ExactScalar>().unwrap(), ExactScalar::from_ratio(-1, 2));
        assert_eq!("2.0".parse::<ExactScalar>().unwrap(), ExactScalar::from_integer(2));
        assert_eq!("0.5".parse::<ExactScalar>().unwrap(), ExactScalar::Approx(0.5));
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("abc".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn serde_uses_p_over_q() {
        let v = ExactScalar::from_ratio(-8, 1);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "\"-8/1\"");
        let back: ExactScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let a = ExactScalar::Approx(0.1 + 0.2);
        let back: ExactScalar = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn mixing_degrades_to_approx() {
        let e = ExactScalar::from_ratio(1, 3) + ExactScalar::Approx(1.0);
        assert!(!e.is_exact());
        assert!((e.to_f64() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn integer_detection() {
        assert_eq!(ExactScalar::from_ratio(6, 3).as_integer(), Some(2));
        assert_eq!(ExactScalar::from_ratio(1, 2).as_integer(), None);
        assert_eq!(ExactScalar::Approx(1.0).as_integer(), None);
    }

    #[test]
    fn negative_powers() {
        assert_eq!(ExactScalar::int_pow(2, -3), BigRational::new(1.into(), 8.into()));
        assert_eq!(ExactScalar::int_pow(7, 0), BigRational::one());
    }
}
