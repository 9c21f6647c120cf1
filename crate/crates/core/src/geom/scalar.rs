use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Number type the geometry is generic over.
///
/// Two kinds are provided: [`ExactScalar`] (arbitrary-precision rationals,
/// every operation exact) and `f64` (for transcendental rotations).
/// Arithmetic is by value; exact values are cloned where needed.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact, so equality tests are literal.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Largest integer not exceeding the value.
    fn floor_i64(&self) -> i64;
    /// Sign as -1, 0 or 1.
    fn sign(&self) -> i32;
    /// Size of the representation in bits; zero for floats.
    fn bit_length(&self) -> u64 {
        0
    }
    /// Literal equality for exact scalars, absolute tolerance otherwise.
    fn close(&self, other: &Self, tol: f64) -> bool;

    fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn floor_i64(&self) -> i64 {
        self.floor() as i64
    }
    fn sign(&self) -> i32 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
    fn close(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
}

/// Arbitrary-precision rational (GMP), always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactScalar(Rational);

impl ExactScalar {
    /// Builds `num/den`. Panics when `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        ExactScalar(Rational::from((num, den)))
    }

    pub fn from_integer(v: i64) -> Self {
        ExactScalar(Rational::from(v))
    }

    pub fn from_big(num: Integer, den: Integer) -> Self {
        ExactScalar(Rational::from((num, den)))
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    /// Max of the numerator and denominator bit sizes.
    pub fn bit_length(&self) -> u64 {
        u64::from(self.0.numer().significant_bits().max(self.0.denom().significant_bits()))
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    pub fn floor(&self) -> Integer {
        Rational::from(self.0.floor_ref()).into_numer_denom().0
    }

    pub fn recip(&self) -> Self {
        ExactScalar(Rational::from(self.0.recip_ref()))
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::from_integer(v)
    }
}

impl From<Rational> for ExactScalar {
    fn from(v: Rational) -> Self {
        ExactScalar(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'a ExactScalar) -> ExactScalar {
                ExactScalar(Rational::from((&self.0).$method(&rhs.0)))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl Scalar for ExactScalar {
    const EXACT: bool = true;

    fn zero() -> Self {
        ExactScalar(Rational::new())
    }
    fn one() -> Self {
        ExactScalar(Rational::from(1))
    }
    fn from_i64(v: i64) -> Self {
        ExactScalar::from_integer(v)
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn floor_i64(&self) -> i64 {
        self.floor()
            .to_i64()
            .expect("grid coordinate exceeds the i64 range")
    }
    fn sign(&self) -> i32 {
        match self.0.cmp0() {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    }
    fn bit_length(&self) -> u64 {
        ExactScalar::bit_length(self)
    }
    fn close(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}: expected \"p\" or \"p/q\" with q != 0")]
pub struct ParseRationalError(pub String);

impl FromStr for ExactScalar {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: Integer = num.parse().map_err(|_| err())?;
        let den: Integer = den.parse().map_err(|_| err())?;
        if den == 0 {
            return Err(err());
        }
        Ok(ExactScalar::from_big(num, den))
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
