//! Exact scalar type used for filtration values, measures and weights.
//!
//! Values are arbitrary-precision rationals. Decimal literals from input
//! files are parsed exactly (`0.45` becomes `9/20`), so sweep thresholds
//! and stability comparisons never suffer binary rounding.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational scalar.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Value(BigRational);

impl Value {
    pub fn zero() -> Self {
        Value(BigRational::zero())
    }

    pub fn one() -> Self {
        Value(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Value(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Value(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(r: BigRational) -> Self {
        Value(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Value {
        Value(self.0.abs())
    }

    pub fn min(self, other: Value) -> Value {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Value) -> Value {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn recip(&self) -> Value {
        assert!(!self.is_zero(), "reciprocal of zero");
        Value(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Parses an exact scalar: an optionally signed integer, decimal
    /// (`-1.25`), or fraction (`3/7`).
    pub fn parse(s: &str) -> Result<Value, ValueParseError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ValueParseError(s.to_string()));
        }
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.parse().map_err(|_| ValueParseError(s.to_string()))?;
            let den: BigInt = den.parse().map_err(|_| ValueParseError(s.to_string()))?;
            if den.is_zero() {
                return Err(ValueParseError(s.to_string()));
            }
            return Ok(Value(BigRational::new(num, den)));
        }
        let (sign, body) = match s.as_bytes()[0] {
            b'-' => (-1, &s[1..]),
            b'+' => (1, &s[1..]),
            _ => (1, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(ValueParseError(s.to_string()));
        }
        let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
        if !digits_ok(int_part) || !digits_ok(frac_part) {
            return Err(ValueParseError(s.to_string()));
        }
        let mut num: BigInt = if int_part.is_empty() {
            BigInt::zero()
        } else {
            int_part.parse().unwrap()
        };
        let mut den = BigInt::one();
        for b in frac_part.bytes() {
            num = num * 10 + (b - b'0');
            den *= 10;
        }
        if sign < 0 {
            num = -num;
        }
        Ok(Value(BigRational::new(num, den)))
    }

    /// Rounds to `digits` decimal places (half away from zero). Used when an
    /// irrational quantity (a Euclidean distance) has to be pinned to an
    /// exact value.
    pub fn round_decimals(&self, digits: u32) -> Value {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        // round half away from zero on the magnitude
        let num = scaled.numer();
        let den = scaled.denom();
        let q = (BigUint::from(2u32) * num.magnitude() + den.magnitude())
            .div_floor(&(BigUint::from(2u32) * den.magnitude()));
        let q = BigInt::from_biguint(
            if num.is_negative() { Sign::Minus } else { Sign::Plus },
            q,
        );
        Value(BigRational::new(q, scale))
    }

    /// `sqrt` of a nonnegative value, rounded to `digits` decimal places.
    pub fn sqrt_round(&self, digits: u32) -> Value {
        assert!(!self.is_negative(), "sqrt of negative value");
        if self.is_zero() {
            return Value::zero();
        }
        let scale = BigUint::from(10u32).pow(digits);
        // floor(sqrt(n/d * 10^(2*digits)))
        let num = self.0.numer().magnitude() * &scale * &scale;
        let den = self.0.denom().magnitude();
        let mut root = (num.clone() / den.clone()).sqrt();
        // nudge to nearest: compare (root + 1/2)^2 * den with num
        let r2 = BigUint::from(2u32) * &root + BigUint::from(1u32);
        if &r2 * &r2 * den.clone() <= BigUint::from(4u32) * &num {
            root += BigUint::from(1u32);
        }
        Value(BigRational::new(
            BigInt::from_biguint(Sign::Plus, root),
            BigInt::from_biguint(Sign::Plus, scale),
        ))
    }
}

impl fmt::Display for Value {
    /// Prints as an exact decimal when the denominator is of the form
    /// 2^a·5^b, otherwise as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.0.numer();
        let den = self.0.denom();
        let mut d = den.magnitude().clone();
        let mut twos = 0u32;
        let mut fives = 0u32;
        let two = BigUint::from(2u32);
        let five = BigUint::from(5u32);
        while (&d % &two).is_zero() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        if !d.is_one() {
            return write!(f, "{}/{}", num, den);
        }
        let shift = twos.max(fives);
        if shift == 0 {
            return write!(f, "{}", num);
        }
        // numerator * (10^shift / den) is an integer
        let pow10 = BigUint::from(10u32).pow(shift);
        let factor = &pow10 / den.magnitude();
        let scaled = num.magnitude() * factor;
        let s = scaled.to_string();
        let sign = if num.is_negative() { "-" } else { "" };
        let digits = shift as usize;
        let (int_part, frac_part) = if s.len() > digits {
            (s[..s.len() - digits].to_string(), s[s.len() - digits..].to_string())
        } else {
            (String::from("0"), alloc::format!("{:0>width$}", s, width = digits))
        };
        let frac_trimmed = frac_part.trim_end_matches('0');
        if frac_trimmed.is_empty() {
            write!(f, "{}{}", sign, int_part)
        } else {
            write!(f, "{}{}.{}", sign, int_part, frac_trimmed)
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueParseError(pub String);

impl fmt::Display for ValueParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid numeric literal `{}`", self.0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Value {
            type Output = Value;
            fn $method(self, rhs: Value) -> Value {
                Value((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Value> for &'a Value {
            type Output = Value;
            fn $method(self, rhs: &'a Value) -> Value {
                Value((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(-self.0)
    }
}

impl<'a> Neg for &'a Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(-&self.0)
    }
}

/// Compares two values, total order.
pub fn cmp_values(a: &Value, b: &Value) -> Ordering {
    a.cmp(b)
}
