//! High-precision reals with an explicit decimal working precision.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::arith::Rat;
use crate::error::{Error, Result};

/// Extra binary digits carried beyond the requested decimal precision.
pub const GUARD_BITS: u32 = 64;

/// Binary precision for `digits` decimal digits plus guard bits.
pub fn bits_for(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// A real number carried at `digits` decimal digits.
///
/// Combining values of different precision yields the smaller precision and
/// sets `reduced`, which reports surface.
#[derive(Clone, Debug, PartialEq)]
pub struct RealHP {
    value: Float,
    digits: u32,
    reduced: bool,
}

impl RealHP {
    pub fn new(value: Float, digits: u32) -> Self {
        let mut value = value;
        value.set_prec(bits_for(digits));
        Self {
            value,
            digits,
            reduced: false,
        }
    }

    pub fn zero(digits: u32) -> Self {
        Self::new(Float::new(bits_for(digits)), digits)
    }

    pub fn from_rat(r: &Rat, digits: u32) -> Self {
        Self::new(Float::with_val(bits_for(digits), r), digits)
    }

    pub fn from_f64(x: f64, digits: u32) -> Self {
        Self::new(Float::with_val(bits_for(digits), x), digits)
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        bits_for(self.digits)
    }

    pub fn precision_reduced(&self) -> bool {
        self.reduced
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn abs(&self) -> Self {
        Self {
            value: self.value.clone().abs(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Decimal string with `digits` significant digits.
    pub fn to_decimal(&self) -> String {
        format_float(&self.value, self.digits as usize)
    }

    pub fn parse(s: &str, digits: u32) -> Result<Self> {
        let parsed = Float::parse(s).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        Ok(Self::new(Float::with_val(bits_for(digits), parsed), digits))
    }

    fn combine(&self, other: &Self, value: Float) -> Self {
        let digits = self.digits.min(other.digits);
        let mut value = value;
        value.set_prec_round(bits_for(digits), Round::Nearest);
        Self {
            value,
            digits,
            reduced: self.reduced || other.reduced || self.digits != other.digits,
        }
    }
}

/// Scientific-notation decimal rendering with `digits` significant digits.
pub fn format_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(2)))
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&RealHP> for &RealHP {
            type Output = RealHP;
            fn $method(self, rhs: &RealHP) -> RealHP {
                let prec = self.value.prec().max(rhs.value.prec());
                let v = Float::with_val(prec, &self.value $op &rhs.value);
                self.combine(rhs, v)
            }
        }
        impl $tr<RealHP> for RealHP {
            type Output = RealHP;
            fn $method(self, rhs: RealHP) -> RealHP {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for &RealHP {
    type Output = RealHP;
    fn neg(self) -> RealHP {
        RealHP {
            value: Float::with_val(self.value.prec(), -&self.value),
            ..self.clone()
        }
    }
}

impl fmt::Display for RealHP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

#[derive(Serialize, Deserialize)]
struct RealJson {
    value: String,
    digits: u32,
}

impl Serialize for RealHP {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RealJson {
            value: self.to_decimal(),
            digits: self.digits,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealHP {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RealJson::deserialize(d)?;
        RealHP::parse(&raw.value, raw.digits).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn mixing_takes_minimum() {
        let a = RealHP::from_rat(&Rational::from((1, 3)), 60);
        let b = RealHP::from_rat(&Rational::from((1, 7)), 30);
        let c = &a + &b;
        assert_eq!(c.digits(), 30);
        assert!(c.precision_reduced());
        assert!(!(&a * &a).precision_reduced());
    }

    #[test]
    fn decimal_round_trip() {
        let a = RealHP::from_rat(&Rational::from((-51051, 22112)), 40);
        let s = a.to_decimal();
        assert!(s.starts_with("-2.30874638205499276"), "{s}");
        let back: RealHP = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back.to_decimal(), s);
        assert_eq!(
            serde_json::to_string(&back).unwrap(),
            serde_json::to_string(&a).unwrap()
        );
    }
}
