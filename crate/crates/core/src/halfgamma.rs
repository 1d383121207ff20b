//! Exact products and quotients of Γ at integer and half-integer arguments.
//!
//! `Γ(n)` is `(n-1)!` and `Γ(n + 1/2)` is a rational multiple of `√π`, so any
//! such ratio equals a rational times a power of `√π`. [`HalfGammaRatio`]
//! tracks that power and only hands back a plain rational when it cancels.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::arith::{factorial, Rat};
use crate::error::{Error, Result};

/// A rational number times an integer power of π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiRat {
    pub r: Rat,
    pub pi_power: i32,
}

impl PiRat {
    pub fn new(r: Rat, pi_power: i32) -> Self {
        Self { r, pi_power }
    }

    pub fn rational(r: Rat) -> Self {
        Self { r, pi_power: 0 }
    }

    pub fn mul(&self, other: &PiRat) -> PiRat {
        PiRat {
            r: Rational::from(&self.r * &other.r),
            pi_power: self.pi_power + other.pi_power,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0
    }

    /// Numeric value at `bits` of working precision.
    pub fn to_float(&self, bits: u32) -> Float {
        let pi = Float::with_val(bits, rug::float::Constant::Pi);
        let mut x = Float::with_val(bits, &self.r);
        if self.pi_power != 0 {
            x *= pi.pow(self.pi_power);
        }
        x
    }
}

/// `Γ(a/2)` for integer `a`, as (rational part, whether a `√π` factor is present).
pub fn gamma_half(twice_arg: i64) -> Result<(Rat, bool)> {
    if twice_arg % 2 == 0 {
        let n = twice_arg / 2;
        if n <= 0 {
            return Err(Error::Domain(format!("Γ has a pole at {n}")));
        }
        return Ok((Rational::from(factorial((n - 1) as u32)), false));
    }
    // twice_arg = 2n + 1, argument n + 1/2
    let n = (twice_arg - 1).div_euclid(2);
    let r = if n >= 0 {
        let n = n as u32;
        Rational::from((factorial(2 * n), Integer::from(4u32).pow(n) * factorial(n)))
    } else {
        let m = (-n) as u32;
        Rational::from((Integer::from(-4).pow(m) * factorial(m), factorial(2 * m)))
    };
    Ok((r, true))
}

/// `Γ(a)` for a half-integer or integer rational `a`.
pub fn gamma_of(a: &Rat) -> Result<(Rat, bool)> {
    let twice = Rational::from(a * 2u32);
    if *twice.denom() != 1 {
        return Err(Error::InvalidParameter(format!(
            "Γ({a}) is not at a half-integer"
        )));
    }
    let twice = twice
        .numer()
        .to_i64()
        .ok_or_else(|| Error::InvalidParameter(format!("Γ argument {a} out of range")))?;
    gamma_half(twice)
}

#[derive(Clone, Debug, Default)]
pub struct HalfGammaRatio {
    num: Vec<i64>,
    den: Vec<i64>,
    scalar: Option<Rat>,
}

impl HalfGammaRatio {
    pub fn new() -> Self {
        Self::default()
    }

    /// Multiplies by `Γ(twice_arg / 2)`.
    pub fn num(mut self, twice_arg: i64) -> Self {
        self.num.push(twice_arg);
        self
    }

    /// Divides by `Γ(twice_arg / 2)`.
    pub fn den(mut self, twice_arg: i64) -> Self {
        self.den.push(twice_arg);
        self
    }

    pub fn times(mut self, r: Rat) -> Self {
        self.scalar = Some(match self.scalar {
            Some(s) => s * r,
            None => r,
        });
        self
    }

    fn sqrt_pi_power(&self) -> i32 {
        let odd = |xs: &[i64]| xs.iter().filter(|a| *a % 2 != 0).count() as i32;
        odd(&self.num) - odd(&self.den)
    }

    /// Reduces to `r · π^e`; fails if an odd power of `√π` survives.
    pub fn reduce_with_pi(&self) -> Result<PiRat> {
        let h = self.sqrt_pi_power();
        if h % 2 != 0 {
            return Err(Error::Domain(format!("Γ ratio leaves √π^{h}")));
        }
        let mut r = self.scalar.clone().unwrap_or_else(|| Rational::from(1));
        for &a in &self.num {
            r *= gamma_half(a)?.0;
        }
        for &a in &self.den {
            let (g, _) = gamma_half(a)?;
            r /= g;
        }
        Ok(PiRat { r, pi_power: h / 2 })
    }

    /// Reduces to an exact rational; fails loudly if any `√π` survives.
    pub fn reduce(&self) -> Result<Rat> {
        let h = self.sqrt_pi_power();
        if h != 0 {
            return Err(Error::Domain(format!(
                "Γ ratio is not rational: √π^{h} remains"
            )));
        }
        Ok(self.reduce_with_pi()?.r)
    }
}
