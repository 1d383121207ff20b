//! Exact scalar helpers on top of GMP integers and rationals.

use rug::{Complete, Integer, Rational};

use crate::error::{Error, Result};

pub type Int = Integer;
pub type Rat = Rational;

/// Formats a rational as `"num/den"`, always including the denominator.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n = n
                .parse::<Integer>()
                .map_err(|e| Error::Parse(format!("{s}: {e}")))?;
            let d = d
                .parse::<Integer>()
                .map_err(|e| Error::Parse(format!("{s}: {e}")))?;
            if d == 0 {
                return Err(Error::Parse(format!("{s}: zero denominator")));
            }
            Rational::from((n, d))
        }
        None => Rational::from(
            s.parse::<Integer>()
                .map_err(|e| Error::Parse(format!("{s}: {e}")))?,
        ),
    };
    Ok(parsed)
}

pub fn factorial(n: u32) -> Int {
    Integer::factorial(n).complete()
}

pub fn binomial(n: u32, k: u32) -> Int {
    if k > n {
        return Integer::new();
    }
    Integer::binomial_u(n, k).complete()
}

/// Rising factorial `a (a+1) ⋯ (a+j-1)`; empty product for `j = 0`.
pub fn rising(a: &Rat, j: u32) -> Rat {
    let mut acc = Rational::from(1);
    let mut term = a.clone();
    for _ in 0..j {
        acc *= &term;
        term += 1u32;
    }
    acc
}

/// `(-1)^e` for a signed exponent.
pub fn sign_pow(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Integer square root of a non-negative u64, exact.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    let square_exceeds = |r: u64| r.checked_mul(r).is_none_or(|sq| sq > n);
    while square_exceeds(r) {
        r -= 1;
    }
    while !square_exceeds(r + 1) {
        r += 1;
    }
    r
}

/// Least common multiple of the denominators of `xs` (1 for an empty slice).
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> Int {
    let mut l = Integer::from(1);
    for x in xs {
        if *x.denom() != 1 {
            l.lcm_mut(x.denom());
        }
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        let r = parse_rat("-6/4").unwrap();
        assert_eq!(rat_to_string(&r), "-3/2");
        assert_eq!(rat_to_string(&parse_rat("7").unwrap()), "7/1");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x/2").is_err());
    }

    #[test]
    fn rising_factorials() {
        assert_eq!(rising(&Rational::from((5, 2)), 0), 1);
        // (5/2)(7/2) = 35/4
        assert_eq!(rising(&Rational::from((5, 2)), 2), Rational::from((35, 4)));
        // (-3/2)(-1/2)(1/2) = 3/8
        assert_eq!(rising(&Rational::from((-3, 2)), 3), Rational::from((3, 8)));
    }

    #[test]
    fn integer_sqrt() {
        for n in 0..2000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), 4294967295);
    }
}
