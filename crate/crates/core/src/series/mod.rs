//! Truncated formal power series with exact rational coefficients.
//!
//! A [`TruncSeries`] of order `N` stores exactly the coefficients of
//! `q^0, …, q^N`. Binary operations require equal orders; narrowing is only
//! ever done explicitly through [`TruncSeries::truncate`].

pub mod kernel;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::{denominator_lcm, isqrt, parse_rat, rat_to_string, sign_pow, Int, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<Rat>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::from(1), order)
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series whose order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "a series needs at least one coefficient".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn from_integers(coeffs: Vec<Int>) -> Result<Self> {
        Self::from_coeffs(coeffs.into_iter().map(Rational::from).collect())
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rat) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`; `None` above the truncation order.
    pub fn coeff(&self, n: usize) -> Option<&Rat> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| *c.denom() == 1)
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn to_integers(&self) -> Option<Vec<Int>> {
        self.is_integral()
            .then(|| self.coeffs.iter().map(|c| c.numer().clone()).collect())
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.iter().filter(|c| **c != 0).count()
    }

    /// Explicitly narrows to a lower order.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::Truncation {
                needed: order,
                have: self.order(),
            });
        }
        Ok(Self {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| Rational::from(a + b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| Rational::from(a - b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| Rational::from(-a)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| Rational::from(a * c)).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(mul_truncated(
            &self.coeffs,
            &other.coeffs,
            self.coeffs.len(),
        ))
    }

    /// Multiplicative inverse modulo `q^(N+1)`.
    pub fn invert(&self) -> Result<Self> {
        if self.coeffs[0] == 0 {
            return Err(Error::NotInvertible);
        }
        let len = self.coeffs.len();
        // Sparse inputs (the Euler product) invert fastest by the direct recurrence.
        if len <= 64 || self.nnz() as u64 <= 4 * isqrt(len as u64) + 16 {
            Ok(self.invert_recurrence())
        } else {
            Ok(self.invert_newton())
        }
    }

    /// `b_n = -(1/a_0) Σ_{k≥1} a_k b_{n-k}`, skipping zero `a_k`.
    pub(crate) fn invert_recurrence(&self) -> Self {
        let len = self.coeffs.len();
        let nz: Vec<(usize, &Rat)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| **c != 0)
            .collect();
        let a0_inv = Rational::from(self.coeffs[0].recip_ref());

        if let Some(ints) = self.to_integers() {
            if ints[0] == 1 || ints[0] == -1 {
                let unit = ints[0].clone();
                let mut b: Vec<Integer> = Vec::with_capacity(len);
                b.push(unit.clone());
                for n in 1..len {
                    let mut acc = Integer::new();
                    for &(k, _) in &nz {
                        if k > n {
                            break;
                        }
                        acc += &ints[k] * &b[n - k];
                    }
                    b.push(-(acc * &unit));
                }
                return Self {
                    coeffs: b.into_iter().map(Rational::from).collect(),
                };
            }
        }

        let mut b: Vec<Rat> = Vec::with_capacity(len);
        b.push(a0_inv.clone());
        for n in 1..len {
            let mut acc = Rational::new();
            for &(k, a) in &nz {
                if k > n {
                    break;
                }
                acc += Rational::from(a * &b[n - k]);
            }
            b.push(-(acc * &a0_inv));
        }
        Self { coeffs: b }
    }

    /// Newton iteration `b ← b (2 - a b)`, doubling the correct length each step.
    pub(crate) fn invert_newton(&self) -> Self {
        let len = self.coeffs.len();
        let mut b = vec![Rational::from(self.coeffs[0].recip_ref())];
        let mut have = 1usize;
        while have < len {
            let next = (2 * have).min(len);
            let ab = mul_truncated(&self.coeffs[..next], &b, next);
            let mut e = ab.coeffs;
            for c in e.iter_mut() {
                *c = Rational::from(-&*c);
            }
            e[0] += 2u32;
            b = mul_truncated(&b, &e, next).coeffs;
            have = next;
        }
        Self { coeffs: b }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same order");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same order");
            }
        }
        result
    }

    /// Substitutes `q ↦ q^t`, keeping the order.
    pub fn dilate(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter(
                "dilation factor must be positive".into(),
            ));
        }
        let mut out = Self::zero(self.order());
        for (n, c) in self.coeffs.iter().enumerate() {
            match n.checked_mul(t) {
                Some(m) if m <= self.order() => out.coeffs[m] = c.clone(),
                _ => break,
            }
        }
        Ok(out)
    }

    /// Multiplies by `q^k`, dropping what falls above the order.
    pub fn shift(&self, k: usize) -> Self {
        let mut out = Self::zero(self.order());
        for n in k..=self.order() {
            out.coeffs[n] = self.coeffs[n - k].clone();
        }
        out
    }

    /// The operator `q d/dq`.
    pub fn theta(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| Rational::from(c * n as u64))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// First index where `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Result<Option<usize>> {
        self.check_order(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b))
    }
}

/// Rational product through a common-denominator integer convolution.
fn mul_truncated(a: &[Rat], b: &[Rat], len: usize) -> TruncSeries {
    let da = denominator_lcm(a);
    let db = denominator_lcm(b);
    let ia: Vec<Integer> = a.iter().map(|x| scaled_numerator(x, &da)).collect();
    let ib: Vec<Integer> = b.iter().map(|x| scaled_numerator(x, &db)).collect();
    let prod = kernel::convolve(&ia, &ib, len);
    let denom = Integer::from(&da * &db);
    let coeffs = if denom == 1 {
        prod.into_iter().map(Rational::from).collect()
    } else {
        prod.into_iter()
            .map(|c| Rational::from((c, denom.clone())))
            .collect()
    };
    TruncSeries { coeffs }
}

fn scaled_numerator(x: &Rat, lcm: &Integer) -> Integer {
    if *x.denom() == *lcm {
        x.numer().clone()
    } else {
        Integer::from(lcm / x.denom()) * x.numer()
    }
}

/// `w_j = (3j² + j)/2`, defined for every integer `j`.
pub fn pentagonal(j: i64) -> u64 {
    let j = j as i128;
    ((3 * j * j + j) / 2) as u64
}

/// `T_k = (k² + k)/2`.
pub fn triangular(k: u64) -> u64 {
    k * (k + 1) / 2
}

/// `(q;q)_∞ = Σ_{k∈ℤ} (-1)^k q^{w_k}` truncated at `order`.
pub fn euler_product(order: usize) -> TruncSeries {
    let mut s = TruncSeries::zero(order);
    let order = order as u64;
    s.coeffs[0] = Rational::from(1);
    for k in 1i64.. {
        let lo = pentagonal(-k);
        if lo > order {
            break;
        }
        let sign = sign_pow(k);
        s.coeffs[lo as usize] = Rational::from(sign);
        let hi = pentagonal(k);
        if hi <= order {
            s.coeffs[hi as usize] = Rational::from(sign);
        }
    }
    s
}

/// `(q;q)_∞^3 = Σ_{k≥0} (-1)^k (2k+1) q^{T_k}` truncated at `order`.
pub fn triple_product(order: usize) -> TruncSeries {
    let mut s = TruncSeries::zero(order);
    for k in 0u64.. {
        let t = triangular(k);
        if t > order as u64 {
            break;
        }
        s.coeffs[t as usize] = Rational::from(sign_pow(k as i64) as i64 * (2 * k as i64 + 1));
    }
    s
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for TruncSeries {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            order: self.order(),
            coeffs: self.coeffs.iter().map(rat_to_string).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TruncSeries {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SeriesJson::deserialize(de)?;
        if raw.coeffs.len() != raw.order + 1 {
            return Err(D::Error::custom(format!(
                "order {} needs {} coefficients, found {}",
                raw.order,
                raw.order + 1,
                raw.coeffs.len()
            )));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(TruncSeries { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(v: &[i64]) -> TruncSeries {
        TruncSeries::from_coeffs(v.iter().map(|&x| Rational::from(x)).collect()).unwrap()
    }

    /// Π_{n=1..N} (1 - q^n), one factor at a time.
    fn finite_euler_product(order: usize) -> TruncSeries {
        let mut c = vec![Integer::new(); order + 1];
        c[0] = Integer::from(1);
        for n in 1..=order {
            for m in (n..=order).rev() {
                let prev = c[m - n].clone();
                c[m] -= prev;
            }
        }
        TruncSeries::from_integers(c).unwrap()
    }

    #[test]
    fn telescoping_product() {
        let a = series(&[1, 1, 0, 0]);
        let b = series(&[1, -1, 0, 0]);
        assert_eq!(a.mul(&b).unwrap(), series(&[1, 0, -1, 0]));
    }

    #[test]
    fn identity_and_mismatch() {
        let a = series(&[3, -1, 4, 1, -5]);
        assert_eq!(a.mul(&TruncSeries::one(4)).unwrap(), a);
        assert_eq!(
            a.mul(&TruncSeries::one(3)),
            Err(Error::OrderMismatch { left: 4, right: 3 })
        );
        assert!(a.add(&TruncSeries::one(5)).is_err());
    }

    #[test]
    fn geometric_inverse() {
        let inv = series(&[1, -1, 0, 0, 0]).invert().unwrap();
        assert_eq!(inv, series(&[1, 1, 1, 1, 1]));
        assert_eq!(TruncSeries::zero(3).invert(), Err(Error::NotInvertible));
        let half = TruncSeries::constant(Rational::from(2), 2)
            .invert()
            .unwrap();
        assert_eq!(half, TruncSeries::constant(Rational::from((1, 2)), 2));
    }

    #[test]
    fn partitions_of_five() {
        // p(5) = 7: 5, 4+1, 3+2, 3+1+1, 2+2+1, 2+1+1+1, 1+1+1+1+1
        let inv = euler_product(10).invert().unwrap();
        assert_eq!(*inv.coeff(5).unwrap(), 7);
    }

    #[test]
    fn euler_product_small() {
        assert_eq!(euler_product(7), series(&[1, -1, -1, 0, 0, 1, 0, 1]));
        assert_eq!(*euler_product(0).coeff(0).unwrap(), 1);
    }

    #[test]
    fn euler_product_matches_finite_product() {
        for order in [0, 1, 5, 26, 100, 200] {
            assert_eq!(
                euler_product(order),
                finite_euler_product(order),
                "order {order}"
            );
        }
    }

    #[test]
    fn triple_product_small() {
        assert_eq!(triple_product(6), series(&[1, -3, 0, 5, 0, 0, -7]));
    }

    #[test]
    fn triple_product_is_cube_of_euler() {
        for order in [0, 3, 50, 200] {
            let e = euler_product(order);
            assert_eq!(triple_product(order), e.mul(&e).unwrap().mul(&e).unwrap());
        }
    }

    #[test]
    fn triple_product_kronecker_symbol_form() {
        // coefficient of q^((n²-1)/8) is (-4/n)·n for odd n
        let s = triple_product(200);
        for n in (1u64..40).step_by(2) {
            let e = ((n * n - 1) / 8) as usize;
            let chi = if n % 4 == 1 { 1 } else { -1 };
            assert_eq!(*s.coeff(e).unwrap(), chi * n as i64);
        }
        assert_eq!(*s.coeff(1).unwrap(), -3);
        assert_eq!(*s.coeff(3).unwrap(), 5);
    }

    #[test]
    fn figurate_numbers() {
        assert_eq!(
            [pentagonal(1), pentagonal(-1), pentagonal(2), pentagonal(-2)],
            [2, 1, 7, 5]
        );
        assert_eq!([triangular(1), triangular(2), triangular(3)], [1, 3, 6]);
        assert_eq!((pentagonal(0), triangular(0)), (0, 0));
    }

    #[test]
    fn euler_inverse_two_sided_large() {
        let e = euler_product(50);
        let one = TruncSeries::one(50);
        let inv = e.invert().unwrap();
        assert_eq!(e.mul(&inv).unwrap(), one);
        assert_eq!(inv.mul(&e).unwrap(), one);
    }

    #[test]
    fn newton_and_recurrence_inverses_agree() {
        let e = euler_product(300);
        let dense = e
            .mul(&e)
            .unwrap()
            .add(&TruncSeries::constant(Rational::from(2), 300))
            .unwrap();
        assert_eq!(dense.invert_newton(), dense.invert_recurrence());
        let rational = dense.scale(&Rational::from((3, 7)));
        assert_eq!(rational.invert_newton(), rational.invert_recurrence());
    }

    #[test]
    fn json_round_trip_format() {
        let s = TruncSeries::from_coeffs(vec![Rational::from(1), Rational::from((-1, 2))]).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"order":1,"coeffs":["1/1","-1/2"]}"#);
        let back: TruncSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<TruncSeries>(r#"{"order":2,"coeffs":["1/1"]}"#).is_err());
    }

    #[test]
    fn dilate_shift_theta() {
        let s = series(&[1, 2, 3, 4, 5]);
        assert_eq!(s.dilate(2).unwrap(), series(&[1, 0, 2, 0, 3]));
        assert_eq!(s.shift(2), series(&[0, 0, 1, 2, 3]));
        assert_eq!(s.theta(), series(&[0, 2, 6, 12, 20]));
        assert!(s.truncate(9).is_err());
        assert_eq!(s.truncate(1).unwrap(), series(&[1, 2]));
    }

    fn arb_series(order: usize) -> impl Strategy<Value = TruncSeries> {
        prop::collection::vec((-50i64..50, 1i64..6), order + 1).prop_map(|v| {
            TruncSeries::from_coeffs(v.into_iter().map(|(n, d)| Rational::from((n, d))).collect())
                .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in arb_series(12), b in arb_series(12), c in arb_series(12)) {
            prop_assert_eq!(a.mul(&b)?, b.mul(&a)?);
            prop_assert_eq!(a.mul(&b)?.mul(&c)?, a.mul(&b.mul(&c)?)?);
            prop_assert_eq!(a.mul(&b.add(&c)?)?, a.mul(&b)?.add(&a.mul(&c)?)?);
        }

        #[test]
        fn inverse_is_two_sided(a in arb_series(20)) {
            prop_assume!(*a.coeff(0).unwrap() != 0);
            let inv = a.invert()?;
            let one = TruncSeries::one(20);
            prop_assert_eq!(a.mul(&inv)?, one.clone());
            prop_assert_eq!(inv.mul(&a)?, one);
        }
    }
}
