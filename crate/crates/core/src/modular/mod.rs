//! Level-one modular forms as exact q-expansions.

pub mod hecke;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::analytic::RealHP;
use crate::arith::{binomial, Int, Rat};
use crate::error::{invalid, Error, Result};
use crate::series::{triple_product, TruncSeries};

pub use hecke::{characteristic_polynomial, eigenforms_numeric, hecke_t2_matrix};

/// Exact Bernoulli number `B_m` for even `m ≥ 2`.
pub fn bernoulli(m: u32) -> Result<Rat> {
    if m < 2 || m % 2 == 1 {
        return Err(invalid(format!(
            "B_{m}: only even indices m ≥ 2 are supported"
        )));
    }
    // Σ_{k=0}^{n} C(n+1, k) B_k = 0
    let mut b: Vec<Rat> = vec![Rational::from(1)];
    for n in 1..=m {
        let mut acc = Rational::new();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from(bk * binomial(n + 1, k as u32));
        }
        b.push(-acc / (n + 1));
    }
    Ok(b.pop().unwrap())
}

/// `σ_e(n) = Σ_{d | n} d^e`.
pub fn sigma(e: u32, n: u64) -> Result<Int> {
    if n == 0 {
        return Err(invalid("σ_e(0) is undefined"));
    }
    let mut acc = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc += Integer::from(d).pow(e);
            let other = n / d;
            if other != d {
                acc += Integer::from(other).pow(e);
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// `σ_e(n)` for `0 ≤ n ≤ max`, with a 0 placeholder at index 0.
pub fn sigma_table(e: u32, max: usize) -> Vec<Int> {
    let mut t = vec![Integer::new(); max + 1];
    for d in 1..=max {
        let p = Integer::from(d).pow(e);
        for m in (d..=max).step_by(d) {
            t[m] += &p;
        }
    }
    t
}

/// Number of divisors for `0 ≤ n ≤ max` (index 0 unused).
pub fn divisor_count_table(max: usize) -> Vec<u32> {
    let mut t = vec![0u32; max + 1];
    for d in 1..=max {
        for m in (d..=max).step_by(d) {
            t[m] += 1;
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinSeries {
    pub weight: u32,
    pub series: TruncSeries,
}

/// `E_k = 1 - (2k / B_k) Σ σ_{k-1}(n) q^n`.
///
/// `k = 2` is accepted for expansion checks; it is not modular and never
/// enters the weight decompositions.
pub fn eisenstein(weight: u32, order: usize) -> Result<EisensteinSeries> {
    if weight < 2 || weight % 2 == 1 {
        return Err(invalid(format!(
            "Eisenstein series need even weight ≥ 2, got {weight}"
        )));
    }
    let factor = -Rational::from(2 * weight) / bernoulli(weight)?;
    let sig = sigma_table(weight - 1, order);
    let series = TruncSeries::from_fn(order, |n| {
        if n == 0 {
            Rational::from(1)
        } else {
            Rational::from(&factor * &sig[n])
        }
    });
    Ok(EisensteinSeries { weight, series })
}

/// `Δ^c = q^c (q;q)_∞^{24c}`.
pub fn delta_power(c: u32, order: usize) -> TruncSeries {
    triple_product(order).pow(8 * c).shift(c as usize)
}

/// Ramanujan's `Δ = q (q;q)_∞^{24}`; the coefficient of `q^n` is `τ(n)`.
pub fn delta_series(order: usize) -> TruncSeries {
    delta_power(1, order)
}

/// `dim S_k(SL_2(ℤ))`.
pub fn cusp_dim(weight: u32) -> usize {
    if weight % 2 == 1 || weight < 12 {
        return 0;
    }
    let base = (weight / 12) as usize;
    if weight % 12 == 2 {
        base - 1
    } else {
        base
    }
}

/// `(a, b)` with `4a + 6b = r`, preferring `b ∈ {0, 1}`.
fn e4_e6_exponents(r: u32) -> Option<(u32, u32)> {
    match r % 4 {
        0 => Some((r / 4, 0)),
        2 if r >= 6 => Some(((r - 6) / 4, 1)),
        _ => None,
    }
}

/// `E_4^a E_6^b` truncated at `order`.
fn e4_e6_monomial(a: u32, b: u32, order: usize) -> Result<TruncSeries> {
    let mut m = TruncSeries::one(order);
    if a > 0 {
        m = m.mul(&eisenstein(4, order)?.series.pow(a))?;
    }
    if b > 0 {
        m = m.mul(&eisenstein(6, order)?.series.pow(b))?;
    }
    Ok(m)
}

/// Coefficient arrays of a Hecke eigenform: exact for one-dimensional
/// spaces, numeric otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficients {
    Exact(TruncSeries),
    Numeric(Vec<RealHP>),
}

impl Coefficients {
    pub fn order(&self) -> usize {
        match self {
            Coefficients::Exact(s) => s.order(),
            Coefficients::Numeric(v) => v.len() - 1,
        }
    }

    pub fn to_float(&self, n: usize, bits: u32) -> Float {
        match self {
            Coefficients::Exact(s) => Float::with_val(bits, &s.coeffs()[n]),
            Coefficients::Numeric(v) => Float::with_val(bits, v[n].value()),
        }
    }

    pub fn exact(&self) -> Option<&TruncSeries> {
        match self {
            Coefficients::Exact(s) => Some(s),
            Coefficients::Numeric(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenvalueLabel {
    Exact(#[serde(with = "rat_string")] Rat),
    Numeric(RealHP),
}

impl EigenvalueLabel {
    pub fn to_f64(&self) -> f64 {
        match self {
            EigenvalueLabel::Exact(r) => r.to_f64(),
            EigenvalueLabel::Numeric(x) => x.to_f64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenform {
    /// Eigenvalue of `T_2`, which equals the coefficient `a(2)`.
    pub a2: EigenvalueLabel,
    pub coeffs: Coefficients,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenformTable {
    pub weight: u32,
    pub dim: usize,
    pub forms: Vec<Eigenform>,
}

impl EigenformTable {
    pub fn order(&self) -> usize {
        self.forms.first().map_or(0, |f| f.coeffs.order())
    }
}

/// The normalized cusp eigenform of weight 12, 16, 18, 20, 22 or 26,
/// built as `Δ E_4^a E_6^b`.
pub fn cusp_eigenform_1dim(weight: u32, order: usize) -> Result<EigenformTable> {
    if cusp_dim(weight) != 1 {
        return Err(invalid(format!("S_{weight} is not one-dimensional")));
    }
    let (a, b) = e4_e6_exponents(weight - 12).expect("one-dimensional weights have a monomial");
    let form = delta_series(order).mul(&e4_e6_monomial(a, b, order)?)?;
    let a2 = form.coeff(2).cloned().unwrap_or_default();
    Ok(EigenformTable {
        weight,
        dim: 1,
        forms: vec![Eigenform {
            a2: EigenvalueLabel::Exact(a2),
            coeffs: Coefficients::Exact(form),
        }],
    })
}

/// Echelonized integral basis `g_i = q^i + O(q^{d+1})`, `i = 1..d`, of
/// `S_k`, built from the monomials `Δ^c E_4^a E_6^b`.
pub fn victor_miller_cusp_basis(weight: u32, order: usize) -> Result<Vec<TruncSeries>> {
    if weight % 2 == 1 {
        return Err(invalid(format!("odd weight {weight}")));
    }
    let d = cusp_dim(weight);
    if d == 0 {
        return Ok(Vec::new());
    }
    if order < d {
        return Err(Error::Truncation {
            needed: d,
            have: order,
        });
    }
    let mut basis: Vec<TruncSeries> = Vec::with_capacity(d);
    for c in 1..=d as u32 {
        let (a, b) = e4_e6_exponents(weight - 12 * c).expect("k - 12c is never 2 for c ≤ d");
        basis.push(delta_power(c, order).mul(&e4_e6_monomial(a, b, order)?)?);
    }
    // basis[c-1] = q^c + …; clear the entries above the diagonal, bottom up.
    for i in (0..d).rev() {
        for j in i + 1..d {
            let c = basis[i].coeffs()[j + 1].clone();
            if c != 0 {
                let reduced = basis[i].sub(&basis[j].scale(&c))?;
                basis[i] = reduced;
            }
        }
    }
    Ok(basis)
}

pub(crate) mod rat_string {
    use crate::arith::{parse_rat, rat_to_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}
