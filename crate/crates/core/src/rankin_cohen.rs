//! The brackets `R_v = [1/η³, η³]_v`, the coefficient polynomials
//! `𝓔_v(n,k)` and their Eisenstein/cusp decompositions.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, denominator_lcm, factorial, rising, Int, Rat};
use crate::error::{invalid, Error, Result};
use crate::halfgamma::HalfGammaRatio;
use crate::modular::{bernoulli, cusp_eigenform_1dim, eisenstein, sigma};
use crate::partitions::{PartitionKind, PartitionTable, Status};
use crate::series::{triangular, TruncSeries};

/// Weights `v` whose space `S_{2v}` is zero and `M_{2v}` is spanned by `E_{2v}`.
pub const EISENSTEIN_ONLY: [u32; 5] = [2, 3, 4, 5, 7];
/// Weights `v` with `dim S_{2v} = 1`.
pub const ONE_CUSP_FORM: [u32; 6] = [6, 8, 9, 10, 11, 13];

/// `𝓔_v(n,k) = Σ_r weights[r] (2k+1)^{2(v-r)+1} (8n-(2k+1)²)^r / denom`.
#[derive(Debug)]
struct Skeleton {
    weights: Vec<Int>,
    denom: Int,
}

fn skeleton(v: u32) -> Arc<Skeleton> {
    static MEMO: OnceLock<RwLock<HashMap<u32, Arc<Skeleton>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(s) = memo.read().unwrap().get(&v) {
        return s.clone();
    }
    let built = Arc::new(build_skeleton(v));
    memo.write().unwrap().entry(v).or_insert(built).clone()
}

/// `Γ(v-3/2)Γ(v+3/2) / (s! r! Γ(r-3/2)Γ(s+3/2))` with `r + s = v`.
fn bracket_gamma_ratio(v: u32, r: u32) -> Rat {
    let (v2, r2, s2) = (2 * v as i64, 2 * r as i64, 2 * (v - r) as i64);
    HalfGammaRatio::new()
        .num(v2 - 3)
        .num(v2 + 3)
        .den(r2 - 3)
        .den(s2 + 3)
        .times(Rational::from((1, factorial(v - r) * factorial(r))))
        .reduce()
        .expect("half-integer Γ arguments pair up")
}

fn build_skeleton(v: u32) -> Skeleton {
    let scaled: Vec<Rat> = (0..=v)
        .map(|r| {
            let c = bracket_gamma_ratio(v, r);
            if r % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    let lcm = denominator_lcm(&scaled);
    let weights = scaled
        .iter()
        .map(|w| {
            let x = Rational::from(w * &lcm);
            x.numer().clone()
        })
        .collect();
    Skeleton {
        weights,
        denom: lcm * Integer::from(8).pow(v),
    }
}

/// `denom · 𝓔_v(n,k)` as an integer.
fn cal_e_numerator(sk: &Skeleton, n: u64, k: u64) -> Int {
    let m = Integer::from(2 * k + 1);
    let m2 = Integer::from(m.square_ref());
    let x = Integer::from(8 * n) - &m2;
    // Homogeneous Horner: Σ_r w_r (m²)^{v-r} x^r
    let mut acc = Integer::new();
    let mut m2_pow = Integer::from(1);
    for w in sk.weights.iter().rev() {
        acc *= &x;
        acc += Integer::from(w * &m2_pow);
        m2_pow *= &m2;
    }
    acc * m
}

/// Exact `𝓔_v(n,k)`.
pub fn cal_e(v: u32, n: u64, k: u64) -> Rat {
    let sk = skeleton(v);
    Rational::from((cal_e_numerator(&sk, n, k), sk.denom.clone()))
}

/// `𝓟_v(x) = Σ_r (-1)^r C(2v+1, 2r) (2r-3)(2r-1) x^r`.
pub fn poly_p(v: u32, x: &Int) -> Int {
    let mut acc = Integer::new();
    for r in (0..=v).rev() {
        let c = binomial(2 * v + 1, 2 * r) * Integer::from((2 * r as i64 - 3) * (2 * r as i64 - 1));
        acc *= x;
        if r % 2 == 1 {
            acc -= c;
        } else {
            acc += c;
        }
    }
    acc
}

/// The rational factor `Γ(v-3/2)Γ(v+3/2) / ((2v+1)! 2^{v+1} π)` linking
/// `𝓔_v(n,0)` to `𝓟_v(8n-1)`.
pub fn poly_p_scale(v: u32) -> Result<Rat> {
    let g = HalfGammaRatio::new()
        .num(2 * v as i64 - 3)
        .num(2 * v as i64 + 3)
        .times(Rational::from((1, factorial(2 * v + 1) << (v + 1))))
        .reduce_with_pi()?;
    if g.pi_power != 1 {
        return Err(Error::Domain(format!(
            "expected a single factor of π, found π^{}",
            g.pi_power
        )));
    }
    Ok(g.r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonvanishingReport {
    pub v_max: u32,
    pub n_max: u64,
    pub checked: u64,
    /// Smallest `|𝓔_v(n,0)|` seen.
    #[serde(with = "crate::modular::rat_string")]
    pub min_abs: Rat,
    pub min_at: (u32, u64),
    pub status: Status,
}

/// Checks `𝓔_v(n,0) ≠ 0` for `0 ≤ v ≤ v_max`, `1 ≤ n ≤ n_max`.
pub fn nonvanishing_sweep(v_max: u32, n_max: u64) -> Result<NonvanishingReport> {
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    let per_v: Vec<(Rat, u32, u64)> = (0..=v_max)
        .into_par_iter()
        .map(|v| {
            let sk = skeleton(v);
            let mut best: Option<(Int, u64)> = None;
            for n in 1..=n_max {
                let num = cal_e_numerator(&sk, n, 0);
                if num == 0 {
                    return Err(Error::LemmaViolation { v, n });
                }
                let abs = num.abs();
                if best.as_ref().is_none_or(|(b, _)| abs < *b) {
                    best = Some((abs, n));
                }
            }
            let (num, n) = best.expect("n_max ≥ 1");
            Ok((Rational::from((num, sk.denom.clone())), v, n))
        })
        .collect::<Result<_>>()?;
    let (min_abs, v, n) = per_v
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("v range nonempty");
    Ok(NonvanishingReport {
        v_max,
        n_max,
        checked: (v_max as u64 + 1) * n_max,
        min_abs,
        min_at: (v, n),
        status: Status::Pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RvSeries {
    pub v: u32,
    pub series: TruncSeries,
}

/// `R_v` through `q^order` from `Σ_k (-1)^k 𝓔_v(n,k) 𝔭_3(n - T_k)`.
pub fn rv_series(v: u32, order: usize, p3: &PartitionTable) -> Result<RvSeries> {
    if p3.kind != PartitionKind::Colored(3) {
        return Err(invalid(format!(
            "R_v needs a 3-colored table, got {:?}",
            p3.kind
        )));
    }
    if p3.max_n() < order {
        return Err(Error::InsufficientTable {
            needed: order,
            have: p3.max_n(),
        });
    }
    let sk = skeleton(v);
    let values = p3.values();
    let coeffs: Vec<Rat> = (0..=order as u64)
        .into_par_iter()
        .map(|n| {
            let mut acc = Integer::new();
            let mut k = 0u64;
            while triangular(k) <= n {
                let term = cal_e_numerator(&sk, n, k) * &values[(n - triangular(k)) as usize];
                if k % 2 == 1 {
                    acc -= term;
                } else {
                    acc += term;
                }
                k += 1;
            }
            Rational::from((acc, sk.denom.clone()))
        })
        .collect();
    Ok(RvSeries {
        v,
        series: TruncSeries::from_coeffs(coeffs)?,
    })
}

/// `R_v` through `q^order` straight from the bracket definition, with
/// weights `-3/2` and `3/2`.
///
/// `D` acts on the `q^{a-1/8}` term of `1/η³` by `(8a-1)/8` and on the
/// `q^{T_k+1/8}` term of `η³` by `(2k+1)²/8`; the shifts cancel in each
/// product. The bracket constants come from rising factorials, not from
/// the half-integer Γ reducer.
pub fn rv_series_direct(v: u32, order: usize) -> Result<RvSeries> {
    let inv_eta3 = crate::partitions::oracle_colored(3, order)?.as_series();
    let (k_wt, l_wt) = (Rational::from((-3, 2)), Rational::from((3, 2)));
    let eighth_pow = Rational::from((1, Integer::from(8).pow(v)));
    let mut total = TruncSeries::zero(order);
    for r in 0..=v {
        let s = v - r;
        // Γ(k+v)/Γ(k+v-s) and Γ(l+v)/Γ(l+v-r)
        let kv_s = Rational::from(&k_wt + (v - s));
        let lv_r = Rational::from(&l_wt + (v - r));
        let mut c =
            rising(&kv_s, s) * rising(&lv_r, r) / Rational::from(factorial(r) * factorial(s));
        if r % 2 == 1 {
            c = -c;
        }
        if c == 0 {
            continue;
        }
        let df = TruncSeries::from_fn(order, |a| {
            Rational::from(&inv_eta3.coeffs()[a] * Integer::from(8 * a as i64 - 1).pow(r))
        });
        let mut dg = vec![Rational::new(); order + 1];
        let mut k = 0u64;
        while (triangular(k) as usize) <= order {
            let coeff = Integer::from(2 * k + 1).pow(2 * s + 1);
            dg[triangular(k) as usize] = Rational::from(if k % 2 == 1 { -coeff } else { coeff });
            k += 1;
        }
        let dg = TruncSeries::from_coeffs(dg)?;
        total = total.add(&df.mul(&dg)?.scale(&Rational::from(&c * &eighth_pow)))?;
    }
    Ok(RvSeries { v, series: total })
}

/// `α_v = 𝓔_v(0,0)`.
pub fn alpha(v: u32) -> Rat {
    cal_e(v, 0, 0)
}

/// `β_v = 4v 𝓔_v(0,0)/B_{2v} + 3𝓔_v(1,0) - 𝓔_v(1,1)` for `v` with a
/// one-dimensional cusp space.
pub fn beta(v: u32) -> Result<Rat> {
    if !ONE_CUSP_FORM.contains(&v) {
        return Err(invalid(format!(
            "β_v is defined for v ∈ {ONE_CUSP_FORM:?}, got {v}"
        )));
    }
    let e00 = cal_e(v, 0, 0);
    Ok(Rational::from(4 * v) * e00 / bernoulli(2 * v)? + cal_e(v, 1, 0) * 3u32 - cal_e(v, 1, 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem2Report {
    pub v: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub status: Status,
    pub first_mismatch: Option<u64>,
    #[serde(with = "crate::modular::rat_string")]
    pub alpha: Rat,
    #[serde(with = "opt_rat_string")]
    pub beta: Option<Rat>,
}

/// The exact pieces of the explicit recurrence at `n ≥ 1`:
/// `X = -(4v 𝓔_v(0,0)/B_{2v}) σ_{2v-1}(n) + Σ_{k≥1} (-1)^{k+1} 𝓔_v(n,k) 𝔭_3(n-T_k)`
/// and `𝓔_v(n,0)`, so that `𝔭_3(n) = (X + cusp part) / 𝓔_v(n,0)`.
pub fn recurrence_parts(v: u32, n: u64, p3: &PartitionTable) -> Result<(Rat, Rat)> {
    if n == 0 {
        return Err(invalid("the recurrence starts at n = 1"));
    }
    if v == 0 {
        return Err(invalid("the Eisenstein term needs v ≥ 1"));
    }
    let sk = skeleton(v);
    let mut x = -(Rational::from(4 * v) * alpha(v) / bernoulli(2 * v)? * sigma(2 * v - 1, n)?);
    let mut sum = Integer::new();
    let mut k = 1u64;
    while triangular(k) <= n {
        let term = cal_e_numerator(&sk, n, k) * p3.get((n - triangular(k)) as i64)?;
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
        k += 1;
    }
    x += Rational::from((sum, sk.denom.clone()));
    let e0 = cal_e_numerator(&sk, n, 0);
    if e0 == 0 {
        return Err(Error::LemmaViolation { v, n });
    }
    Ok((x, Rational::from((e0, sk.denom.clone()))))
}

/// `𝔭_3(n)`, `n ≥ 1`, from
/// `[-(4v α_v/B_{2v}) σ_{2v-1}(n) + β_v a(n) + Σ_{k≥1} (-1)^{k+1} 𝓔_v(n,k) 𝔭_3(n-T_k)] / 𝓔_v(n,0)`,
/// where `a(n)` is the cusp eigenform coefficient; the `β` term is
/// dropped when `cusp` is `None`.
pub fn p3_from_recurrence(
    v: u32,
    n: u64,
    cusp: Option<(&Rat, &TruncSeries)>,
    p3: &PartitionTable,
) -> Result<Rat> {
    let (mut x, e0) = recurrence_parts(v, n, p3)?;
    if let Some((b, f)) = cusp {
        let a = f.coeff(n as usize).ok_or(Error::Truncation {
            needed: n as usize,
            have: f.order(),
        })?;
        x += Rational::from(b * a);
    }
    Ok(x / e0)
}

/// Checks `R_v = α_v E_{2v} (+ β_v Δ_{2v})` through `q^order`, and the
/// equivalent recurrence against the table for `1 ≤ n ≤ order`.
pub fn verify_theorem2(v: u32, order: usize, p3: &PartitionTable) -> Result<Theorem2Report> {
    let with_cusp = ONE_CUSP_FORM.contains(&v);
    if !with_cusp && !EISENSTEIN_ONLY.contains(&v) {
        return Err(invalid(format!(
            "the decomposition is checked for v ∈ {EISENSTEIN_ONLY:?} or {ONE_CUSP_FORM:?}, got {v}"
        )));
    }
    let a = alpha(v);
    let b = if with_cusp { Some(beta(v)?) } else { None };
    let rv = rv_series(v, order, p3)?;
    let mut predicted = eisenstein(2 * v, order)?.series.scale(&a);
    let cusp = match &b {
        Some(b) => {
            let table = cusp_eigenform_1dim(2 * v, order)?;
            let f = table.forms[0]
                .coeffs
                .exact()
                .expect("dimension one is exact")
                .clone();
            predicted = predicted.add(&f.scale(b))?;
            Some(f)
        }
        None => None,
    };
    let series_mismatch = rv.series.first_difference(&predicted)?.map(|n| n as u64);
    let cusp_ref = b.as_ref().zip(cusp.as_ref());
    let recurrence_mismatch = (1..=order as u64)
        .into_par_iter()
        .map(|n| p3_from_recurrence(v, n, cusp_ref, p3).map(|x| (n, x == p3.values()[n as usize])))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .find(|(_, ok)| !ok)
        .map(|(n, _)| n);
    let first_mismatch = match (series_mismatch, recurrence_mismatch) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    Ok(Theorem2Report {
        v,
        n: order,
        status: Status::from_bool(first_mismatch.is_none()),
        first_mismatch,
        alpha: a,
        beta: b,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightTwoReport {
    pub v: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub series: TruncSeries,
    pub vanishes: bool,
    pub routes_agree: bool,
}

/// `R_1` by both routes. Nothing is asserted about weight two; the report
/// records the expansion.
pub fn weight_two_report(order: usize, p3: &PartitionTable) -> Result<WeightTwoReport> {
    let direct = rv_series_direct(1, order)?;
    let via_e = rv_series(1, order, p3)?;
    Ok(WeightTwoReport {
        v: 1,
        n: order,
        vanishes: direct.series.is_zero(),
        routes_agree: direct == via_e,
        series: direct.series,
    })
}

mod opt_rat_string {
    use crate::arith::{parse_rat, rat_to_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&rat_to_string(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rat(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}
