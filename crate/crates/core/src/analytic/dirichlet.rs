//! Truncated twisted Dirichlet series `D(f;N,s)` and the weighted sums
//! `𝓓_f(M,N)` with explicit truncation bounds.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::integral::etilde;
use super::real::{bits_for, format_float, RealHP};
use crate::error::{invalid, Error, Result};
use crate::modular::{divisor_count_table, Coefficients};

/// Bits used for the (heuristic) bound arithmetic.
const BOUND_BITS: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationParams {
    /// Cutoff of the `m`-sum.
    #[serde(rename = "M")]
    pub m: u32,
    /// Cutoff of the Dirichlet `n`-sum.
    #[serde(rename = "N")]
    pub n: u64,
    /// Working precision in decimal digits.
    pub prec: u32,
}

impl Default for TruncationParams {
    fn default() -> Self {
        Self {
            m: 100,
            n: 700,
            prec: 60,
        }
    }
}

impl TruncationParams {
    pub fn new(m: u32, n: u64, prec: u32) -> Result<Self> {
        let p = Self { m, n, prec };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(invalid("N must be at least 1"));
        }
        if self.prec < 30 {
            return Err(invalid(format!(
                "prec must be at least 30 digits, got {}",
                self.prec
            )));
        }
        Ok(())
    }

    /// Largest coefficient index `(N²-1)/8` that the `n`-sum touches.
    pub fn max_index(&self) -> usize {
        max_twisted_index(self.n)
    }
}

/// `(n²-1)/8` rounded down; exact for odd `n`.
pub fn twisted_index(n: u64) -> usize {
    ((n * n).saturating_sub(1) / 8) as usize
}

/// Largest `(n²-1)/8` over odd `n ≤ n_max`.
pub fn max_twisted_index(n_max: u64) -> usize {
    if n_max < 3 {
        0
    } else {
        twisted_index(n_max - (1 - n_max % 2))
    }
}

/// Kronecker symbol `(-4/n)`.
pub fn chi_minus4(n: u64) -> i32 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// `(n, (-4/n) a_f((n²-1)/8))` for the odd `3 ≤ n ≤ N`; even `n` and `n = 1`
/// contribute nothing.
fn twisted_terms(f: &Coefficients, n_max: u64, bits: u32) -> Result<Vec<(u64, Float)>> {
    let need = max_twisted_index(n_max);
    if f.order() < need {
        return Err(Error::Truncation {
            needed: need,
            have: f.order(),
        });
    }
    Ok((3..=n_max)
        .step_by(2)
        .map(|n| {
            let a = f.to_float(twisted_index(n), bits);
            (n, if chi_minus4(n) < 0 { -a } else { a })
        })
        .collect())
}

/// `D(f;N,s) = Σ_{n ≤ N} (-4/n) a_f((n²-1)/8) n^{-s}` for real `s`.
pub fn dirichlet_partial(f: &Coefficients, n_max: u64, s: &Float, digits: u32) -> Result<RealHP> {
    let bits = bits_for(digits) + 32;
    let mut acc = Float::new(bits);
    for (n, c) in twisted_terms(f, n_max, bits)? {
        let p = Float::with_val(bits, n).pow(Float::with_val(bits, -s));
        acc += c * p;
    }
    Ok(RealHP::new(acc, digits))
}

/// `D(f;N, s_0 + 2t)` for `t = 0..count`, sharing one power ladder per `n`.
fn dirichlet_ladder(
    f: &Coefficients,
    n_max: u64,
    s0: u32,
    count: usize,
    bits: u32,
) -> Result<Vec<Float>> {
    let mut out = vec![Float::new(bits); count];
    for (n, c) in twisted_terms(f, n_max, bits)? {
        let step = Float::with_val(bits, n * n).recip();
        let mut term = c * Float::with_val(bits, n).pow(-(s0 as i32));
        for slot in out.iter_mut() {
            *slot += &term;
            term *= &step;
        }
    }
    Ok(out)
}

/// Divisor counts `d((n²-1)/8)` for odd `n ≤ limit`, via the coprime
/// factorization `(n²-1)/8 = ((n-1)/2)((n+1)/2)/2`.
fn twisted_divisor_counts(limit: u64) -> Vec<(u64, u32)> {
    let d = divisor_count_table((limit as usize).div_ceil(2) + 1);
    (3..=limit)
        .step_by(2)
        .map(|n| {
            let (a, b) = (((n - 1) / 2) as usize, n.div_ceil(2) as usize);
            let count = if a % 2 == 0 {
                d[a / 2] * d[b]
            } else {
                d[a] * d[b / 2]
            };
            (n, count)
        })
        .collect()
}

/// `C_ε` with `d(m) ≤ C_ε m^ε` for all `m ≥ 1`, from
/// `Π_{p < 2^{1/ε}} max_k (k+1)/p^{kε}`.
fn divisor_bound_constant(eps: f64) -> f64 {
    let limit = 2f64.powf(1.0 / eps) as u64;
    let mut c = 1.0;
    for p in (2..limit).filter(|&p| (2..p).all(|q| p % q != 0)) {
        let best = (0..64)
            .map(|k| (k as f64 + 1.0) / (p as f64).powf(k as f64 * eps))
            .fold(0.0, f64::max);
        c *= best;
    }
    c
}

/// Truncation diagnostics attached to a weighted sum.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSum {
    pub value: RealHP,
    /// Bound on the omitted `m > M` terms, divided by `‖f‖`.
    pub m_tail: Float,
    /// Bound on the omitted `n > N` terms for `m ≤ M`, divided by `‖f‖`.
    pub n_tail: Float,
    /// Decimal digits lost to cancellation in the double sum.
    pub cancellation_digits: u32,
}

impl WeightedSum {
    pub fn tail_bound(&self) -> Float {
        Float::with_val(BOUND_BITS, &self.m_tail + &self.n_tail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedSumReport {
    pub value: String,
    pub m_tail: String,
    pub n_tail: String,
    pub digits: u32,
}

impl From<&WeightedSum> for WeightedSumReport {
    fn from(w: &WeightedSum) -> Self {
        Self {
            value: w.value.to_decimal(),
            m_tail: format_float(&w.m_tail, 6),
            n_tail: format_float(&w.n_tail, 6),
            digits: w.value.digits(),
        }
    }
}

/// `𝓓_f(M,N) = (1/‖f‖) Σ_{j=0}^{v-2} Σ_{m=0}^{M} Ẽ_v(j,m) D(f; N, 2v+2j+2m+2)`
/// for a normalized eigenform `f` of weight `2v` with Petersson norm `norm`.
///
/// Tail bounds use `|a_f(m)| ≤ d(m) m^{(2v-1)/2}`; they are heuristic in
/// that the eigenform coefficients are taken at face value.
pub fn weighted_sum_df_with_norm(
    v: u32,
    f: &Coefficients,
    norm: &RealHP,
    params: &TruncationParams,
) -> Result<WeightedSum> {
    params.validate()?;
    if v < 2 {
        return Err(invalid(format!("𝓓_f needs v ≥ 2, got {v}")));
    }
    let bits = bits_for(params.prec) + 64;
    let count = (v - 2 + params.m + 1) as usize;
    let ladder = dirichlet_ladder(f, params.n, 2 * v + 2, count, bits)?;
    let mut acc = Float::new(bits);
    let mut largest = Float::new(bits);
    for j in 0..=v - 2 {
        for m in 0..=params.m {
            let e = etilde(v, j, m)?.to_float(bits);
            let term = e * &ladder[(j + m) as usize];
            let mag = Float::with_val(bits, term.abs_ref());
            if mag > largest {
                largest = mag;
            }
            acc += term;
        }
    }
    let value = Float::with_val(bits, &acc / norm.value());
    let lost_bits = match (largest.get_exp(), acc.get_exp()) {
        (Some(l), Some(a)) => (l - a).max(0) as u32,
        _ => 0,
    };
    let lost_digits = (lost_bits as f64 / std::f64::consts::LOG2_10).ceil() as u32;
    let digits = params
        .prec
        .min(norm.digits())
        .saturating_sub(lost_digits.saturating_sub(15))
        .max(1);
    let (m_tail, n_tail) = tail_bounds(v, params, norm)?;
    Ok(WeightedSum {
        value: RealHP::new(value, digits),
        m_tail,
        n_tail,
        cancellation_digits: lost_digits,
    })
}

/// Bounds `(m_tail, n_tail)` for `𝓓_f(M,N)`, both divided by `‖f‖`.
fn tail_bounds(v: u32, params: &TruncationParams, norm: &RealHP) -> Result<(Float, Float)> {
    let b = BOUND_BITS;
    let half_weight = Float::with_val(b, 8)
        .pow(Float::with_val(b, v as f64 - 0.5))
        .recip();
    let abs_e = |j: u32, m: u32| -> Result<Float> { Ok(etilde(v, j, m)?.to_float(b).abs()) };

    // |D(f;∞,s_t)| ≤ 8^{-(v-1/2)} Σ_{n odd ≥ 3} d(m_n) n^{-(3+2t)}, with the
    // part n > L bounded through d(m) ≤ 2√m.
    let l = 2001u64;
    let small = twisted_divisor_counts(l);
    let full_bound = |t: u32| -> Float {
        let e = -(3 + 2 * t as i32);
        let mut s = Float::new(b);
        for &(n, d) in &small {
            s += Float::with_val(b, n).pow(e) * d;
        }
        let rem = Float::with_val(b, l).pow(-(1 + 2 * t as i32)) * 2u32
            / Float::with_val(b, 8).sqrt()
            / (1 + 2 * t);
        (s + rem) * &half_weight
    };

    // m-tail: consecutive bound terms shrink by ρ_m = (2v+m-1)/(9(m+1)).
    let m1 = params.m + 1;
    let rho = (2 * v + m1 - 1) as f64 / (9.0 * (m1 + 1) as f64);
    if rho >= 1.0 {
        let needed = (2 * v as i64 - 10).max(0) / 8 + 1;
        return Err(Error::PrecisionInfeasible(format!(
            "m-tail does not contract at M = {}; use M ≥ {needed}",
            params.m
        )));
    }
    let mut m_tail = Float::new(b);
    for j in 0..=v - 2 {
        m_tail += abs_e(j, m1)? * full_bound(j + m1) / (1.0 - rho);
    }

    // n-tail: exact d(m_n) on (N, K], then d(m) ≤ C_ε m^ε beyond K.
    let k = (64 * params.n).max(20_001) | 1;
    let eps = 0.25;
    let c_eps = divisor_bound_constant(eps);
    let mut s0 = Float::new(b);
    for (n, d) in twisted_divisor_counts(k) {
        if n > params.n {
            s0 += Float::with_val(b, n).pow(-3) * d;
        }
    }
    let first = Float::with_val(b, params.n + 1);
    let mut n_tail = Float::new(b);
    for j in 0..=v - 2 {
        for m in 0..=params.m {
            let t = j + m;
            let shrink = first.clone().pow(-(2 * t as i32));
            let expo = 2.0 * eps - 2.0 - 2.0 * t as f64;
            let beyond = Float::with_val(b, k).pow(Float::with_val(b, expo))
                * c_eps
                * Float::with_val(b, 8).pow(Float::with_val(b, -eps))
                / (-expo);
            let bound = (Float::with_val(b, &s0 * &shrink) + beyond) * &half_weight;
            n_tail += abs_e(j, m)? * bound;
        }
    }
    let norm_f = Float::with_val(b, norm.value());
    Ok((m_tail / &norm_f, n_tail / &norm_f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::delta_series;

    #[test]
    fn kronecker_symbol() {
        let got: Vec<i32> = (0..9).map(chi_minus4).collect();
        assert_eq!(got, [0, 1, 0, -1, 0, 1, 0, -1, 0]);
    }

    #[test]
    fn partial_sums_small() {
        let f = Coefficients::Exact(delta_series(10));
        let s = Float::with_val(200, 14);
        assert!(dirichlet_partial(&f, 1, &s, 40).unwrap().is_zero());
        assert!(dirichlet_partial(&f, 2, &s, 40).unwrap().is_zero());
        let d3 = dirichlet_partial(&f, 3, &s, 40).unwrap();
        let expected = -Float::with_val(200, Float::with_val(200, 3).pow(-14i32));
        assert!((Float::with_val(200, d3.value() - &expected) / &expected).abs() < 1e-38);
        // n = 5 adds τ(3)·5^{-14}
        let d5 = dirichlet_partial(&f, 5, &s, 40).unwrap();
        let expected: Float =
            expected + Float::with_val(200, 252) * Float::with_val(200, 5).pow(-14i32);
        assert!((Float::with_val(200, d5.value() - &expected) / &expected).abs() < 1e-38);
        assert!(matches!(
            dirichlet_partial(&f, 11, &s, 40),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn even_terms_vanish_structurally() {
        // Perturbing coefficients at indices no odd n reaches changes nothing.
        let base = delta_series(70);
        let mut c = base.coeffs().to_vec();
        let reached: Vec<usize> = (3..=23u64).step_by(2).map(twisted_index).collect();
        for (i, x) in c.iter_mut().enumerate() {
            if !reached.contains(&i) {
                *x += 1000;
            }
        }
        let perturbed = Coefficients::Exact(crate::series::TruncSeries::from_coeffs(c).unwrap());
        let s = Float::with_val(200, 16);
        let a = dirichlet_partial(&Coefficients::Exact(base), 23, &s, 40).unwrap();
        let b = dirichlet_partial(&perturbed, 23, &s, 40).unwrap();
        assert_eq!(a.value(), b.value());
    }

    #[test]
    fn ladder_matches_direct() {
        let f = Coefficients::Exact(delta_series(200));
        let bits = 256;
        let ladder = dirichlet_ladder(&f, 39, 14, 5, bits).unwrap();
        for (t, x) in ladder.iter().enumerate() {
            let s = Float::with_val(bits, 14 + 2 * t as u32);
            let d = dirichlet_partial(&f, 39, &s, 60).unwrap();
            assert!((Float::with_val(bits, x - d.value()) / x).abs() < 1e-60);
        }
    }

    #[test]
    fn divisor_counts_of_twisted_indices() {
        for (n, d) in twisted_divisor_counts(501) {
            let m = (n * n - 1) / 8;
            let naive = (1..=m).filter(|k| m % k == 0).count() as u32;
            assert_eq!(d, naive, "n = {n}");
        }
        let c = divisor_bound_constant(0.25);
        let table = divisor_count_table(100_000);
        for (m, &d) in table.iter().enumerate().skip(1) {
            assert!(d as f64 <= c * (m as f64).powf(0.25) + 1e-9, "m = {m}");
        }
    }

    #[test]
    fn params_validation() {
        assert!(TruncationParams::new(100, 700, 29).is_err());
        assert!(TruncationParams::new(100, 0, 60).is_err());
        let p = TruncationParams::default();
        assert_eq!((p.m, p.n, p.prec), (100, 700, 60));
        assert_eq!(p.max_index(), 61075);
        assert_eq!(max_twisted_index(2), 0);
        assert_eq!(max_twisted_index(8), 6);
    }
}
