//! Petersson norms `‖f‖ = ∬_F |f|² y^{k} dx dy / y²` over the standard
//! fundamental domain `|x| ≤ 1/2, |z| ≥ 1`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::quad::tanh_sinh;
use super::real::{bits_for, format_float, RealHP};
use crate::arith::factorial;
use crate::error::{invalid, Error, Result};
use crate::modular::Coefficients;

const BOUND_BITS: u32 = 128;

#[derive(Clone, Debug, PartialEq)]
pub struct PeterssonNorm {
    pub value: RealHP,
    /// Number of `q`-expansion terms used.
    pub terms: usize,
    /// Bound on the error from truncating the `q`-expansion.
    pub truncation_bound: Float,
    /// Difference between the last two quadrature levels.
    pub quadrature_error: Float,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeterssonReport {
    pub value: String,
    pub digits: u32,
    pub terms: usize,
    pub truncation_bound: String,
    pub quadrature_error: String,
}

impl From<&PeterssonNorm> for PeterssonReport {
    fn from(n: &PeterssonNorm) -> Self {
        Self {
            value: n.value.to_decimal(),
            digits: n.value.digits(),
            terms: n.terms,
            truncation_bound: format_float(&n.truncation_bound, 6),
            quadrature_error: format_float(&n.quadrature_error, 6),
        }
    }
}

/// `∫_{y0}^∞ e^{-c y} y^{K-1} dy = Γ(K, c·y0)/c^K` for integer `K ≥ 1`,
/// via `Γ(K, z) = (K-1)! e^{-z} Σ_{j<K} z^j/j!`.
fn upper_gamma_integral(big_k: u32, c: &Float, y0: &Float, bits: u32) -> Float {
    let z = Float::with_val(bits, c * y0);
    let mut term = Float::with_val(bits, 1);
    let mut sum = Float::with_val(bits, 1);
    for j in 1..big_k {
        term *= &z;
        term /= j;
        sum += &term;
    }
    let lead = Float::with_val(bits, &factorial(big_k - 1));
    lead * sum * (-z).exp() / Float::with_val(bits, c.pow(big_k))
}

fn check_cusp_form(f: &Coefficients, weight: u32) -> Result<()> {
    if weight < 12 || weight % 2 == 1 {
        return Err(invalid(format!(
            "no level-one cusp forms of weight {weight}"
        )));
    }
    if !f.to_float(0, 64).is_zero() {
        return Err(invalid("constant term must vanish for a cusp form"));
    }
    Ok(())
}

/// Error bound for truncating `f` after `terms` coefficients, using
/// `|a(n)| ≤ 2 n^{k/2}` for `n > terms`.
fn truncation_bound(f: &Coefficients, weight: u32, terms: usize) -> Float {
    let b = BOUND_BITS;
    let y_m = Float::with_val(b, 3).sqrt() / 2u32;
    let two_pi = Float::with_val(b, Constant::Pi) * 2u32;
    let q0 = (Float::with_val(b, &two_pi * &y_m) * -1i32).exp();
    let half_k = weight as i32 / 2;
    let l1 = (terms + 1) as u32;
    let rho = Float::with_val(b, (l1 + 1) as f64 / l1 as f64).pow(half_k) * &q0;
    if rho >= 1 {
        return Float::with_val(b, f64::INFINITY);
    }
    let r_hat = Float::with_val(b, l1).pow(half_k) * Float::with_val(b, (&q0).pow(l1)) * 2u32
        / (1u32 - rho);
    let mut f_hat = Float::new(b);
    for n in 1..=terms {
        f_hat += f.to_float(n, b).abs() * Float::with_val(b, (&q0).pow(n as u32));
    }
    let c = Float::with_val(b, &two_pi * (l1 + 1));
    let shift = Float::with_val(b, &c * &y_m).exp();
    let tail_integral = upper_gamma_integral(weight - 1, &c, &y_m, b) * shift;
    (f_hat * &r_hat * 2u32 + Float::with_val(b, r_hat.square_ref())) * tail_integral
}

/// `‖f‖` for a normalized cusp form of weight `k`.
///
/// The `y`-integral is done in closed form term by term: with
/// `|f|² = Σ a_m a_n cos(2π(m-n)x) e^{-2π(m+n)y}` on the real-coefficient
/// forms used here, `∫_{√(1-x²)}^∞` of each term is an upper incomplete
/// gamma value. What remains is a smooth integral over `x ∈ [0, 1/2]`,
/// done by tanh-sinh.
pub fn petersson_norm(f: &Coefficients, weight: u32, digits: u32) -> Result<PeterssonNorm> {
    check_cusp_form(f, weight)?;
    let bits = bits_for(digits) + 64;
    let b = BOUND_BITS;
    let two_pi_b = Float::with_val(b, Constant::Pi) * 2u32;
    let scale = upper_gamma_integral(
        weight - 1,
        &Float::with_val(b, &two_pi_b * 2u32),
        &Float::with_val(b, 1),
        b,
    );
    let target = Float::with_val(b, 10).pow(-(digits as i32) - 5) * &scale;
    let mut terms = 8usize;
    let truncation = loop {
        if terms > f.order() {
            return Err(Error::PrecisionInfeasible(format!(
                "q-expansion through q^{} is too short for {digits} digits",
                f.order()
            )));
        }
        let bound = truncation_bound(f, weight, terms);
        if bound <= target {
            break bound;
        }
        terms += 4;
    };
    let a: Vec<Float> = (0..=terms).map(|n| f.to_float(n, bits)).collect();
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let big_k = weight - 1;
    let integrand = |x: &Float| -> Result<Float> {
        let y0 = Float::with_val(bits, 1u32 - Float::with_val(bits, x.square_ref())).sqrt();
        // cos(2π d x) for d = 0..terms
        let theta = Float::with_val(bits, &two_pi * x);
        let c1 = Float::with_val(bits, theta.cos_ref());
        let mut cosines = vec![Float::with_val(bits, 1), c1.clone()];
        for d in 2..terms {
            let next = Float::with_val(bits, &c1 * &cosines[d - 1]) * 2u32 - &cosines[d - 2];
            cosines.push(next);
        }
        let mut total = Float::new(bits);
        for s in 2..=2 * terms {
            let lo = s.saturating_sub(terms).max(1);
            let hi = (s - 1).min(terms);
            let mut pair_sum = Float::new(bits);
            for m in lo..=hi {
                let d = (2 * m as i64 - s as i64).unsigned_abs() as usize;
                pair_sum += Float::with_val(bits, &a[m] * &a[s - m]) * &cosines[d];
            }
            if pair_sum.is_zero() {
                continue;
            }
            let c = Float::with_val(bits, &two_pi * s as u32);
            total += pair_sum * upper_gamma_integral(big_k, &c, &y0, bits);
        }
        Ok(total)
    };
    let tol = Float::with_val(bits, 10).pow(-(digits as i32) - 3);
    let q = tanh_sinh(
        integrand,
        &Float::new(bits),
        &Float::with_val(bits, 0.5),
        bits,
        &tol,
    )?;
    Ok(PeterssonNorm {
        value: RealHP::new(q.value * 2u32, digits),
        terms,
        truncation_bound: truncation,
        quadrature_error: Float::with_val(b, &q.error_estimate * 2u32),
    })
}

/// `‖f‖` by two-dimensional quadrature of the truncated `q`-series over
/// `0 ≤ x ≤ 1/2`, `√(1-x²) ≤ y ≤ y_max`, doubled by symmetry.
///
/// Independent of [`petersson_norm`]; used to cross-check it. The part
/// `y > y_max` is dropped.
pub fn petersson_norm_direct(
    f: &Coefficients,
    weight: u32,
    digits: u32,
    y_max: f64,
    terms: usize,
) -> Result<RealHP> {
    check_cusp_form(f, weight)?;
    if terms > f.order() {
        return Err(Error::Truncation {
            needed: terms,
            have: f.order(),
        });
    }
    if y_max <= 1.0 {
        return Err(invalid(format!("y_max must exceed 1, got {y_max}")));
    }
    let bits = bits_for(digits) + 32;
    let a: Vec<Float> = (0..=terms).map(|n| f.to_float(n, bits)).collect();
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let tol = Float::with_val(bits, 10).pow(-(digits as i32) - 2);
    let y_top = Float::with_val(bits, y_max);
    let modulus_sq = |x: &Float, y: &Float| -> Float {
        let q_abs = Float::with_val(bits, -Float::with_val(bits, &two_pi * y)).exp();
        let theta = Float::with_val(bits, &two_pi * x);
        let (c1, s1) = (
            Float::with_val(bits, theta.cos_ref()),
            Float::with_val(bits, theta.sin_ref()),
        );
        let (mut re, mut im) = (Float::new(bits), Float::new(bits));
        let (mut cn, mut sn) = (c1.clone(), s1.clone());
        let mut r = q_abs.clone();
        for coeff in a.iter().skip(1) {
            let w = Float::with_val(bits, coeff * &r);
            re += Float::with_val(bits, &w * &cn);
            im += w * &sn;
            let next_c = Float::with_val(bits, &cn * &c1) - Float::with_val(bits, &sn * &s1);
            let next_s = Float::with_val(bits, &sn * &c1) + Float::with_val(bits, &cn * &s1);
            cn = next_c;
            sn = next_s;
            r *= &q_abs;
        }
        re.square() + im.square()
    };
    let outer = |x: &Float| -> Result<Float> {
        let y0 = Float::with_val(bits, 1u32 - Float::with_val(bits, x.square_ref())).sqrt();
        let inner = |y: &Float| -> Result<Float> {
            Ok(modulus_sq(x, y) * Float::with_val(bits, y.pow(weight as i32 - 2)))
        };
        Ok(tanh_sinh(inner, &y0, &y_top, bits, &tol)?.value)
    };
    let q = tanh_sinh(
        outer,
        &Float::new(bits),
        &Float::with_val(bits, 0.5),
        bits,
        &tol,
    )?;
    Ok(RealHP::new(q.value * 2u32, digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{cusp_eigenform_1dim, delta_series};

    #[test]
    fn delta_norm_matches_known_value() {
        let f = Coefficients::Exact(delta_series(80));
        let n = petersson_norm(&f, 12, 40).unwrap();
        let known = Float::with_val(
            200,
            Float::parse("1.035362056804320922347816812225e-6").unwrap(),
        );
        let rel = Float::with_val(200, n.value.value() - &known).abs() / &known;
        assert!(rel < 1e-29, "{}", n.value.to_decimal());
        assert!(*n.value.value() > 0);
    }

    #[test]
    fn routes_agree() {
        let f = Coefficients::Exact(delta_series(40));
        let semi = petersson_norm(&f, 12, 30).unwrap();
        let direct = petersson_norm_direct(&f, 12, 20, 9.0, 20).unwrap();
        let rel =
            Float::with_val(200, semi.value.value() - direct.value()).abs() / semi.value.value();
        assert!(rel < 1e-15, "{}", rel.to_f64());
    }

    #[test]
    fn direct_route_is_stable_under_doubling() {
        let t = cusp_eigenform_1dim(16, 80).unwrap();
        let f = &t.forms[0].coeffs;
        let a = petersson_norm_direct(f, 16, 20, 8.0, 25).unwrap();
        let b = petersson_norm_direct(f, 16, 20, 16.0, 50).unwrap();
        let rel = Float::with_val(200, a.value() - b.value()).abs() / b.value();
        assert!(rel < 1e-10, "{}", rel.to_f64());
    }

    #[test]
    fn too_short_expansion() {
        let f = Coefficients::Exact(delta_series(6));
        assert!(matches!(
            petersson_norm(&f, 12, 40),
            Err(Error::PrecisionInfeasible(_))
        ));
        let e4 = crate::modular::eisenstein(4, 20).unwrap().series;
        assert!(petersson_norm(&Coefficients::Exact(e4), 12, 30).is_err());
    }
}
