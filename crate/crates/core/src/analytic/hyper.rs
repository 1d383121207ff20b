//! Hypergeometric series `₁F₁`, `₂F₁` and the Whittaker function `M_{λ,μ}`.

use rug::ops::Pow;
use rug::Float;

use super::real::{bits_for, RealHP};
use crate::error::{invalid, Error, Result};

const MAX_TERMS: usize = 2_000_000;

fn is_nonpositive_integer(x: &Float) -> bool {
    x.is_integer() && *x <= 0
}

/// `Σ_k Π(num_i)_k / Π(den_j)_k · z^k / k!` with `num.len() ∈ {den.len(), den.len() + 1}`.
///
/// Terminates once the remaining terms are bounded below `2^{-target}`
/// relative, using the decreasing majorant
/// `g(k) = Π (k + A_i) / (Π (k - C_j) · (k + 1))` of the term ratio, where
/// `A_i = max(|a_i|, 1)` and `C_j = |b_j|`. Returns the sum and the largest
/// term magnitude.
fn pfq_sum(
    num: &[Float],
    den: &[Float],
    z: &Float,
    work: u32,
    target: u32,
) -> Result<(Float, Float)> {
    let big_a: Vec<f64> = num.iter().map(|a| a.to_f64().abs().max(1.0)).collect();
    let big_c: Vec<f64> = den.iter().map(|b| b.to_f64().abs()).collect();
    let c_max = big_c.iter().cloned().fold(0.0, f64::max);
    let z_abs = z.to_f64().abs();
    let majorant = |k: f64| -> f64 {
        let mut g = z_abs / (k + 1.0);
        for a in &big_a {
            g *= k + a;
        }
        for c in &big_c {
            g /= k - c;
        }
        g
    };
    let eps = Float::with_val(work, Float::i_exp(1, -(target as i32)));
    let mut term = Float::with_val(work, 1);
    let mut sum = Float::with_val(work, 1);
    let mut max_term = Float::with_val(work, 1);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        if kf > c_max + 1.0 {
            let rho = majorant(kf);
            if rho < 1.0 {
                let bound = Float::with_val(work, term.abs_ref()) * (rho / (1.0 - rho));
                if bound <= Float::with_val(work, sum.abs_ref()) * &eps {
                    return Ok((sum, max_term));
                }
            }
        }
        for a in num {
            term *= Float::with_val(work, a + k as u32);
        }
        for b in den {
            term /= Float::with_val(work, b + k as u32);
        }
        term *= z;
        term /= k as u32 + 1;
        if term.is_zero() {
            return Ok((sum, max_term));
        }
        sum += &term;
        let t_abs = Float::with_val(work, term.abs_ref());
        if t_abs > max_term {
            max_term = t_abs;
        }
    }
    Err(Error::PrecisionInfeasible(format!(
        "hypergeometric series did not settle within {MAX_TERMS} terms"
    )))
}

/// Evaluates the series, re-running with more guard bits when cancellation
/// between terms ate into the requested precision.
fn pfq(num: &[Float], den: &[Float], z: &Float, digits: u32) -> Result<RealHP> {
    if let Some(b) = den.iter().find(|b| is_nonpositive_integer(b)) {
        return Err(invalid(format!(
            "lower parameter {b} is a nonpositive integer"
        )));
    }
    let target = bits_for(digits);
    let mut guard = 32u32;
    loop {
        let work = target + guard;
        let (sum, max_term) = pfq_sum(num, den, z, work, target)?;
        if sum.is_zero() {
            return Ok(RealHP::new(sum, digits));
        }
        let loss = (max_term.get_exp().unwrap_or(0) - sum.get_exp().unwrap_or(0)).max(0) as u32;
        if loss + 8 <= guard {
            return Ok(RealHP::new(sum, digits));
        }
        guard = loss + 40;
    }
}

/// Confluent hypergeometric `₁F₁(a; b; z)`.
pub fn hyp1f1(a: &Float, b: &Float, z: &Float, digits: u32) -> Result<RealHP> {
    pfq(std::slice::from_ref(a), std::slice::from_ref(b), z, digits)
}

/// Gauss hypergeometric `₂F₁(a, b; c; z)` for `|z| < 1`.
pub fn hyp2f1(a: &Float, b: &Float, c: &Float, z: &Float, digits: u32) -> Result<RealHP> {
    if Float::with_val(z.prec(), z.abs_ref()) >= 1 {
        return Err(Error::Domain(format!(
            "₂F₁ series needs |z| < 1, got {}",
            z.to_f64()
        )));
    }
    pfq(&[a.clone(), b.clone()], std::slice::from_ref(c), z, digits)
}

/// Whittaker `M_{λ,μ}(z) = e^{-z/2} z^{μ+1/2} ₁F₁(μ-λ+1/2; 1+2μ; z)` for `z > 0`.
pub fn whittaker_m(lambda: &Float, mu: &Float, z: &Float, digits: u32) -> Result<RealHP> {
    if *z <= 0 {
        return Err(Error::Domain(format!(
            "M_{{λ,μ}}(z) needs z > 0, got {}",
            z.to_f64()
        )));
    }
    let bits = bits_for(digits) + 32;
    let a = Float::with_val(bits, mu - lambda) + 0.5f64;
    let b = Float::with_val(bits, mu * 2u32) + 1u32;
    if is_nonpositive_integer(&b) {
        return Err(invalid(format!("1 + 2μ = {b} is a pole")));
    }
    let f = hyp1f1(&a, &b, z, digits + 5)?;
    let half = Float::with_val(bits, mu + 0.5f64);
    let zb = Float::with_val(bits, z);
    let prefactor = (Float::with_val(bits, -&zb) / 2u32).exp() * zb.pow(&half);
    Ok(RealHP::new(prefactor * f.value(), digits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fl(x: f64, bits: u32) -> Float {
        Float::with_val(bits, x)
    }

    fn close(a: &Float, b: &Float, rel: f64) -> bool {
        let d = Float::with_val(a.prec(), a - b).abs();
        d <= Float::with_val(a.prec(), b.abs_ref()) * rel
    }

    #[test]
    fn trivial_values() {
        let bits = bits_for(40);
        let zero = Float::new(bits);
        let v = hyp2f1(&fl(0.3, bits), &fl(1.7, bits), &fl(2.5, bits), &zero, 40).unwrap();
        assert_eq!(*v.value(), 1);
        let half = fl(0.5, bits);
        let e = hyp1f1(&fl(2.25, bits), &fl(2.25, bits), &half, 40).unwrap();
        assert!(close(e.value(), &half.clone().exp(), 1e-38));
    }

    #[test]
    fn closed_forms() {
        let bits = bits_for(50);
        // ₂F₁(1, 1; 2; z) = -ln(1-z)/z
        let z = Float::with_val(bits, 1) / 3u32;
        let v = hyp2f1(&fl(1.0, bits), &fl(1.0, bits), &fl(2.0, bits), &z, 50).unwrap();
        let expected = -Float::with_val(bits, 1 - z.clone()).ln() / &z;
        assert!(close(v.value(), &expected, 1e-48));
        // ₁F₁(1; 2; z) = (e^z - 1)/z with heavy cancellation at negative z
        let z = fl(-30.0, bits);
        let v = hyp1f1(&fl(1.0, bits), &fl(2.0, bits), &z, 50).unwrap();
        let expected = (z.clone().exp() - 1u32) / &z;
        assert!(close(v.value(), &expected, 1e-48));
        // terminating series: ₂F₁(-2, b; c; z) is a quadratic
        let v = hyp2f1(
            &fl(-2.0, bits),
            &fl(1.0, bits),
            &fl(1.0, bits),
            &fl(0.5, bits),
            50,
        )
        .unwrap();
        assert!(close(v.value(), &fl(0.25, bits), 1e-48));
    }

    #[test]
    fn domain_and_poles() {
        let bits = bits_for(30);
        let one = fl(1.0, bits);
        assert!(matches!(
            hyp2f1(&one, &one, &fl(2.0, bits), &one, 30),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            hyp1f1(&one, &fl(-3.0, bits), &one, 30),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            whittaker_m(&one, &fl(-1.0, bits), &one, 30),
            Err(Error::InvalidParameter(_))
        ));
        assert!(whittaker_m(&one, &one, &fl(-1.0, bits), 30).is_err());
    }

    #[test]
    fn whittaker_positive_and_small_z() {
        let digits = 40;
        let bits = bits_for(digits);
        let (lam, mu) = (fl(0.75, bits), fl(1.25, bits));
        let pi_half = Float::with_val(bits, rug::float::Constant::Pi) / 2u32;
        let m = whittaker_m(&lam, &mu, &pi_half, digits).unwrap();
        assert!(m.value().is_finite() && *m.value() > 0);
        let z = Float::with_val(bits, 1e-6);
        let m = whittaker_m(&lam, &mu, &z, digits).unwrap();
        let lead = z.clone().pow(Float::with_val(bits, &mu + 0.5f64));
        assert!(close(m.value(), &lead, 1e-5));
    }

    #[test]
    fn whittaker_derivative_identity() {
        // d/dz [e^{z/2} z^{μ-1/2} M_{κ,μ}(z)] = 2μ e^{z/2} z^{μ-1} M_{κ-1/2,μ-1/2}(z)
        let digits = 50;
        let bits = bits_for(digits) + 64;
        for (kappa, mu, z) in [
            (0.75, 1.25, 1.3),
            (-0.25, 0.75, 0.6),
            (0.75 - 1.5, 1.25 - 1.5, 2.2),
        ] {
            let (kappa, mu, z) = (fl(kappa, bits), fl(mu, bits), fl(z, bits));
            let lhs_fn = |x: &Float| -> Float {
                let m = whittaker_m(&kappa, &mu, x, digits + 20).unwrap();
                let e = Float::with_val(bits, x / 2u32).exp();
                let p = Float::with_val(bits, x).pow(Float::with_val(bits, &mu - 0.5f64));
                e * p * m.value()
            };
            let h = Float::with_val(bits, Float::i_exp(1, -60));
            let xp = Float::with_val(bits, &z + &h);
            let xm = Float::with_val(bits, &z - &h);
            let deriv = (lhs_fn(&xp) - lhs_fn(&xm)) / (h * 2u32);
            let k2 = Float::with_val(bits, &kappa - 0.5f64);
            let m2 = Float::with_val(bits, &mu - 0.5f64);
            let rhs = whittaker_m(&k2, &m2, &z, digits).unwrap();
            let e = Float::with_val(bits, &z / 2u32).exp();
            let p = Float::with_val(bits, &z).pow(Float::with_val(bits, &mu - 1u32));
            let rhs = Float::with_val(bits, &mu * 2u32) * e * p * rhs.value();
            assert!(
                close(&deriv, &rhs, 1e-25),
                "{} vs {}",
                deriv.to_f64(),
                rhs.to_f64()
            );
        }
    }
}
