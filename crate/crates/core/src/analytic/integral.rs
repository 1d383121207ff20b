//! The Whittaker integral `𝓘(r,n)`, the weights `ω_v(n)` and the exact
//! coefficients `Ẽ_v(j,m)`.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::hyper::{hyp2f1, whittaker_m};
use super::quad::exp_sinh;
use super::real::{bits_for, RealHP};
use crate::arith::{binomial, factorial, rising, Rat};
use crate::error::{invalid, Error, Result};
use crate::halfgamma::{gamma_half, HalfGammaRatio, PiRat};

fn check_rn(r: u32, n: u64, v: u32) -> Result<()> {
    if n <= 1 {
        return Err(Error::Domain(format!("𝓘(r,n) needs n > 1, got {n}")));
    }
    if r > v {
        return Err(invalid(format!("need 0 ≤ r ≤ v, got r = {r}, v = {v}")));
    }
    Ok(())
}

fn half(x: i64) -> Rat {
    Rational::from((x, 2))
}

/// `(2/π)^{2v-1}` at `bits`.
fn two_over_pi_pow(v: u32, bits: u32) -> Float {
    let pi = Float::with_val(bits, Constant::Pi);
    (Float::with_val(bits, 2) / pi).pow(2 * v as i32 - 1)
}

/// `𝓘(r,n) = ∫_0^∞ (πy/2)^{3/4-r/2} M_{3/4-r/2, 5/4-r/2}(πy/2) e^{-π(2n²-1)y/4} y^{2v-2} dy`
/// by exp-sinh quadrature in `y`.
pub fn integral_i_quadrature(r: u32, n: u64, v: u32, digits: u32) -> Result<RealHP> {
    check_rn(r, n, v)?;
    // Near y = 0 the integrand behaves like y^{2v-r+1/2}.
    let exponent = 2 * v as i64 - r as i64;
    if exponent < 0 {
        return Err(Error::Domain(format!(
            "integrand is not integrable at 0 for r = {r}, v = {v}"
        )));
    }
    let bits = bits_for(digits) + 32;
    let pi_half = Float::with_val(bits, Constant::Pi) / 2u32;
    let lambda = Float::with_val(bits, &Rational::from((3 - 2 * r as i64, 4)));
    let mu = Float::with_val(bits, &Rational::from((5 - 2 * r as i64, 4)));
    let power = Float::with_val(bits, &lambda);
    let decay = Float::with_val(bits, Constant::Pi) * Integer::from(2 * n * n - 1) / 4u32;
    // |M(t)| ≤ e^{t/2}·poly(t), so the integrand is below e^{-(n²-1)t}·poly(t);
    // past this point it underflows the working precision.
    let cutoff = |t: f64| {
        (n * n - 1) as f64 * t - (2 * v + 3) as f64 * t.max(1.0).ln() > bits as f64 * 0.7 + 50.0
    };
    let integrand = |y: &Float| -> Result<Float> {
        let t = Float::with_val(bits, y * &pi_half);
        if cutoff(t.to_f64()) {
            return Ok(Float::new(bits));
        }
        let m = whittaker_m(&lambda, &mu, &t, digits + 10)?;
        let lead = Float::with_val(bits, t.pow(&power));
        let damp = (Float::with_val(bits, y * &decay) * -1i32).exp();
        let yp = Float::with_val(bits, y.pow(2 * v as i32 - 2));
        Ok(lead * m.value() * damp * yp)
    };
    let tol = Float::with_val(bits, 10).pow(-(digits as i32) - 2);
    let q = exp_sinh(integrand, &Float::new(bits), bits, &tol)?;
    Ok(RealHP::new(q.value, digits))
}

/// `𝓘(r,n) = (2/π)^{2v-1} Γ(2v-r+3/2) n^{-(4v-2r+3)} ₂F₁(1, 3/2+2v-r; 7/2-r; 1/n²)`.
pub fn integral_i_closed(r: u32, n: u64, v: u32, digits: u32) -> Result<RealHP> {
    check_rn(r, n, v)?;
    let bits = bits_for(digits) + 32;
    let (g, sqrt_pi) = gamma_half(2 * (2 * v as i64 - r as i64) + 3)?;
    let mut gamma = Float::with_val(bits, &g);
    if sqrt_pi {
        gamma *= Float::with_val(bits, Constant::Pi).sqrt();
    }
    let f = hyp2f1_at(r, n, v, bits, digits + 5)?;
    let n_pow = Float::with_val(bits, n).pow(-(4 * v as i32 - 2 * r as i32 + 3));
    Ok(RealHP::new(
        two_over_pi_pow(v, bits) * gamma * n_pow * f.value(),
        digits,
    ))
}

fn hyp2f1_at(r: u32, n: u64, v: u32, bits: u32, digits: u32) -> Result<RealHP> {
    let one = Float::with_val(bits, 1);
    let b = Float::with_val(bits, &half(3 + 4 * v as i64 - 2 * r as i64));
    let c = Float::with_val(bits, &half(7 - 2 * r as i64));
    let z = Float::with_val(bits, Rational::from((1, Integer::from(n) * n)));
    hyp2f1(&one, &b, &c, &z, digits)
}

/// `c_{r,v-r} = Γ(v-3/2)Γ(v+3/2) / (s! r! Γ(r-3/2)Γ(s+3/2))`.
fn c_rs(v: u32, r: u32) -> Rat {
    let s = v - r;
    HalfGammaRatio::new()
        .num(2 * v as i64 - 3)
        .num(2 * v as i64 + 3)
        .den(2 * r as i64 - 3)
        .den(2 * s as i64 + 3)
        .times(Rational::from((1, factorial(r) * factorial(s))))
        .reduce()
        .expect("half-integer Γ arguments pair up")
}

fn check_omega(v: u32, n: u64) -> Result<()> {
    if v < 2 {
        return Err(invalid(format!("ω_v needs v ≥ 2, got {v}")));
    }
    if n <= 1 || n.is_multiple_of(2) {
        return Err(Error::Domain(format!("ω_v(n) needs odd n > 1, got {n}")));
    }
    Ok(())
}

/// `ω_v(n) = Σ_r (-1)^r c_{r,v-r} (-5/2)^{(r)} Γ(3/2+2v-r) ₂F₁(1, 3/2+2v-r; 7/2-r; 1/n²)`.
pub fn omega_path_a(v: u32, n: u64, digits: u32) -> Result<RealHP> {
    check_omega(v, n)?;
    let bits = bits_for(digits) + 64;
    let sqrt_pi = Float::with_val(bits, Constant::Pi).sqrt();
    let mut acc = Float::new(bits);
    for r in 0..=v {
        let mut w = c_rs(v, r) * rising(&half(-5), r);
        if r % 2 == 1 {
            w = -w;
        }
        let (g, has_sqrt_pi) = gamma_half(3 + 4 * v as i64 - 2 * r as i64)?;
        let mut term = Float::with_val(bits, &(w * g));
        if has_sqrt_pi {
            term *= &sqrt_pi;
        }
        term *= hyp2f1_at(r, n, v, bits, digits + 20)?.value();
        acc += term;
    }
    Ok(RealHP::new(acc, digits))
}

/// `Γ(v-3/2)Γ(v+3/2)/Γ(-3/2)` as a rational multiple of `√π`.
fn omega_prefactor(v: u32) -> Rat {
    HalfGammaRatio::new()
        .num(2 * v as i64 - 3)
        .num(2 * v as i64 + 3)
        .den(-3)
        .den(1)
        .reduce()
        .expect("paired with Γ(1/2)")
}

/// Inner rational weight of the `i`-th term of the rearranged form:
/// `C(2v-2,i) (v-i-1)^{(v)} (5/2)^{(i)} / ((-3/2-i)^{(v)} (7/2)^{(i)})` with sign `(-1)^i`.
fn omega_inner(v: u32, i: u32) -> Rat {
    let num = Rational::from(binomial(2 * v - 2, i))
        * rising(&Rational::from(v as i64 - i as i64 - 1), v)
        * rising(&half(5), i);
    let den = rising(&half(-3 - 2 * i as i64), v) * rising(&half(7), i);
    let w = num / den;
    if i % 2 == 1 {
        -w
    } else {
        w
    }
}

/// `ω_v(n)` from the double sum over `0 ≤ i ≤ v-2`, `m ≥ 0` of
/// `(-1)^i n^{-2i-2m} C(2v-2,i) C(2v+m-2,m) (v-i-1)^{(v)} (5/2)^{(i)} / ((-3/2-i)^{(v)} (7/2)^{(i)})`,
/// times `Γ(v-3/2)Γ(v+3/2)/Γ(-3/2)`. The `m`-sum stops once its geometric
/// tail is below the target precision.
pub fn omega_path_b(v: u32, n: u64, digits: u32) -> Result<RealHP> {
    check_omega(v, n)?;
    let bits = bits_for(digits) + 64;
    let x = Float::with_val(bits, Rational::from((1, Integer::from(n) * n)));
    let inner: Float = (0..=v - 2).fold(Float::new(bits), |acc, i| {
        acc + Float::with_val(bits, &omega_inner(v, i)) * Float::with_val(bits, x.clone().pow(i))
    });
    // Σ_m C(2v+m-2, m) x^m; term ratio (2v+m-1)x/(m+1) decreases in m.
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));
    let mut term = Float::with_val(bits, 1);
    let mut geom = Float::with_val(bits, 1);
    let mut m = 0u64;
    loop {
        let ratio = (2 * v as u64 + m - 1) as f64 / (m + 1) as f64 / (n * n) as f64;
        if ratio < 1.0 {
            let tail = Float::with_val(bits, &term * (ratio / (1.0 - ratio)));
            if tail <= Float::with_val(bits, &geom * &eps) {
                break;
            }
        }
        term *= 2 * v as u64 + m - 1;
        term /= m + 1;
        term *= &x;
        geom += &term;
        m += 1;
    }
    let pre =
        Float::with_val(bits, &omega_prefactor(v)) * Float::with_val(bits, Constant::Pi).sqrt();
    Ok(RealHP::new(pre * inner * geom, digits))
}

/// `lim_{n→∞} ω_v(n)`: the `i = 0`, `m = 0` term.
pub fn omega_limit(v: u32, digits: u32) -> Result<RealHP> {
    if v < 2 {
        return Err(invalid(format!("ω_v needs v ≥ 2, got {v}")));
    }
    let bits = bits_for(digits) + 32;
    let r = omega_prefactor(v) * omega_inner(v, 0);
    Ok(RealHP::new(
        Float::with_val(bits, &r) * Float::with_val(bits, Constant::Pi).sqrt(),
        digits,
    ))
}

/// Exact `Ẽ_v(j,m)` as a rational times `π^{-(2v-1)}`.
pub fn etilde(v: u32, j: u32, m: u32) -> Result<PiRat> {
    if v < 2 {
        return Err(invalid(format!("Ẽ_v needs v ≥ 2, got {v}")));
    }
    if j > v - 2 {
        return Err(invalid(format!(
            "Ẽ_v(j,m) needs j ≤ v-2 = {}, got {j}",
            v - 2
        )));
    }
    let gammas = HalfGammaRatio::new()
        .num(2 * v as i64 - 3)
        .num(2 * v as i64 + 3)
        .den(7)
        .den(-3)
        .reduce()?;
    let counting = Rational::from((
        factorial(2 * v + m - 2),
        factorial(j) * factorial(m) * factorial(2 * v - j - 2),
    ));
    let num = rising(&Rational::from(v as i64 - j as i64 - 1), v) * rising(&half(5), j);
    let den = rising(&half(-3 - 2 * j as i64), v) * rising(&half(7), j);
    let two_pow = Integer::from(1) << (2 * v - 1);
    let eight_pow = Integer::from(8).pow(v);
    let mut r = gammas * counting * num / den * Rational::from((two_pow, eight_pow));
    if j % 2 == 1 {
        r = -r;
    }
    Ok(PiRat::new(r, -(2 * v as i32 - 1)))
}
