//! Double-exponential quadrature: tanh-sinh on finite intervals and
//! exp-sinh on half-lines.

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

const MAX_LEVEL: u32 = 14;
const MIN_LEVEL: u32 = 3;

#[derive(Clone, Debug)]
pub struct Quadrature {
    pub value: Float,
    /// Difference between the last two refinement levels.
    pub error_estimate: Float,
    pub level: u32,
}

/// Half-width of the `t` window past which nodes hit the endpoints at
/// `bits` of precision.
fn window(bits: u32) -> f64 {
    let reach = 2.0 * bits as f64 * std::f64::consts::LN_2 / std::f64::consts::PI;
    reach.asinh() + 1.0
}

fn converged(prev: &Float, cur: &Float, tol: &Float) -> bool {
    let diff = Float::with_val(cur.prec(), cur - prev).abs();
    diff <= Float::with_val(cur.prec(), cur.abs_ref()) * tol
}

/// Refines `h = 2^{-level}` until successive estimates agree to relative
/// `tol`. `node_sum(level, offset_only)` returns `h`-less sums over the
/// nodes of that level (all nodes, or only the odd multiples).
fn refine(
    bits: u32,
    tol: &Float,
    mut node_sum: impl FnMut(u32, bool) -> Result<Float>,
) -> Result<Quadrature> {
    let mut raw = node_sum(0, false)?;
    let mut estimate = raw.clone();
    for level in 1..=MAX_LEVEL {
        raw += node_sum(level, true)?;
        let h = Float::with_val(bits, Float::i_exp(1, -(level as i32)));
        let next = Float::with_val(bits, &raw * &h);
        if level >= MIN_LEVEL && converged(&estimate, &next, tol) {
            let error_estimate = Float::with_val(bits, &next - &estimate).abs();
            return Ok(Quadrature {
                value: next,
                error_estimate,
                level,
            });
        }
        estimate = next;
    }
    Err(Error::PrecisionInfeasible(format!(
        "double-exponential quadrature did not reach relative tolerance {} by level {MAX_LEVEL}",
        tol.to_f64()
    )))
}

/// `∫_a^b f(x) dx` by tanh-sinh at `bits` of working precision.
pub fn tanh_sinh(
    f: impl Fn(&Float) -> Result<Float>,
    a: &Float,
    b: &Float,
    bits: u32,
    tol: &Float,
) -> Result<Quadrature> {
    let half_pi = Float::with_val(bits, Constant::Pi) / 2u32;
    let rad = Float::with_val(bits, b - a) / 2u32;
    let t_max = window(bits);
    let node = |t: &Float| -> Result<Float> {
        // x = mid ± rad·(1 - δ), δ = 2/(1 + e^{2u}), u = (π/2) sinh|t|
        let u = Float::with_val(bits, t.abs_ref()).sinh() * &half_pi;
        let e2u = Float::with_val(bits, &u * 2u32).exp();
        let delta = Float::with_val(bits, 2u32) / (Float::with_val(bits, &e2u + 1u32));
        let cosh_u = Float::with_val(bits, u.cosh_ref());
        let w = Float::with_val(bits, t.cosh_ref()) * &half_pi / cosh_u.square() * &rad;
        if w.is_zero() {
            return Ok(Float::new(bits));
        }
        let offset = Float::with_val(bits, &rad * &delta);
        let x = if *t >= 0 {
            Float::with_val(bits, b - &offset)
        } else {
            Float::with_val(bits, a + &offset)
        };
        if x <= *a || x >= *b {
            return Ok(Float::new(bits));
        }
        Ok(f(&x)? * w)
    };
    refine(bits, tol, |level, odd_only| {
        let steps = (t_max * (1u64 << level) as f64).ceil() as i64;
        let mut acc = Float::new(bits);
        for k in -steps..=steps {
            if odd_only && k % 2 == 0 {
                continue;
            }
            let t = Float::with_val(bits, k) / Float::with_val(bits, Float::i_exp(1, level as i32));
            acc += node(&t)?;
        }
        Ok(acc)
    })
}

/// `∫_a^∞ f(x) dx` by exp-sinh, for integrands decaying at least
/// exponentially. Nodes beyond the point where two consecutive
/// contributions at the coarsest level fall below `2^{-bits}` of the running
/// sum are dropped.
pub fn exp_sinh(
    f: impl Fn(&Float) -> Result<Float>,
    a: &Float,
    bits: u32,
    tol: &Float,
) -> Result<Quadrature> {
    let half_pi = Float::with_val(bits, Constant::Pi) / 2u32;
    let t_min = -window(bits);
    let node = |t: &Float| -> Result<Float> {
        let e = Float::with_val(bits, t.sinh_ref()) * &half_pi;
        let e = e.exp();
        if e.is_zero() {
            return Ok(Float::new(bits));
        }
        let w = Float::with_val(bits, t.cosh_ref()) * &half_pi * &e;
        let x = Float::with_val(bits, a + &e);
        Ok(f(&x)? * w)
    };
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));
    // Upper window from the coarsest grid.
    let mut t_max = 0.0f64;
    let mut running = Float::new(bits);
    let mut quiet = 0;
    let mut k = 0i64;
    while quiet < 2 {
        let t = Float::with_val(bits, k);
        let c = node(&t)?;
        running += &c;
        if Float::with_val(bits, c.abs_ref()) <= Float::with_val(bits, running.abs_ref()) * &eps
            && k > 0
        {
            quiet += 1;
        } else {
            quiet = 0;
        }
        t_max = k as f64;
        k += 1;
        if k > 12 {
            return Err(Error::PrecisionInfeasible(
                "exp-sinh integrand does not decay".into(),
            ));
        }
    }
    refine(bits, tol, |level, odd_only| {
        let scale = (1u64 << level) as f64;
        let lo = (t_min * scale).floor() as i64;
        let hi = (t_max * scale).ceil() as i64;
        let mut acc = Float::new(bits);
        for k in lo..=hi {
            if odd_only && k % 2 == 0 {
                continue;
            }
            let t = Float::with_val(bits, k) / Float::with_val(bits, Float::i_exp(1, level as i32));
            acc += node(&t)?;
        }
        Ok(acc)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn finite_interval() {
        let bits = 256;
        let tol = Float::with_val(bits, 1e-60);
        let zero = Float::new(bits);
        let one = Float::with_val(bits, 1);
        // ∫_0^1 √x ln x dx = -4/9, with an endpoint singularity
        let q = tanh_sinh(
            |x| Ok(Float::with_val(bits, x.sqrt_ref()) * Float::with_val(bits, x.ln_ref())),
            &zero,
            &one,
            bits,
            &tol,
        )
        .unwrap();
        let expected = Float::with_val(bits, -4) / 9u32;
        assert!(Float::with_val(bits, &q.value - &expected).abs() < 1e-55);
        // ∫_0^{1/2} 1/(1+x²) dx = atan(1/2)
        let half = Float::with_val(bits, 0.5);
        let q = tanh_sinh(
            |x| Ok(Float::with_val(bits, 1) / (Float::with_val(bits, x.square_ref()) + 1u32)),
            &zero,
            &half,
            bits,
            &tol,
        )
        .unwrap();
        assert!(Float::with_val(bits, &q.value - half.atan()).abs() < 1e-55);
    }

    #[test]
    fn half_line() {
        let bits = 256;
        let tol = Float::with_val(bits, 1e-60);
        let zero = Float::new(bits);
        // ∫_0^∞ x^{5/2} e^{-3x} dx = Γ(7/2)/3^{7/2}
        let q = exp_sinh(
            |x| {
                let p = Float::with_val(bits, x).pow(Float::with_val(bits, 2.5));
                Ok(p * (Float::with_val(bits, x * 3u32) * -1i32).exp())
            },
            &zero,
            bits,
            &tol,
        )
        .unwrap();
        let expected = Float::with_val(bits, 3.5).gamma()
            / Float::with_val(bits, 3).pow(Float::with_val(bits, 3.5));
        let rel = Float::with_val(bits, &q.value - &expected).abs() / &expected;
        assert!(rel < 1e-55, "{}", rel.to_f64());
    }
}
