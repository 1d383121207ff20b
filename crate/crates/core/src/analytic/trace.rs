//! Weighted sums `𝓓_f` over a Hecke eigenbasis, the traces `Tr_{2v}(n)`,
//! and the numerical check of the trace form of the `𝔭_3` recurrence.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::dirichlet::{
    weighted_sum_df_with_norm, TruncationParams, WeightedSum, WeightedSumReport,
};
use super::petersson::{petersson_norm, PeterssonNorm, PeterssonReport};
use super::real::{bits_for, format_float, RealHP};
use crate::error::{invalid, Result};
use crate::modular::{cusp_dim, eigenforms_numeric, Coefficients, EigenformTable, EigenvalueLabel};
use crate::partitions::{oracle_colored, Status};
use crate::rankin_cohen::recurrence_parts;

const BOUND_BITS: u32 = 128;

/// `𝓓_f(M,N)` for a normalized eigenform of weight `2v`, with its norm
/// computed in place.
pub fn weighted_sum_df(v: u32, f: &Coefficients, params: &TruncationParams) -> Result<WeightedSum> {
    let norm = petersson_norm(f, 2 * v, params.prec)?;
    weighted_sum_df_with_norm(v, f, &norm.value, params)
}

#[derive(Clone, Debug)]
pub struct FormContribution {
    pub a2: EigenvalueLabel,
    pub norm: PeterssonNorm,
    pub weighted: WeightedSum,
}

/// Everything needed to evaluate `Tr_{2v}(n)` for many `n`.
#[derive(Clone, Debug)]
pub struct TraceData {
    pub v: u32,
    pub params: TruncationParams,
    pub table: EigenformTable,
    pub forms: Vec<FormContribution>,
}

fn check_trace_weight(v: u32) -> Result<()> {
    if v == 6 || v >= 8 {
        Ok(())
    } else {
        Err(invalid(format!(
            "Hecke traces are taken for v = 6 or v ≥ 8, got {v}"
        )))
    }
}

impl TraceData {
    /// Coefficient order the eigenform table needs for `n ≤ n_max`.
    pub fn required_order(v: u32, n_max: u64, params: &TruncationParams) -> usize {
        params
            .max_index()
            .max(n_max as usize)
            .max(2 * (cusp_dim(2 * v) + 1))
    }

    /// Working digits used for the eigenform table.
    pub fn table_digits(params: &TruncationParams) -> u32 {
        params.prec + 10
    }

    /// Eigenforms with coefficients through `max((N²-1)/8, n_max)`, their
    /// norms and weighted sums.
    pub fn build(v: u32, n_max: u64, params: &TruncationParams) -> Result<Self> {
        params.validate()?;
        check_trace_weight(v)?;
        let order = Self::required_order(v, n_max, params);
        let table = eigenforms_numeric(2 * v, order, Self::table_digits(params))?;
        Self::from_table(v, table, params)
    }

    /// Same as [`TraceData::build`] with a precomputed eigenform table.
    pub fn from_table(v: u32, table: EigenformTable, params: &TruncationParams) -> Result<Self> {
        params.validate()?;
        check_trace_weight(v)?;
        if table.weight != 2 * v {
            return Err(invalid(format!(
                "eigenform table has weight {}, expected {}",
                table.weight,
                2 * v
            )));
        }
        if table.order() < params.max_index() {
            return Err(crate::error::Error::Truncation {
                needed: params.max_index(),
                have: table.order(),
            });
        }
        let forms = table
            .forms
            .iter()
            .map(|f| {
                let norm = petersson_norm(&f.coeffs, 2 * v, params.prec)?;
                let weighted = weighted_sum_df_with_norm(v, &f.coeffs, &norm.value, params)?;
                Ok(FormContribution {
                    a2: f.a2.clone(),
                    norm,
                    weighted,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            v,
            params: *params,
            table,
            forms,
        })
    }

    /// `Tr_{2v}(n) = Σ_f 𝓓_f a_f(n)` and the propagated tail bound
    /// `Σ_f tail_f |a_f(n)|`.
    pub fn trace(&self, n: u64) -> Result<(RealHP, Float)> {
        let digits = self
            .forms
            .iter()
            .map(|f| f.weighted.value.digits())
            .min()
            .unwrap_or(self.params.prec);
        let bits = bits_for(self.params.prec) + 64;
        let mut acc = Float::new(bits);
        let mut tail = Float::new(BOUND_BITS);
        for (form, c) in self.table.forms.iter().zip(&self.forms) {
            if (n as usize) > form.coeffs.order() {
                return Err(crate::error::Error::Truncation {
                    needed: n as usize,
                    have: form.coeffs.order(),
                });
            }
            let a = form.coeffs.to_float(n as usize, bits);
            acc += Float::with_val(bits, c.weighted.value.value() * &a);
            tail += c.weighted.tail_bound() * Float::with_val(BOUND_BITS, a.abs_ref());
        }
        Ok((RealHP::new(acc, digits), tail))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeckeTrace {
    pub value: RealHP,
    pub tail_bound: Float,
}

/// `Tr_{2v}(n)` at the given truncation.
pub fn hecke_trace(v: u32, n: u64, params: &TruncationParams) -> Result<HeckeTrace> {
    if n == 0 {
        return Err(invalid("Tr_{2v}(n) needs n ≥ 1"));
    }
    let data = TraceData::build(v, n, params)?;
    let (value, tail_bound) = data.trace(n)?;
    Ok(HeckeTrace { value, tail_bound })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSummary {
    pub a2: String,
    pub norm: PeterssonReport,
    pub weighted_sum: WeightedSumReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem3Report {
    pub v: u32,
    pub n_max: u64,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub prec: u32,
    /// Largest `|𝔭_3(n) - predicted|` over `1 ≤ n ≤ n_max`.
    pub max_residual: String,
    /// Largest per-`n` tolerance: propagated truncation bound plus the
    /// working-precision floor.
    pub tail_bound: String,
    /// Largest residual-to-tolerance ratio; at most 1 on success.
    pub worst_ratio: String,
    pub worst_n: u64,
    pub status: Status,
    pub forms: Vec<FormSummary>,
    /// Truncation bounds are Deligne-bound estimates, not certified
    /// enclosures.
    pub bounds: String,
}

/// Evaluates, for `1 ≤ n ≤ n_max`, the residual
/// `𝔭_3(n) - [-(4v 𝓔_v(0,0)/B_{2v}) σ_{2v-1}(n) + Tr_{2v}(n) + Σ_{k≥1} (-1)^{k+1} 𝓔_v(n,k) 𝔭_3(n-T_k)] / 𝓔_v(n,0)`
/// and compares it with the propagated truncation bound.
pub fn verify_theorem3(v: u32, n_max: u64, params: &TruncationParams) -> Result<Theorem3Report> {
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    TraceData::build(v, n_max, params)?.verify(n_max)
}

impl TraceData {
    /// The residual check behind [`verify_theorem3`] on prepared data.
    pub fn verify(&self, n_max: u64) -> Result<Theorem3Report> {
        if n_max == 0 {
            return Err(invalid("n_max must be at least 1"));
        }
        let data = self;
        let (v, params) = (self.v, &self.params);
        let p3 = oracle_colored(3, n_max as usize)?;
        let b = BOUND_BITS;
        let bits = bits_for(params.prec) + 64;
        let mut max_residual = Float::new(b);
        let mut max_tol = Float::new(b);
        let mut worst_ratio = Float::new(b);
        let mut worst_n = 1;
        for n in 1..=n_max {
            let (x, e0) = recurrence_parts(v, n, &p3)?;
            // exact cusp coefficient implied by the table value of 𝔭_3(n)
            let target = Float::with_val(bits, &(e0.clone() * p3.values()[n as usize].clone() - x));
            let (trace, tail) = data.trace(n)?;
            let e0_abs = Float::with_val(b, &e0).abs();
            let residual =
                Float::with_val(b, Float::with_val(bits, &target - trace.value()).abs()) / &e0_abs;
            let floor = Float::with_val(b, target.abs_ref())
                * Float::with_val(b, 10).pow(-(trace.digits() as i32) + 5);
            let tol = (tail + floor) / &e0_abs;
            let ratio = if tol.is_zero() {
                Float::with_val(b, f64::INFINITY)
            } else {
                Float::with_val(b, &residual / &tol)
            };
            if residual > max_residual {
                max_residual = residual;
            }
            if tol > max_tol {
                max_tol = tol;
            }
            if ratio > worst_ratio {
                worst_ratio = ratio;
                worst_n = n;
            }
        }
        let forms = data
            .forms
            .iter()
            .map(|f| FormSummary {
                a2: match &f.a2 {
                    EigenvalueLabel::Exact(r) => crate::arith::rat_to_string(r),
                    EigenvalueLabel::Numeric(x) => x.to_decimal(),
                },
                norm: (&f.norm).into(),
                weighted_sum: (&f.weighted).into(),
            })
            .collect();
        Ok(Theorem3Report {
            v,
            n_max,
            m: params.m,
            n: params.n,
            prec: params.prec,
            max_residual: format_float(&max_residual, 6),
            tail_bound: format_float(&max_tol, 6),
            worst_ratio: format_float(&worst_ratio, 6),
            worst_n,
            status: Status::from_bool(worst_ratio <= 1),
            forms,
            bounds: "heuristic: Deligne-bound tails, coefficients taken at working precision"
                .into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rankin_cohen::beta;

    fn small() -> TruncationParams {
        TruncationParams::new(30, 61, 30).unwrap()
    }

    #[test]
    fn weight_restrictions() {
        assert!(hecke_trace(7, 2, &small()).is_err());
        assert!(hecke_trace(5, 2, &small()).is_err());
        assert!(hecke_trace(6, 0, &small()).is_err());
    }

    #[test]
    fn dim_one_trace_is_scaled_coefficient() {
        let p = small();
        let data = TraceData::build(6, 10, &p).unwrap();
        let d = data.forms[0].weighted.value.to_f64();
        let (t2, _) = data.trace(2).unwrap();
        assert!((t2.to_f64() - d * -24.0).abs() < 1e-9 * d.abs() * 24.0);
        // truncated 𝓓_Δ approaches β_6 within its own tail bound
        let b6 = beta(6).unwrap().to_f64();
        let bound = data.forms[0].weighted.tail_bound().to_f64();
        assert!((d - b6).abs() <= bound, "{d} vs {b6}, bound {bound}");
    }

    #[test]
    fn small_truncation_verifies() {
        let r = verify_theorem3(6, 12, &small()).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        let j = serde_json::to_value(&r).unwrap();
        for key in [
            "v",
            "n_max",
            "M",
            "N",
            "prec",
            "max_residual",
            "tail_bound",
            "status",
        ] {
            assert!(j.get(key).is_some(), "{key}");
        }
    }
}
