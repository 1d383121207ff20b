//! The four subcommands, each returning a serializable report.

use colorpart::analytic::dirichlet::{TruncationParams, WeightedSumReport};
use colorpart::analytic::petersson::PeterssonReport;
use colorpart::analytic::real::format_float;
use colorpart::analytic::trace::{Theorem3Report, TraceData};
use colorpart::arith::{parse_rat, rat_to_string};
use colorpart::fixtures::{ALPHA_BETA_ONE_CUSP_FORM, ALPHA_EISENSTEIN_ONLY};
use colorpart::modular::{eigenforms_numeric, EigenformTable, EigenvalueLabel};
use colorpart::partitions::{
    oracle, recurrence_for, sweep, PartitionKind, PartitionTable, Status, SweepReport,
};
use colorpart::rankin_cohen::{alpha, beta, verify_theorem2, Theorem2Report, ONE_CUSP_FORM};
use colorpart::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cache::Cache;
use crate::output::Tabular;

/// Exit status for a command outcome.
pub fn exit_code(result: &Result<Status>) -> i32 {
    match result {
        Ok(Status::Pass) => 0,
        Ok(Status::Fail) => 1,
        Err(
            Error::InvalidParameter(_)
            | Error::Domain(_)
            | Error::Parse(_)
            | Error::InsufficientTable { .. },
        ) => 2,
        Err(Error::PrecisionInfeasible(_)) => 3,
        Err(_) => 1,
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub fn partition_table(cache: &Cache, kind: PartitionKind, order: usize) -> Result<PartitionTable> {
    cache.get_or_compute(
        "partition-table",
        &json!({ "kind": kind, "order": order }),
        || oracle(kind, order),
    )
}

pub fn eigenform_table(
    cache: &Cache,
    weight: u32,
    order: usize,
    digits: u32,
) -> Result<EigenformTable> {
    let params = json!({ "weight": weight, "order": order, "digits": digits });
    cache.get_or_compute("eigenform-table", &params, || {
        eigenforms_numeric(weight, order, digits)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum KindArg {
    Colored,
    Regular,
    Ordinary,
}

pub fn partition_kind(kind: KindArg, t: Option<u32>) -> Result<PartitionKind> {
    match (kind, t) {
        (KindArg::Ordinary, None) => Ok(PartitionKind::Ordinary),
        (KindArg::Ordinary, Some(_)) => Err(usage("--t does not apply to ordinary partitions")),
        (_, None) => Err(usage("--t is required for colored and regular partitions")),
        (KindArg::Colored, Some(t @ (2 | 3))) => Ok(PartitionKind::Colored(t)),
        (KindArg::Colored, Some(t)) => Err(usage(format!(
            "recurrences exist for 2- and 3-colored partitions, got t = {t}"
        ))),
        (KindArg::Regular, Some(t)) if t >= 2 => Ok(PartitionKind::Regular(t)),
        (KindArg::Regular, Some(t)) => {
            Err(usage(format!("t-regular partitions need t ≥ 2, got {t}")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcountRow {
    pub n: u64,
    pub oracle: String,
    pub recurrence: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcountReport {
    pub kind: PartitionKind,
    pub n_max: u64,
    pub rows: Vec<PcountRow>,
    pub status: Status,
}

impl Tabular for PcountReport {
    fn table(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let header = ["n", "oracle", "recurrence", "match"]
            .map(String::from)
            .to_vec();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.oracle.clone(),
                    r.recurrence.clone(),
                    r.matches.to_string(),
                ]
            })
            .collect();
        (header, rows)
    }
}

pub fn pcount(cache: &Cache, kind: PartitionKind, n_max: u64) -> Result<PcountReport> {
    if n_max == 0 {
        return Err(usage("--n-max must be at least 1"));
    }
    let table = partition_table(cache, kind, n_max as usize)?;
    let rows = (1..=n_max)
        .map(|n| {
            let r = recurrence_for(n, &table)?;
            let o = &table.values()[n as usize];
            Ok(PcountRow {
                n,
                oracle: o.to_string(),
                recurrence: r.to_string(),
                matches: *o == r,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let status = Status::from_bool(rows.iter().all(|r| r.matches));
    Ok(PcountReport {
        kind,
        n_max,
        rows,
        status,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantRow {
    pub v: u32,
    pub alpha: String,
    pub beta: Option<String>,
    pub published_alpha: String,
    pub published_beta: Option<String>,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TablesReport {
    pub rows: Vec<ConstantRow>,
    pub status: Status,
}

impl Tabular for TablesReport {
    fn table(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let header = ["v", "alpha", "beta", "match"].map(String::from).to_vec();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.v.to_string(),
                    r.alpha.clone(),
                    r.beta.clone().unwrap_or_else(|| "-".into()),
                    if r.matches {
                        "yes".into()
                    } else {
                        format!(
                            "NO (published {} {:?})",
                            r.published_alpha, r.published_beta
                        )
                    },
                ]
            })
            .collect();
        (header, rows)
    }
}

/// Computed `α_v`, `β_v` next to the published values.
pub fn tables() -> Result<TablesReport> {
    let mut rows = Vec::new();
    for (v, a) in ALPHA_EISENSTEIN_ONLY {
        let alpha = alpha(v);
        rows.push(ConstantRow {
            v,
            matches: alpha == parse_rat(a)?,
            alpha: rat_to_string(&alpha),
            beta: None,
            published_alpha: a.into(),
            published_beta: None,
        });
    }
    for (v, a, b) in ALPHA_BETA_ONE_CUSP_FORM {
        let (alpha, beta) = (alpha(v), beta(v)?);
        rows.push(ConstantRow {
            v,
            matches: alpha == parse_rat(a)? && beta == parse_rat(b)?,
            alpha: rat_to_string(&alpha),
            beta: Some(rat_to_string(&beta)),
            published_alpha: a.into(),
            published_beta: Some(b.into()),
        });
    }
    rows.sort_by_key(|r| r.v);
    let status = Status::from_bool(rows.iter().all(|r| r.matches));
    Ok(TablesReport { rows, status })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TheoremArg {
    T1,
    Col3v0,
    T2,
    T3,
    T4,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "theorem", rename_all = "lowercase")]
pub enum VerifyReport {
    T1(SweepReport),
    Col3v0(SweepReport),
    T2(Theorem2Report),
    T3(Box<Theorem3Report>),
    T4(SweepReport),
}

impl VerifyReport {
    pub fn status(&self) -> Status {
        match self {
            VerifyReport::T1(r) | VerifyReport::Col3v0(r) | VerifyReport::T4(r) => r.status,
            VerifyReport::T2(r) => r.status,
            VerifyReport::T3(r) => r.status,
        }
    }
}

impl Tabular for VerifyReport {}

#[derive(Clone, Debug, Default)]
pub struct VerifyArgs {
    pub v: Option<u32>,
    pub t: Option<u32>,
    pub n_max: u64,
    pub params: TruncationParams,
}

pub fn verify(cache: &Cache, theorem: TheoremArg, args: &VerifyArgs) -> Result<VerifyReport> {
    let n_max = args.n_max;
    if n_max == 0 {
        return Err(usage("--n-max must be at least 1"));
    }
    let need_v = || {
        args.v
            .ok_or_else(|| usage("--v is required for this theorem"))
    };
    let run_sweep = |kind| -> Result<SweepReport> {
        sweep(&partition_table(cache, kind, n_max as usize)?, n_max)
    };
    Ok(match theorem {
        TheoremArg::T1 => VerifyReport::T1(run_sweep(PartitionKind::Colored(2))?),
        TheoremArg::Col3v0 => VerifyReport::Col3v0(run_sweep(PartitionKind::Colored(3))?),
        TheoremArg::T4 => {
            let t = args
                .t
                .ok_or_else(|| usage("--t is required for t-regular partitions"))?;
            VerifyReport::T4(run_sweep(partition_kind(KindArg::Regular, Some(t))?)?)
        }
        TheoremArg::T2 => {
            let v = need_v()?;
            let p3 = partition_table(cache, PartitionKind::Colored(3), n_max as usize)?;
            VerifyReport::T2(verify_theorem2(v, n_max as usize, &p3)?)
        }
        TheoremArg::T3 => {
            let v = need_v()?;
            args.params.validate()?;
            if v != 6 && v < 8 {
                return Err(usage(format!(
                    "traces are taken for v = 6 or v ≥ 8, got {v}"
                )));
            }
            let order = TraceData::required_order(v, n_max, &args.params);
            let table =
                eigenform_table(cache, 2 * v, order, TraceData::table_digits(&args.params))?;
            VerifyReport::T3(Box::new(
                TraceData::from_table(v, table, &args.params)?.verify(n_max)?,
            ))
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletForm {
    pub a2: String,
    pub value: String,
    pub digits: u32,
    pub tail_bound: String,
    pub norm: PeterssonReport,
    pub weighted_sum: WeightedSumReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletReport {
    pub v: u32,
    pub weight: u32,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub prec: u32,
    pub forms: Vec<DirichletForm>,
    /// The exact cusp coefficient `β_v` when the cusp space is one-dimensional.
    pub beta: Option<String>,
    /// `|𝓓_f(M,N) - β_v|` in that case.
    pub beta_gap: Option<String>,
}

impl Tabular for DirichletReport {
    fn table(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let header = ["a2", "value", "tail_bound", "norm"]
            .map(String::from)
            .to_vec();
        let mut rows: Vec<Vec<String>> = self
            .forms
            .iter()
            .map(|f| {
                vec![
                    f.a2.clone(),
                    f.value.clone(),
                    f.tail_bound.clone(),
                    f.norm.value.clone(),
                ]
            })
            .collect();
        if let (Some(b), Some(g)) = (&self.beta, &self.beta_gap) {
            rows.push(vec!["beta".into(), b.clone(), g.clone(), "-".into()]);
        }
        (header, rows)
    }
}

/// `𝓓_f(M,N)` for every normalized eigenform of weight `2v`.
pub fn dirichlet(cache: &Cache, v: u32, params: &TruncationParams) -> Result<DirichletReport> {
    params.validate()?;
    if v != 6 && v < 8 {
        return Err(usage(format!("weight {} has no cusp forms", 2 * v)));
    }
    let order = TraceData::required_order(v, 1, params);
    let table = eigenform_table(cache, 2 * v, order, TraceData::table_digits(params))?;
    let data = TraceData::from_table(v, table, params)?;
    let forms: Vec<DirichletForm> = data
        .forms
        .iter()
        .map(|f| DirichletForm {
            a2: match &f.a2 {
                EigenvalueLabel::Exact(r) => rat_to_string(r),
                EigenvalueLabel::Numeric(x) => x.to_decimal(),
            },
            value: f.weighted.value.to_decimal(),
            digits: f.weighted.value.digits(),
            tail_bound: format_float(&f.weighted.tail_bound(), 6),
            norm: (&f.norm).into(),
            weighted_sum: (&f.weighted).into(),
        })
        .collect();
    let (beta, beta_gap) = if ONE_CUSP_FORM.contains(&v) {
        let b = beta(v)?;
        let value = data.forms[0].weighted.value.value();
        let gap = rug::Float::with_val(value.prec(), value - &b).abs();
        (Some(rat_to_string(&b)), Some(format_float(&gap, 6)))
    } else {
        (None, None)
    };
    Ok(DirichletReport {
        v,
        weight: 2 * v,
        m: params.m,
        n: params.n,
        prec: params.prec,
        forms,
        beta,
        beta_gap,
    })
}
