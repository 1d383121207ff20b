//! Partition counts from generating functions, and the recurrences that
//! reproduce them from pentagonal and triangular numbers.

use rayon::prelude::*;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{isqrt, sign_pow, Int};
use crate::error::{invalid, Error, Result};
use crate::series::{euler_product, pentagonal, triangular, TruncSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "t")]
pub enum PartitionKind {
    Ordinary,
    Colored(u32),
    Regular(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionTable {
    pub kind: PartitionKind,
    #[serde(with = "int_strings")]
    values: Vec<Int>,
}

impl PartitionTable {
    pub fn new(kind: PartitionKind, values: Vec<Int>) -> Result<Self> {
        if values.first().is_none_or(|v| *v != 1) {
            return Err(invalid("a partition table starts with value 1 at n = 0"));
        }
        if values.iter().any(|v| *v < 0) {
            return Err(invalid("partition counts are non-negative"));
        }
        Ok(Self { kind, values })
    }

    /// Largest `n` covered.
    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Int] {
        &self.values
    }

    /// Value at `n`, with the convention that negative indices give 0.
    pub fn get(&self, n: i64) -> Result<Int> {
        if n < 0 {
            return Ok(Integer::new());
        }
        self.values
            .get(n as usize)
            .cloned()
            .ok_or(Error::InsufficientTable {
                needed: n as usize,
                have: self.max_n(),
            })
    }

    fn lookup(&self, n: i64) -> &Int {
        static ZERO: Integer = Integer::ZERO;
        if n < 0 {
            &ZERO
        } else {
            &self.values[n as usize]
        }
    }

    fn require_below(&self, n: u64) -> Result<()> {
        if n > 0 && (n - 1) as usize > self.max_n() {
            return Err(Error::InsufficientTable {
                needed: (n - 1) as usize,
                have: self.max_n(),
            });
        }
        Ok(())
    }

    fn require_kind(&self, kind: PartitionKind) -> Result<()> {
        if self.kind != kind {
            return Err(invalid(format!(
                "expected a {kind:?} table, got {:?}",
                self.kind
            )));
        }
        Ok(())
    }

    pub fn as_series(&self) -> TruncSeries {
        TruncSeries::from_integers(self.values.clone()).expect("non-empty")
    }
}

/// `p(n)` for `0 ≤ n ≤ order`, read off `1/(q;q)_∞`.
pub fn oracle_ordinary(order: usize) -> PartitionTable {
    let values = coefficients(&euler_product(order).invert_newton());
    PartitionTable {
        kind: PartitionKind::Ordinary,
        values,
    }
}

/// `𝔭_t(n)` from `1/(q;q)_∞^t`.
///
/// The inverse is taken by Newton iteration, so the table does not share a
/// code path with the term-by-term recurrences it is used to check.
pub fn oracle_colored(t: u32, order: usize) -> Result<PartitionTable> {
    if t == 0 {
        return Err(invalid("t-colored partitions need t ≥ 1"));
    }
    let values = coefficients(&euler_product(order).pow(t).invert_newton());
    Ok(PartitionTable {
        kind: PartitionKind::Colored(t),
        values,
    })
}

/// `p_t(n)` from `(q^t;q^t)_∞ / (q;q)_∞`.
pub fn oracle_regular(t: u32, order: usize) -> Result<PartitionTable> {
    if t < 2 {
        return Err(invalid("t-regular partitions need t ≥ 2"));
    }
    let e = euler_product(order);
    let gf = e.dilate(t as usize)?.mul(&e.invert_newton())?;
    Ok(PartitionTable {
        kind: PartitionKind::Regular(t),
        values: coefficients(&gf),
    })
}

pub fn oracle(kind: PartitionKind, order: usize) -> Result<PartitionTable> {
    match kind {
        PartitionKind::Ordinary => Ok(oracle_ordinary(order)),
        PartitionKind::Colored(t) => oracle_colored(t, order),
        PartitionKind::Regular(t) => oracle_regular(t, order),
    }
}

fn coefficients(s: &TruncSeries) -> Vec<Int> {
    s.to_integers()
        .expect("partition generating functions are integral")
}

/// Shape of an integer relevant to the case splits in the recurrences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Pentagonal(i64),
    Triangular(u64),
    TTimesPentagonal { t: u64, j: i64 },
    None,
}

/// The unique `j ∈ ℤ` with `w_j = n`, if any.
pub fn pentagonal_index(n: u64) -> Option<i64> {
    // w_j = n  ⇔  24n + 1 = (6j + 1)²
    let d = 24 * n + 1;
    let s = isqrt(d);
    if s * s != d {
        return None;
    }
    let s = s as i64;
    let candidates: Vec<i64> = [(s - 1), -(s + 1)]
        .into_iter()
        .filter(|x| x % 6 == 0)
        .map(|x| x / 6)
        .filter(|&j| pentagonal(j) == n)
        .collect();
    assert!(
        candidates.len() <= 1,
        "pentagonal numbers are injective on ℤ: {n} has {candidates:?}"
    );
    candidates.first().copied()
}

/// The `k ≥ 0` with `T_k = n`, if any.
pub fn triangular_index(n: u64) -> Option<u64> {
    let d = 8 * n + 1;
    let s = isqrt(d);
    (s * s == d).then(|| (s - 1) / 2)
}

/// The `j` with `n = t·w_j`, if any.
pub fn scaled_pentagonal_index(n: u64, t: u64) -> Option<i64> {
    if t == 0 || !n.is_multiple_of(t) {
        return None;
    }
    pentagonal_index(n / t)
}

/// Pentagonal takes precedence over triangular (1 is both).
pub fn classify(n: u64) -> Shape {
    if let Some(j) = pentagonal_index(n) {
        Shape::Pentagonal(j)
    } else if let Some(k) = triangular_index(n) {
        Shape::Triangular(k)
    } else {
        Shape::None
    }
}

pub fn classify_scaled(n: u64, t: u64) -> Shape {
    match scaled_pentagonal_index(n, t) {
        Some(j) => Shape::TTimesPentagonal { t, j },
        None => Shape::None,
    }
}

/// `Σ_{k∈ℤ∖{0}} (-1)^{k-1} f(n - w_k)` over the finitely many `w_k ≤ n`.
fn pentagonal_sum(n: u64, table: &PartitionTable) -> Int {
    let mut acc = Integer::new();
    for k in 1i64.. {
        let lo = pentagonal(-k);
        if lo > n {
            break;
        }
        let hi = pentagonal(k);
        let (a, b) = (
            table.lookup(n as i64 - lo as i64),
            table.lookup(n as i64 - hi as i64),
        );
        if sign_pow(k - 1) > 0 {
            acc += a;
            acc += b;
        } else {
            acc -= a;
            acc -= b;
        }
    }
    acc
}

/// `Σ_{k≥1} (-1)^{k+1} (2k+1) f(n - T_k)`.
fn triangular_sum(n: u64, table: &PartitionTable) -> Int {
    let mut acc = Integer::new();
    for k in 1u64.. {
        let t = triangular(k);
        if t > n {
            break;
        }
        let term = Integer::from(table.lookup((n - t) as i64) * (2 * k + 1));
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Euler's pentagonal recurrence for `p(n)`.
pub fn euler_recurrence(n: u64, table: &PartitionTable) -> Result<Int> {
    table.require_kind(PartitionKind::Ordinary)?;
    table.require_below(n)?;
    if n == 0 {
        return Ok(Integer::from(1));
    }
    Ok(pentagonal_sum(n, table))
}

/// Triangular-number recurrence for 2-colored partitions, with the
/// `(-1)^j` correction at pentagonal `n = w_j`.
pub fn p2_recurrence(n: u64, table: &PartitionTable) -> Result<Int> {
    table.require_kind(PartitionKind::Colored(2))?;
    if n == 0 {
        return Err(invalid("the 2-colored recurrence holds for n ≥ 1"));
    }
    table.require_below(n)?;
    let mut acc = triangular_sum(n, table);
    if let Some(j) = pentagonal_index(n) {
        acc += sign_pow(j);
    }
    Ok(acc)
}

/// The weight-0 member of the triangular-number family for 3-colored partitions.
pub fn p3_recurrence_v0(n: u64, table: &PartitionTable) -> Result<Int> {
    table.require_kind(PartitionKind::Colored(3))?;
    if n == 0 {
        return Err(invalid("the 3-colored recurrence holds for n ≥ 1"));
    }
    table.require_below(n)?;
    Ok(triangular_sum(n, table))
}

/// Pentagonal recurrence for `t`-regular partitions, with the `(-1)^j`
/// correction at `n = t·w_j`.
pub fn pt_regular_recurrence(t: u32, n: u64, table: &PartitionTable) -> Result<Int> {
    if t < 2 {
        return Err(invalid("t-regular partitions need t ≥ 2"));
    }
    table.require_kind(PartitionKind::Regular(t))?;
    if n == 0 {
        return Err(invalid("the t-regular recurrence holds for n ≥ 1"));
    }
    table.require_below(n)?;
    let mut acc = pentagonal_sum(n, table);
    if let Some(j) = scaled_pentagonal_index(n, t as u64) {
        acc += sign_pow(j);
    }
    Ok(acc)
}

/// The recurrence matching a table kind (Euler, 2-colored, 3-colored v = 0, t-regular).
pub fn recurrence_for(n: u64, table: &PartitionTable) -> Result<Int> {
    match table.kind {
        PartitionKind::Ordinary => euler_recurrence(n, table),
        PartitionKind::Colored(2) => p2_recurrence(n, table),
        PartitionKind::Colored(3) => p3_recurrence_v0(n, table),
        PartitionKind::Regular(t) => pt_regular_recurrence(t, n, table),
        PartitionKind::Colored(t) => {
            Err(invalid(format!("no recurrence for {t}-colored partitions")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub kind: PartitionKind,
    pub n_max: u64,
    pub checked: u64,
    pub first_mismatch: Option<u64>,
    pub status: Status,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Checks the recurrence against the oracle for every `1 ≤ n ≤ n_max`.
pub fn sweep(table: &PartitionTable, n_max: u64) -> Result<SweepReport> {
    if n_max as usize > table.max_n() {
        return Err(Error::InsufficientTable {
            needed: n_max as usize,
            have: table.max_n(),
        });
    }
    let mismatches: Vec<u64> = (1..=n_max)
        .into_par_iter()
        .map(|n| recurrence_for(n, table).map(|r| (n, r == table.values[n as usize])))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| n)
        .collect();
    let first_mismatch = mismatches.first().copied();
    Ok(SweepReport {
        kind: table.kind,
        n_max,
        checked: n_max,
        first_mismatch,
        status: Status::from_bool(first_mismatch.is_none()),
    })
}

pub(crate) mod int_strings {
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
        use serde::de::Error;
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse::<Integer>().map_err(D::Error::custom))
            .collect()
    }
}
