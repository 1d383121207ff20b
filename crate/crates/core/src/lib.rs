//! Euler-like recurrences for t-colored and t-regular partition functions.
//!
//! The crate is organised bottom-up:
//!
//! - [`series`]: truncated power series over exact rationals and the classical
//!   q-products `(q;q)_∞` and `(q;q)_∞^3`.
//! - [`partitions`]: generating-function oracles and the pentagonal /
//!   triangular-number recurrences for `p(n)`, `𝔭_2(n)`, `𝔭_3(n)` and `p_t(n)`.
//! - [`modular`]: Bernoulli numbers, divisor sums, Eisenstein series, level-one
//!   cusp forms, the Hecke operator `T_2` and numeric eigenforms.
//! - [`rankin_cohen`]: the exact bracket coefficients `𝓔_v(n,k)`, the series
//!   `R_v`, and the constants `α_v`, `β_v`.
//! - [`analytic`]: high-precision special functions, Petersson norms and the
//!   twisted Dirichlet-series side of the triangular-number recurrences.

pub mod analytic;
pub mod arith;
pub mod error;
pub mod fixtures;
pub mod halfgamma;
pub mod modular;
pub mod partitions;
pub mod rankin_cohen;
pub mod series;

pub use arith::{Int, Rat};
pub use error::{Error, Result};
pub use series::TruncSeries;
