//! High-precision numerics for the twisted Dirichlet series side.

pub mod dirichlet;
pub mod hyper;
pub mod integral;
pub mod petersson;
pub mod quad;
pub mod real;
pub mod trace;

pub use dirichlet::{dirichlet_partial, TruncationParams, WeightedSum};
pub use hyper::{hyp1f1, hyp2f1, whittaker_m};
pub use integral::{etilde, integral_i_closed, integral_i_quadrature, omega_path_a, omega_path_b};
pub use petersson::{petersson_norm, petersson_norm_direct, PeterssonNorm};
pub use real::{bits_for, RealHP};
pub use trace::{hecke_trace, verify_theorem3, weighted_sum_df, Theorem3Report};
