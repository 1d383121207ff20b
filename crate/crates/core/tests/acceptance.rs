//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::time::Instant;

use colorpart::analytic::dirichlet::TruncationParams;
use colorpart::analytic::{
    integral_i_closed, integral_i_quadrature, omega_path_a, omega_path_b, verify_theorem3,
    weighted_sum_df,
};
use colorpart::arith::parse_rat;
use colorpart::fixtures::{
    ALPHA_BETA_ONE_CUSP_FORM, ALPHA_EISENSTEIN_ONLY, D_DELTA_100_700, D_DELTA_TOLERANCE,
};
use colorpart::modular::{delta_series, Coefficients};
use colorpart::partitions::{oracle, sweep, PartitionKind, Status};
use colorpart::rankin_cohen::{
    alpha, beta, nonvanishing_sweep, poly_p, rv_series, rv_series_direct, verify_theorem2,
    EISENSTEIN_ONLY, ONE_CUSP_FORM,
};
use colorpart::series::{euler_product, triple_product};
use rug::ops::Pow;
use rug::{Float, Integer};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn tables() -> Outcome {
    let mut bad = Vec::new();
    for (v, a) in ALPHA_EISENSTEIN_ONLY {
        if alpha(v) != parse_rat(a).unwrap() {
            bad.push(format!("α_{v}"));
        }
    }
    for (v, a, b) in ALPHA_BETA_ONE_CUSP_FORM {
        if alpha(v) != parse_rat(a).unwrap() {
            bad.push(format!("α_{v}"));
        }
        if beta(v).map_err(|e| e.to_string())? != parse_rat(b).unwrap() {
            bad.push(format!("β_{v}"));
        }
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            "11 constants bit-exact".into()
        } else {
            bad.join(", ")
        },
    )
}

fn weight_recurrences() -> Outcome {
    let p3 = oracle(PartitionKind::Colored(3), 500).map_err(|e| e.to_string())?;
    let mut bad = Vec::new();
    for v in EISENSTEIN_ONLY.into_iter().chain(ONE_CUSP_FORM) {
        let r = verify_theorem2(v, 500, &p3).map_err(|e| e.to_string())?;
        if r.status != Status::Pass {
            bad.push(format!("v={v} first mismatch {:?}", r.first_mismatch));
        }
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            "11 weights, n ≤ 500, exact".into()
        } else {
            bad.join("; ")
        },
    )
}

fn recurrences() -> Outcome {
    const N: u64 = 10_000;
    let mut kinds = vec![
        PartitionKind::Ordinary,
        PartitionKind::Colored(2),
        PartitionKind::Colored(3),
    ];
    kinds.extend((2..=12).map(PartitionKind::Regular));
    let mut bad = Vec::new();
    for kind in kinds {
        let table = oracle(kind, N as usize).map_err(|e| e.to_string())?;
        let r = sweep(&table, N).map_err(|e| e.to_string())?;
        if r.status != Status::Pass {
            bad.push(format!("{kind:?} first mismatch {:?}", r.first_mismatch));
        }
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            "14 recurrences, n ≤ 10000, exact".into()
        } else {
            bad.join("; ")
        },
    )
}

fn example() -> Outcome {
    let params = TruncationParams::default();
    let order = params.max_index();
    let f = Coefficients::Exact(delta_series(order));
    let d = weighted_sum_df(6, &f, &params).map_err(|e| e.to_string())?;
    let bits = 256;
    let value = Float::with_val(bits, d.value.value());
    let to_published = Float::with_val(bits, &value - D_DELTA_100_700)
        .abs()
        .to_f64();
    let b6 = Float::with_val(bits, &beta(6).unwrap());
    let to_beta = Float::with_val(bits, &value - &b6).abs().to_f64();
    check(
        to_published < D_DELTA_TOLERANCE && to_beta < D_DELTA_TOLERANCE,
        format!(
            "𝓓_Δ(100,700) = {} (|Δ published| = {to_published:.2e}, |Δ β_6| = {to_beta:.2e})",
            d.value
        ),
    )
}

/// Residual target for the trace recurrence at default truncation.
const RESIDUAL_TARGET: f64 = 1e-4;

fn trace_residuals() -> Outcome {
    let params = TruncationParams::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for (v, n_max) in [(6, 100), (8, 50), (12, 20)] {
        let r = verify_theorem3(v, n_max, &params).map_err(|e| e.to_string())?;
        let residual: f64 = r.max_residual.parse().map_err(|_| r.max_residual.clone())?;
        ok &= r.status == Status::Pass && residual <= RESIDUAL_TARGET;
        lines.push(format!(
            "v={v} n≤{n_max}: max residual {} tol {} worst ratio {} ({:?})",
            r.max_residual, r.tail_bound, r.worst_ratio, r.status
        ));
    }
    check(ok, lines.join("; "))
}

fn nonvanishing() -> Outcome {
    let r = nonvanishing_sweep(20, 10_000).map_err(|e| e.to_string())?;
    let p0 = (1..=20).all(|v| poly_p(v, &Integer::new()) == 3);
    check(
        r.status == Status::Pass && p0,
        format!(
            "𝓔_v(n,0) ≠ 0 over {} pairs, min |𝓔| = {}; 𝓟_v(0) = 3: {p0}",
            r.checked, r.min_abs
        ),
    )
}

fn dual_paths() -> Outcome {
    let mut bad = Vec::new();
    let p3 = oracle(PartitionKind::Colored(3), 200).map_err(|e| e.to_string())?;
    for v in 1..=13 {
        let a = rv_series(v, 200, &p3).map_err(|e| e.to_string())?;
        let b = rv_series_direct(v, 200).map_err(|e| e.to_string())?;
        if a != b {
            bad.push(format!("R_{v} routes differ"));
        }
    }
    let prec = 40;
    let tol = Float::with_val(256, 10).pow(-(prec as i32) + 5);
    for (r, n, v) in [
        (0, 3, 2),
        (1, 3, 2),
        (2, 5, 3),
        (3, 7, 4),
        (0, 9, 6),
        (4, 3, 6),
    ] {
        let q = integral_i_quadrature(r, n, v, prec).map_err(|e| e.to_string())?;
        let c = integral_i_closed(r, n, v, prec).map_err(|e| e.to_string())?;
        let rel = relative(q.value(), c.value());
        if rel > tol {
            bad.push(format!("𝓘({r},{n}) v={v} rel {}", rel.to_f64()));
        }
    }
    let tol = Float::with_val(256, 10).pow(-(prec as i32) + 8);
    for (v, n) in [(2, 3), (3, 7), (6, 5), (8, 11), (12, 3)] {
        let a = omega_path_a(v, n, prec).map_err(|e| e.to_string())?;
        let b = omega_path_b(v, n, prec).map_err(|e| e.to_string())?;
        let rel = relative(a.value(), b.value());
        if rel > tol {
            bad.push(format!("ω_{v}({n}) rel {}", rel.to_f64()));
        }
    }
    if triple_product(200) != euler_product(200).pow(3) {
        bad.push("triple product".into());
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            "R_v routes (v ≤ 13, N = 200), 𝓘 routes, ω paths, triple product".into()
        } else {
            bad.join("; ")
        },
    )
}

fn relative(a: &Float, b: &Float) -> Float {
    let diff = Float::with_val(256, a - b).abs();
    let scale = Float::with_val(256, b.abs_ref());
    if scale.is_zero() {
        diff
    } else {
        diff / scale
    }
}

fn general_weights() -> Outcome {
    // weight 32 is the first two-dimensional space past weight 24
    let params = TruncationParams::default();
    let r = verify_theorem3(16, 10, &params).map_err(|e| e.to_string())?;
    check(
        r.status == Status::Pass && !r.bounds.is_empty(),
        format!(
            "v=16 n≤10 within tail envelope (worst ratio {}); reports state: {}",
            r.worst_ratio, r.bounds
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 tables exact", tables),
        ("2 weight-2v recurrences exact", weight_recurrences),
        ("3 pentagonal/triangular recurrences", recurrences),
        ("4 weighted sum example", example),
        ("5 trace recurrence residuals", trace_residuals),
        ("6 non-vanishing", nonvanishing),
        ("7 dual paths", dual_paths),
        ("8 general weights, tail-relative", general_weights),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{name}] {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
