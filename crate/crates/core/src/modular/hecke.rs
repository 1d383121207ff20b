//! The Hecke operator `T_2` on level-one cusp forms and numeric
//! diagonalization in dimension two and above.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::{
    cusp_dim, cusp_eigenform_1dim, victor_miller_cusp_basis, Coefficients, Eigenform,
    EigenformTable, EigenvalueLabel,
};
use crate::analytic::{bits_for, RealHP};
use crate::arith::Rat;
use crate::error::{invalid, Error, Result};
use crate::series::TruncSeries;

/// Exact matrix of `T_2` in the echelon basis `g_j = q^j + O(q^{d+1})`.
///
/// Column `j` holds the first `d` coefficients of `T_2 g_j`, where
/// `a_{T_2 f}(n) = a_f(2n) + 2^{k-1} a_f(n/2)`.
pub fn hecke_t2_matrix(weight: u32, basis: &[TruncSeries]) -> Result<Vec<Vec<Rat>>> {
    let d = basis.len();
    if d == 0 {
        return Ok(Vec::new());
    }
    let needed = 2 * (d + 1);
    if let Some(g) = basis.iter().find(|g| g.order() < needed) {
        return Err(Error::Truncation {
            needed,
            have: g.order(),
        });
    }
    let two_pow = Integer::from(2).pow(weight - 1);
    let mut m = vec![vec![Rational::new(); d]; d];
    for (j, g) in basis.iter().enumerate() {
        let c = g.coeffs();
        for i in 1..=d {
            let mut entry = c[2 * i].clone();
            if i % 2 == 0 {
                entry += Rational::from(&two_pow * &c[i / 2]);
            }
            m[i - 1][j] = entry;
        }
    }
    Ok(m)
}

/// Characteristic polynomial `det(xI - M)` by Faddeev–LeVerrier,
/// coefficients in ascending degree, monic.
pub fn characteristic_polynomial(m: &[Vec<Rat>]) -> Vec<Rat> {
    let d = m.len();
    let mut coeffs = vec![Rational::new(); d + 1];
    coeffs[d] = Rational::from(1);
    // M_k = M (M_{k-1} + c_{d-k+1} I), c_{d-k} = -tr(M_k) / k
    let mut acc = vec![vec![Rational::new(); d]; d];
    for k in 1..=d {
        let mut shifted = acc.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += &coeffs[d - k + 1];
        }
        acc = mat_mul(m, &shifted);
        let trace: Rational = (0..d).map(|i| acc[i][i].clone()).sum();
        coeffs[d - k] = -trace / k as u32;
    }
    coeffs
}

fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut out = vec![vec![Rational::new(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += Rational::from(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

fn eval(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rational::new();
    for c in p.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

fn trim(p: &mut Vec<Rat>) {
    while p.len() > 1 && p.last().is_some_and(|c| *c == 0) {
        p.pop();
    }
}

fn derivative(p: &[Rat]) -> Vec<Rat> {
    let mut d: Vec<Rat> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| Rational::from(c * i as u32))
        .collect();
    if d.is_empty() {
        d.push(Rational::new());
    }
    d
}

/// Remainder of `a` divided by `b` (`b` nonzero).
fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let lead = b.last().unwrap();
    while r.len() >= b.len() && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - b.len();
        let q = Rational::from(r.last().unwrap() / lead);
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= Rational::from(&q * c);
        }
        r.pop();
        if r.is_empty() {
            r.push(Rational::new());
        }
        trim(&mut r);
    }
    r
}

fn is_zero_poly(p: &[Rat]) -> bool {
    p.iter().all(|c| *c == 0)
}

/// Sturm chain `p, p', -rem(p_{i-1}, p_i), …`; errors when `p` has a
/// repeated root.
fn sturm_chain(p: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    let mut chain = vec![p.to_vec(), derivative(p)];
    loop {
        let n = chain.len();
        let r = poly_rem(&chain[n - 2], &chain[n - 1]);
        if is_zero_poly(&r) {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    if chain.last().unwrap().len() > 1 {
        return Err(Error::Degenerate(
            "T_2 characteristic polynomial has a repeated root".into(),
        ));
    }
    Ok(chain)
}

fn sign_changes(chain: &[Vec<Rat>], x: &Rat) -> usize {
    let signs: Vec<std::cmp::Ordering> = chain
        .iter()
        .map(|p| eval(p, x).cmp0())
        .filter(|s| *s != std::cmp::Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Real roots of a squarefree polynomial, each bracketed to relative
/// width `2^{-bits}`, ascending.
fn real_roots(p: &[Rat], bits: u32) -> Result<Vec<(Rat, Rat)>> {
    let chain = sturm_chain(p)?;
    let lead = p.last().unwrap();
    // Cauchy bound
    let bound = Rational::from(1)
        + p[..p.len() - 1]
            .iter()
            .map(|c| Rational::from(c / lead).abs())
            .max()
            .unwrap_or_default();
    let lo = -bound.clone();
    let total = sign_changes(&chain, &lo) - sign_changes(&chain, &bound);
    let mut pending = vec![(lo, bound)];
    let mut isolated = Vec::new();
    while let Some((a, b)) = pending.pop() {
        let count = sign_changes(&chain, &a) - sign_changes(&chain, &b);
        match count {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let mid = Rational::from(&a + &b) / 2u32;
                if eval(p, &mid) == 0 {
                    // keep the exact root as its own degenerate bracket
                    isolated.push((mid.clone(), mid.clone()));
                    let eps = Rational::from(&b - &a) / 1024u32;
                    pending.push((a, Rational::from(&mid - &eps)));
                    pending.push((Rational::from(&mid + &eps), b));
                } else {
                    pending.push((a, mid.clone()));
                    pending.push((mid, b));
                }
            }
        }
    }
    if isolated.len() != total {
        return Err(Error::Degenerate("root isolation lost a root".into()));
    }
    let mut refined = Vec::with_capacity(total);
    for (mut a, mut b) in isolated {
        let scale = a.clone().abs().max(b.clone().abs()).max(Rational::from(1));
        let tol = scale / Rational::from(Integer::from(1) << bits);
        let sa = eval(p, &a).cmp0();
        while Rational::from(&b - &a) > tol {
            let mid = Rational::from(&a + &b) / 2u32;
            let sm = eval(p, &mid).cmp0();
            if sm == std::cmp::Ordering::Equal {
                a = mid.clone();
                b = mid;
                break;
            }
            if sm == sa {
                a = mid;
            } else {
                b = mid;
            }
        }
        refined.push((a, b));
    }
    refined.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(refined)
}

/// Solves `(M - λI) x = 0` with `x_1 = 1` by partial pivoting over all
/// rows of the columns `2..d`.
fn eigenvector(m: &[Vec<Rat>], lambda: &Float, bits: u32) -> Result<Vec<Float>> {
    let d = m.len();
    let mut rows: Vec<Vec<Float>> = (0..d)
        .map(|i| {
            let mut row: Vec<Float> = (1..d)
                .map(|j| {
                    let mut e = Float::with_val(bits, &m[i][j]);
                    if i == j {
                        e -= lambda;
                    }
                    e
                })
                .collect();
            let mut rhs = Float::with_val(bits, &m[i][0]);
            if i == 0 {
                rhs -= lambda;
            }
            row.push(-rhs);
            row
        })
        .collect();
    let n = d - 1;
    for col in 0..n {
        let pivot = (col..d)
            .max_by(|&a, &b| {
                rows[a][col]
                    .clone()
                    .abs()
                    .total_cmp(&rows[b][col].clone().abs())
            })
            .unwrap();
        if rows[pivot][col].is_zero() {
            return Err(Error::Degenerate(
                "eigenspace is not one-dimensional".into(),
            ));
        }
        rows.swap(col, pivot);
        for r in col + 1..d {
            let f = Float::with_val(bits, &rows[r][col] / &rows[col][col]);
            for c in col..=n {
                let t = Float::with_val(bits, &f * &rows[col][c]);
                rows[r][c] -= t;
            }
        }
    }
    let mut y = vec![Float::new(bits); n];
    for i in (0..n).rev() {
        let mut acc = rows[i][n].clone();
        for j in i + 1..n {
            acc -= Float::with_val(bits, &rows[i][j] * &y[j]);
        }
        y[i] = acc / &rows[i][i];
    }
    let mut x = vec![Float::with_val(bits, 1)];
    x.extend(y);
    Ok(x)
}

/// Normalized Hecke eigenforms of `S_k` with coefficients through `q^order`,
/// sorted by ascending `a(2)`.
///
/// Dimension one returns the exact form; higher dimensions carry `digits`
/// significant decimal digits.
pub fn eigenforms_numeric(weight: u32, order: usize, digits: u32) -> Result<EigenformTable> {
    let d = cusp_dim(weight);
    if d == 0 {
        return Err(invalid(format!("S_{weight} is zero")));
    }
    if d == 1 {
        return cusp_eigenform_1dim(weight, order);
    }
    let basis = victor_miller_cusp_basis(weight, order.max(2 * (d + 1)))?;
    let m = hecke_t2_matrix(weight, &basis)?;
    let poly = characteristic_polynomial(&m);
    let bits = bits_for(digits);
    // Cancellation in Σ x_j g_j(n) costs up to the size of the basis coefficients.
    let guard = basis
        .iter()
        .flat_map(|g| g.coeffs().iter().take(order + 1))
        .map(|c| c.numer().significant_bits())
        .max()
        .unwrap_or(0);
    let work = bits + guard + 32;
    let roots = real_roots(&poly, work)?;
    if roots.len() != d {
        return Err(Error::Degenerate(format!(
            "T_2 on S_{weight} has {} real eigenvalues, expected {d}",
            roots.len()
        )));
    }
    let mut forms = Vec::with_capacity(d);
    for (a, b) in &roots {
        let mid = Rational::from(a + b) / 2u32;
        let lambda = Float::with_val_round(work, &mid, Round::Nearest).0;
        let x = eigenvector(&m, &lambda, work)?;
        let coeffs: Vec<RealHP> = (0..=order)
            .map(|n| {
                let mut acc = Float::new(work);
                for (xj, g) in x.iter().zip(&basis) {
                    let c = &g.coeffs()[n];
                    if *c != 0 {
                        acc += Float::with_val(work, xj * c);
                    }
                }
                RealHP::new(acc, digits)
            })
            .collect();
        forms.push(Eigenform {
            a2: EigenvalueLabel::Numeric(RealHP::new(lambda, digits)),
            coeffs: Coefficients::Numeric(coeffs),
        });
    }
    // Distinct eigenvalues were certified by the squarefree Sturm chain.
    Ok(EigenformTable {
        weight,
        dim: d,
        forms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::delta_series;

    fn rat(n: i64) -> Rat {
        Rational::from(n)
    }

    #[test]
    fn weight_12_matrix() {
        let basis = victor_miller_cusp_basis(12, 4).unwrap();
        assert_eq!(hecke_t2_matrix(12, &basis).unwrap(), vec![vec![rat(-24)]]);
        let short = victor_miller_cusp_basis(12, 3).unwrap();
        assert!(matches!(
            hecke_t2_matrix(12, &short),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn weight_24_trace_and_determinant() {
        let basis = victor_miller_cusp_basis(24, 6).unwrap();
        let m = hecke_t2_matrix(24, &basis).unwrap();
        assert_eq!(Rational::from(&m[0][0] + &m[1][1]), 1080);
        let det = Rational::from(&m[0][0] * &m[1][1]) - Rational::from(&m[0][1] * &m[1][0]);
        assert_eq!(det, -20468736);
        let p = characteristic_polynomial(&m);
        assert_eq!(p, vec![rat(-20468736), rat(-1080), rat(1)]);
    }

    #[test]
    fn charpoly_integral() {
        for w in (24..=60).step_by(2) {
            let d = cusp_dim(w);
            let basis = victor_miller_cusp_basis(w, 2 * (d + 1)).unwrap();
            let m = hecke_t2_matrix(w, &basis).unwrap();
            let p = characteristic_polynomial(&m);
            assert!(p.iter().all(|c| *c.denom() == 1), "weight {w}");
            assert_eq!(p.len(), d + 1);
            assert!(
                sturm_chain(&p).is_ok(),
                "weight {w} has a repeated T_2 eigenvalue"
            );
        }
    }

    #[test]
    fn sturm_rejects_repeated_root() {
        // (x-1)^2 (x+2)
        let p = vec![rat(2), rat(-3), rat(0), rat(1)];
        assert!(matches!(sturm_chain(&p), Err(Error::Degenerate(_))));
        let roots = real_roots(&[rat(-2), rat(0), rat(1)], 100).unwrap();
        let s2 = Float::with_val(100, 2).sqrt();
        assert!((Float::with_val(100, &roots[1].0) - &s2).abs() < 1e-28);
        assert!((Float::with_val(100, &roots[0].1) + &s2).abs() < 1e-28);
        let exact = real_roots(&[rat(0), rat(-1), rat(1)], 50).unwrap();
        assert_eq!(exact[0].0, 0);
    }

    #[test]
    fn weight_24_eigenforms() {
        let digits = 40;
        let t = eigenforms_numeric(24, 30, digits).unwrap();
        assert_eq!((t.dim, t.forms.len()), (2, 2));
        let bits = bits_for(digits);
        let root = Float::with_val(bits, 144169).sqrt() * 12u32;
        let expected = [
            Float::with_val(bits, 540) - &root,
            Float::with_val(bits, 540) + &root,
        ];
        let tol = Float::with_val(bits, 10).pow(-(digits as i32) + 4);
        let mut sum = Float::new(bits);
        let mut prod = Float::with_val(bits, 1);
        for (f, e) in t.forms.iter().zip(&expected) {
            let a2 = f.coeffs.to_float(2, bits);
            assert!(Float::with_val(bits, &a2 - e).abs() < Float::with_val(bits, e * &tol).abs());
            assert_eq!(f.coeffs.to_float(1, bits), 1);
            assert!(f.coeffs.to_float(0, bits).is_zero());
            sum += &a2;
            prod *= &a2;
            let m = |n| f.coeffs.to_float(n, bits);
            for (p, q) in [
                (2usize, 3usize),
                (2, 5),
                (3, 5),
                (2, 7),
                (3, 7),
                (4, 7),
                (5, 6),
            ] {
                let lhs = Float::with_val(bits, &m(p) * &m(q));
                let rhs = m(p * q);
                let rel = Float::with_val(bits, &lhs - &rhs).abs() / rhs.clone().abs();
                assert!(
                    rel < Float::with_val(bits, 10).pow(1 - digits as i32),
                    "a({p})a({q})"
                );
            }
        }
        assert!(Float::with_val(bits, &sum - 1080).abs() < 1e-30);
        let rel: Float = Float::with_val(bits, &prod + 20468736) / 20468736;
        assert!(rel.abs() < 1e-35);
    }

    #[test]
    fn dim_one_fallback_is_exact() {
        let t = eigenforms_numeric(12, 20, 30).unwrap();
        assert_eq!(t.forms[0].coeffs.exact().unwrap(), &delta_series(20));
        assert!(eigenforms_numeric(14, 20, 30).is_err());
    }

    #[test]
    fn higher_dimension_eigenforms() {
        let digits = 30;
        let bits = bits_for(digits);
        for w in [36u32, 48] {
            let t = eigenforms_numeric(w, 40, digits).unwrap();
            assert_eq!(t.forms.len(), cusp_dim(w));
            let labels: Vec<f64> = t.forms.iter().map(|f| f.a2.to_f64()).collect();
            assert!(labels.windows(2).all(|p| p[0] < p[1]));
            for f in &t.forms {
                let m = |n| f.coeffs.to_float(n, bits);
                let lhs = Float::with_val(bits, &m(3) * &m(13));
                let rel = Float::with_val(bits, &lhs - &m(39)).abs() / m(39).abs();
                assert!(rel < 1e-25, "weight {w}");
                // T_2 eigenvalue relation at a prime power: a(4) = a(2)^2 - 2^{k-1}
                let pow = Float::with_val(bits, 2).pow(w - 1);
                let a4 = Float::with_val(bits, m(2).square() - &pow);
                assert!((Float::with_val(bits, &a4 - &m(4)) / &pow).abs() < 1e-25);
            }
        }
    }
}
