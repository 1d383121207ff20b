//! Published reference constants, kept in one place so every check that
//! compares against them reads the same values.

/// `(v, α_v)` for the weights with no cusp forms.
pub const ALPHA_EISENSTEIN_ONLY: [(u32, &str); 5] = [
    (2, "1/64"),
    (3, "1/128"),
    (4, "15/4096"),
    (5, "7/4096"),
    (7, "99/262144"),
];

/// `(v, α_v, β_v)` for the weights with a one-dimensional cusp space.
pub const ALPHA_BETA_ONE_CUSP_FORM: [(u32, &str, &str); 6] = [
    (6, "105/131072", "-51051/22112"),
    (8, "3003/16777216", "-9429849/1851904"),
    (9, "715/8388608", "-324385347/44919808"),
    (10, "21879/536870912", "-328502311137/22886612992"),
    (11, "20995/1073741824", "-318771027861/10182066176"),
    (13, "156009/34359738368", "-162957690002835/1379781312512"),
];

/// Leading digits of `𝓓_Δ(100, 700)` as published; only these seven
/// significant digits are known.
pub const D_DELTA_100_700: f64 = -2.308746;

/// Agreement threshold for the truncated weighted sum.
pub const D_DELTA_TOLERANCE: f64 = 1e-5;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_rat;
    use crate::rankin_cohen::{alpha, beta, EISENSTEIN_ONLY, ONE_CUSP_FORM};

    #[test]
    fn tables_reproduce_exactly() {
        for (v, a) in ALPHA_EISENSTEIN_ONLY {
            assert_eq!(alpha(v), parse_rat(a).unwrap(), "α_{v}");
        }
        for (v, a, b) in ALPHA_BETA_ONE_CUSP_FORM {
            assert_eq!(alpha(v), parse_rat(a).unwrap(), "α_{v}");
            assert_eq!(beta(v).unwrap(), parse_rat(b).unwrap(), "β_{v}");
        }
        let vs: Vec<u32> = ALPHA_EISENSTEIN_ONLY.iter().map(|e| e.0).collect();
        assert_eq!(vs, EISENSTEIN_ONLY);
        let vs: Vec<u32> = ALPHA_BETA_ONE_CUSP_FORM.iter().map(|e| e.0).collect();
        assert_eq!(vs, ONE_CUSP_FORM);
    }
}
