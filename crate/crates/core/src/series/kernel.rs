//! Integer convolution kernels.
//!
//! Two paths: a schoolbook product that skips zero coefficients, and
//! Kronecker substitution, which packs each operand into one big integer and
//! lets GMP's multiplication do the work. They must agree bit for bit.

use rug::integer::Order;
use rug::Integer;

/// Below this many coefficients Kronecker packing never pays off.
const KRONECKER_MIN_LEN: usize = 48;
/// Schoolbook is used when `nnz(a) * nnz(b) <= SPARSE_FACTOR * len`.
const SPARSE_FACTOR: usize = 24;

/// Product of `a` and `b` truncated to `len` coefficients.
pub fn convolve(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let nnz_a = a.iter().take(len).filter(|x| **x != 0).count();
    let nnz_b = b.iter().take(len).filter(|x| **x != 0).count();
    if len < KRONECKER_MIN_LEN || nnz_a.saturating_mul(nnz_b) <= SPARSE_FACTOR * len {
        convolve_schoolbook(a, b, len)
    } else {
        convolve_kronecker(a, b, len)
    }
}

pub fn convolve_schoolbook(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    let nz_b: Vec<(usize, &Integer)> = b
        .iter()
        .take(len)
        .enumerate()
        .filter(|(_, x)| **x != 0)
        .collect();
    for (i, x) in a.iter().take(len).enumerate() {
        if *x == 0 {
            continue;
        }
        for &(j, y) in &nz_b {
            if i + j >= len {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

pub fn convolve_kronecker(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    if a.is_empty() || b.is_empty() || len == 0 {
        return vec![Integer::new(); len];
    }
    let bits_a = a.iter().map(|x| x.significant_bits()).max().unwrap_or(0) as usize;
    let bits_b = b.iter().map(|x| x.significant_bits()).max().unwrap_or(0) as usize;
    let terms = a.len().min(b.len());
    let log_terms = usize::BITS as usize - terms.leading_zeros() as usize;
    // |c_k| < 2^(bits_a + bits_b + log_terms) <= 2^(slot_bits - 2)
    let slot_bits = bits_a + bits_b + log_terms + 2;
    let limbs = slot_bits.div_ceil(64);

    let product = pack(a, limbs) * pack(b, limbs);
    unpack(product, limbs, len)
}

fn pack(coeffs: &[Integer], limbs: usize) -> Integer {
    let mut pos = vec![0u64; coeffs.len() * limbs];
    let mut neg = vec![0u64; coeffs.len() * limbs];
    let mut any_neg = false;
    for (i, c) in coeffs.iter().enumerate() {
        let slot = i * limbs..(i + 1) * limbs;
        if *c > 0 {
            write_digits(c, &mut pos[slot], limbs);
        } else if *c < 0 {
            any_neg = true;
            write_digits(&Integer::from(-c), &mut neg[slot], limbs);
        }
    }
    let mut packed = Integer::from_digits(&pos, Order::Lsf);
    if any_neg {
        packed -= Integer::from_digits(&neg, Order::Lsf);
    }
    packed
}

fn write_digits(c: &Integer, slot: &mut [u64], limbs: usize) {
    let digits = c.to_digits::<u64>(Order::Lsf);
    debug_assert!(digits.len() <= limbs);
    slot[..digits.len()].copy_from_slice(&digits);
}

fn unpack(mut product: Integer, limbs: usize, len: usize) -> Vec<Integer> {
    let width = (64 * limbs) as u32;
    // Two's complement view of the low len slots.
    product.keep_bits_mut(width * len as u32);
    let mut digits = product.to_digits::<u64>(Order::Lsf);
    digits.resize(len * limbs, 0);

    let modulus = Integer::from(1) << width;
    let half = Integer::from(1) << (width - 1);
    let mut out = Vec::with_capacity(len);
    let mut borrow = false;
    for slot in digits.chunks_exact(limbs) {
        let mut c = Integer::from_digits(slot, Order::Lsf);
        if borrow {
            c += 1;
            if c == modulus {
                c = Integer::new();
            }
        }
        // The borrow is the sign of everything below this slot, i.e. of the
        // most recent nonzero coefficient.
        if c >= half {
            c -= &modulus;
            borrow = true;
        } else if c != 0 {
            borrow = false;
        }
        out.push(c);
    }
    out
}
