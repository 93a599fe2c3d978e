//! Convolution kernels. Every product and quotient in the crate goes through one of
//! the four functions here: a sparse operand (its nonzero terms, sorted by exponent)
//! against a dense one, in either coefficient domain.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

const BLOCK: usize = 4096;

/// How many `(m-1)^2` products fit on top of a residue in a u64 before reducing.
fn batch_len(m: u64) -> usize {
    let max_prod = (m - 1) * (m - 1);
    if max_prod == 0 {
        return usize::MAX;
    }
    ((u64::MAX - m) / max_prod).min(usize::MAX as u64) as usize
}

pub(crate) fn mod_inverse(x: u32, m: u32) -> Option<u32> {
    let (mut a, mut b) = (x as i64 % m as i64, m as i64);
    let (mut x0, mut x1) = (1i64, 0i64);
    while b != 0 {
        let q = a / b;
        (a, b) = (b, a - q * b);
        (x0, x1) = (x1, x0 - q * x1);
    }
    if a != 1 {
        return None;
    }
    Some(x0.rem_euclid(m as i64) as u32)
}

/// `dense * sparse` truncated to `len` coefficients, mod `m`.
pub(crate) fn mod_mul_sparse(dense: &[u32], sparse: &[(usize, u32)], len: usize, m: u32) -> Vec<u32> {
    let mm = m as u64;
    let batch = batch_len(mm);
    let mut acc = vec![0u64; len];
    let mut pending = 0usize;
    for &(e, s) in sparse {
        if e >= len {
            break;
        }
        if s == 0 {
            continue;
        }
        let s = s as u64;
        for (o, &d) in acc[e..].iter_mut().zip(dense) {
            *o += s * d as u64;
        }
        pending += 1;
        if pending >= batch {
            acc.iter_mut().for_each(|o| *o %= mm);
            pending = 0;
        }
    }
    acc.into_iter().map(|x| (x % mm) as u32).collect()
}

/// Solves `out * sparse = num` mod `m`. `sparse[0]` must be the constant term.
///
/// Terms with exponent at least `BLOCK` only read finished blocks, so they are
/// applied as contiguous slice updates; the short-range terms run sequentially.
pub(crate) fn mod_div_sparse(num: &[u32], sparse: &[(usize, u32)], m: u32) -> Result<Vec<u32>> {
    let s0 = match sparse.first() {
        Some(&(0, s)) => s,
        _ => return Err(Error::NonUnitConstant("0".into())),
    };
    let inv = mod_inverse(s0, m).ok_or_else(|| Error::NonUnitConstant(s0.to_string()))? as u64;
    let mm = m as u64;
    let batch = batch_len(mm);
    let len = num.len();
    let rest: Vec<(usize, u64)> = sparse[1..]
        .iter()
        .filter(|&&(e, s)| s != 0 && e < len)
        .map(|&(e, s)| (e, (mm - s as u64) % mm))
        .collect();
    let split = rest.partition_point(|&(e, _)| e < BLOCK);
    let (near, far) = rest.split_at(split);

    let mut out = vec![0u32; len];
    let mut acc = vec![0u64; BLOCK];
    let mut start = 0;
    while start < len {
        let end = (start + BLOCK).min(len);
        let w = end - start;
        for (a, &x) in acc[..w].iter_mut().zip(&num[start..end]) {
            *a = x as u64;
        }
        let mut pending = 0usize;
        for &(e, s) in far {
            if e >= end {
                break;
            }
            let lo = start.max(e);
            let (done, _) = out.split_at(start);
            let src = &done[lo - e..end - e];
            for (d, &b) in acc[lo - start..w].iter_mut().zip(src) {
                *d += s * b as u64;
            }
            pending += 1;
            if pending >= batch {
                acc[..w].iter_mut().for_each(|d| *d %= mm);
                pending = 0;
            }
        }
        for n in start..end {
            let mut a = acc[n - start] % mm;
            let mut cnt = 0usize;
            for &(e, s) in near {
                if e > n {
                    break;
                }
                a += s * out[n - e] as u64;
                cnt += 1;
                if cnt >= batch {
                    a %= mm;
                    cnt = 0;
                }
            }
            out[n] = ((a % mm) * inv % mm) as u32;
        }
        start = end;
    }
    Ok(out)
}

/// `dense * sparse` over the integers, truncated to `len` coefficients.
pub(crate) fn exact_mul_sparse(dense: &[BigInt], sparse: &[(usize, BigInt)], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    let minus_one = -BigInt::one();
    for (e, s) in sparse {
        let e = *e;
        if e >= len {
            break;
        }
        if s.is_zero() {
            continue;
        }
        for (o, d) in out[e..].iter_mut().zip(dense) {
            if d.is_zero() {
                continue;
            }
            if s.is_one() {
                *o += d;
            } else if *s == minus_one {
                *o -= d;
            } else {
                *o += s * d;
            }
        }
    }
    out
}

/// Solves `out * sparse = num` over the integers; the constant term must be ±1.
pub(crate) fn exact_div_sparse(num: &[BigInt], sparse: &[(usize, BigInt)]) -> Result<Vec<BigInt>> {
    let s0 = match sparse.first() {
        Some((0, s)) => s.clone(),
        _ => return Err(Error::NonUnitConstant("0".into())),
    };
    let negate = if s0.is_one() {
        false
    } else if s0 == -BigInt::one() {
        true
    } else {
        return Err(Error::NonUnitConstant(s0.to_string()));
    };
    let len = num.len();
    let rest: Vec<&(usize, BigInt)> = sparse[1..].iter().filter(|(e, s)| !s.is_zero() && *e < len).collect();
    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len {
        let mut a = num[n].clone();
        for (e, s) in rest.iter().map(|t| (t.0, &t.1)) {
            if e > n {
                break;
            }
            let b = &out[n - e];
            if !b.is_zero() {
                a -= s * b;
            }
        }
        out.push(if negate { -a } else { a });
    }
    Ok(out)
}
