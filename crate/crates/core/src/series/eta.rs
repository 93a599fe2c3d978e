//! Expansions of `(q^δ; q^δ)_∞^e` and products of them.
//!
//! Every factor is split into sparse pieces: Euler's pentagonal series for `(q;q)`
//! and Jacobi's series `(q;q)^3 = Σ (-1)^k (2k+1) q^{k(k+1)/2}`. Positive pieces are
//! applied with sparse×dense multiplication and negative ones with sparse division,
//! so a product costs O(T·√T) per piece.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{CoefficientDomain, Series};
use crate::arith::generalized_pentagonals;
use crate::error::{Error, Result};

/// One factor `(q^scale; q^scale)_∞^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EtaFactor {
    pub scale: u64,
    pub exponent: i64,
}

impl EtaFactor {
    pub fn new(scale: u64, exponent: i64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::InvalidArgument("eta factor scale must be positive".into()));
        }
        Ok(EtaFactor { scale, exponent })
    }
}

fn pentagonal_terms(scale: usize, t: usize) -> Vec<(usize, i64)> {
    generalized_pentagonals((t / scale) as u64)
        .into_iter()
        .map(|(g, s)| (g as usize * scale, s))
        .collect()
}

fn jacobi_cube_terms(scale: usize, t: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2 * scale;
        if e > t {
            break;
        }
        let c = (2 * k + 1) as i64;
        out.push((e, if k % 2 == 0 { c } else { -c }));
        k += 1;
    }
    out
}

/// Sparse pieces whose product is `(q^scale; q^scale)^|exponent|`.
fn pieces(scale: usize, exponent: i64, t: usize) -> Vec<Vec<(usize, i64)>> {
    let e = exponent.unsigned_abs();
    let mut out = Vec::new();
    if e == 0 {
        return out;
    }
    let cube = jacobi_cube_terms(scale, t);
    let pent = pentagonal_terms(scale, t);
    for _ in 0..e / 3 {
        out.push(cube.clone());
    }
    for _ in 0..e % 3 {
        out.push(pent.clone());
    }
    out
}

/// `Π (1 - q^{nδ})^e` truncated at `q^t`; negative exponents give the inverse series.
pub fn expand_eta_factor(factor: EtaFactor, t: usize, domain: CoefficientDomain) -> Series {
    build_eta_product(&[factor], t, domain).expect("single eta factor has unit constant term")
}

/// Product of eta factors truncated at `q^t`.
///
/// When all scales share a common factor `g`, the product is computed in `q^g`
/// at truncation `t/g` and spread back out.
pub fn build_eta_product(factors: &[EtaFactor], t: usize, domain: CoefficientDomain) -> Result<Series> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("eta product needs at least one factor".into()));
    }
    if let Some(f) = factors.iter().find(|f| f.scale == 0) {
        return Err(Error::InvalidArgument(format!(
            "eta factor scale must be positive, got {}",
            f.scale
        )));
    }
    let active: Vec<&EtaFactor> = factors.iter().filter(|f| f.exponent != 0).collect();
    let g = active.iter().fold(0u64, |acc, f| acc.gcd(&f.scale));
    if g == 0 {
        return Ok(Series::one(domain, t));
    }
    let g = g as usize;
    let inner_t = t / g;
    let mut acc = Series::one(domain, inner_t);
    for f in active.iter().filter(|f| f.exponent > 0) {
        for piece in pieces(f.scale as usize / g, f.exponent, inner_t) {
            acc = acc.mul_terms(&piece);
        }
    }
    for f in active.iter().filter(|f| f.exponent < 0) {
        for piece in pieces(f.scale as usize / g, f.exponent, inner_t) {
            acc = acc.div_terms(&piece)?;
        }
    }
    Ok(if g == 1 { acc } else { acc.inflate(g, t) })
}

fn product(factors: &[(u64, i64)], t: usize) -> Series {
    let fs: Vec<EtaFactor> = factors
        .iter()
        .map(|&(s, e)| EtaFactor { scale: s, exponent: e })
        .collect();
    build_eta_product(&fs, t, CoefficientDomain::Exact).expect("eta products are invertible")
}

/// First index where the 2-dissection of `1/(q;q)^2` fails when the second
/// summand carries `coefficient` in place of 2, or `None` if it holds to `q^t`.
pub fn dissection_mismatch(t: usize, coefficient: i64) -> Option<usize> {
    let lhs = product(&[(1, -2)], t);
    let even = product(&[(8, 5), (2, -5), (16, -2)], t);
    let odd = product(&[(4, 2), (16, 2), (2, -5), (8, -1)], t)
        .shift(1)
        .scale(coefficient);
    let rhs = even.add(&odd).expect("same domain");
    (0..=t).find(|&n| lhs.coeff(n) != rhs.coeff(n))
}

/// Checks the 2-dissection
/// `1/(q;q)^2 = (q^8;q^8)^5/((q^2;q^2)^5 (q^16;q^16)^2) + 2q (q^4;q^4)^2 (q^16;q^16)^2/((q^2;q^2)^5 (q^8;q^8))`
/// exactly up to `q^t`.
pub fn dissection_check(t: usize) -> bool {
    dissection_mismatch(t, 2).is_none()
}
