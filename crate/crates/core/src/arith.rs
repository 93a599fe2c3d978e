//! Small integer number theory shared by the eta-quotient, Hecke and Radu code.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// gcd on absolute values; `gcd(0, 0) = 0`.
pub fn gcd_i(a: i64, b: i64) -> u64 {
    a.unsigned_abs().gcd(&b.unsigned_abs())
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of zero");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization as (prime, exponent) pairs, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Sieve of Eratosthenes: all primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Jacobi symbol (a/n) for odd positive n.
fn jacobi(a: &BigInt, n: &BigInt) -> i8 {
    debug_assert!(n.is_positive() && n.is_odd());
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut sign = 1i8;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            sign = -sign;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}

/// Kronecker symbol (a/n), extended to all integers n.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut result = 1i8;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    let eight = BigInt::from(8);
    while n.is_even() {
        if a.is_even() {
            return 0;
        }
        n >>= 1;
        let r = a.mod_floor(&eight);
        if r == BigInt::from(3) || r == BigInt::from(5) {
            result = -result;
        }
    }
    if n.is_one() {
        return result;
    }
    result * jacobi(a, &n)
}

pub fn kronecker_i(a: i64, n: i64) -> i8 {
    kronecker(&BigInt::from(a), &BigInt::from(n))
}

/// Index of Gamma_0(N) in SL_2(Z): `N * prod_{p | N} (1 + 1/p)`.
pub fn index_gamma0(n: u64) -> u64 {
    assert!(n >= 1);
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p + 1))
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational as `p/q`, or `p` when integral.
pub fn rat_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_perfect_square(n: u64) -> bool {
    let s = n.sqrt();
    s * s == n
}

/// Whether `n = k(3k-1)/2` for some integer k (equivalently 24n+1 is a square).
pub fn is_generalized_pentagonal(n: u64) -> bool {
    match n.checked_mul(24).and_then(|x| x.checked_add(1)) {
        Some(x) => is_perfect_square(x),
        None => {
            let x: BigInt = BigInt::from(n) * 24u32 + 1u32;
            let s = x.sqrt();
            &s * &s == x
        }
    }
}

/// Generalized pentagonal numbers `<= limit` in ascending order, each with its sign
/// `(-1)^k` in Euler's pentagonal number theorem.
pub fn generalized_pentagonals(limit: u64) -> Vec<(u64, i64)> {
    let mut out = vec![(0, 1)];
    let mut k: u64 = 1;
    loop {
        let a = k * (3 * k - 1) / 2;
        if a > limit {
            break;
        }
        let sign = if k % 2 == 1 { -1 } else { 1 };
        out.push((a, sign));
        let b = k * (3 * k + 1) / 2;
        if b <= limit {
            out.push((b, sign));
        }
        k += 1;
    }
    out
}
