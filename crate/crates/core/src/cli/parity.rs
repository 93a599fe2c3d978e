//! Parity of EO-bar(2N) along arithmetic progressions and the explicit bound on
//! the first odd value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde_json::{json, Value};

use crate::arith::{factorize, gcd_i, rat, rat_to_string};
use crate::error::{Error, Result};
use crate::etaq::EtaQuotient;
use crate::oracle::{pentagonal_parity_eobar, Parity};

/// `r (mod t)` together with the derived `d = gcd(12r - 1, t)` and the least
/// `j ≥ 0` with `2^j > t/12`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundQuery {
    pub r: u64,
    pub t: u64,
}

impl BoundQuery {
    pub fn new(r: u64, t: u64) -> Result<Self> {
        if t == 0 || r >= t {
            return Err(Error::InvalidArgument(format!("need 0 <= r < t, got r = {r}, t = {t}")));
        }
        Ok(BoundQuery { r, t })
    }

    pub fn d(&self) -> u64 {
        gcd_i(12 * self.r as i64 - 1, self.t as i64)
    }

    pub fn j(&self) -> u32 {
        let mut j = 0;
        while (12u128 << j) <= self.t as u128 {
            j += 1;
        }
        j
    }
}

/// `2^{9+j} 3^7 t^6 / d^2 · Π_{p | 6t} (1 - 1/p^2) - 2^j`, exactly.
pub fn first_odd_bound(q: &BoundQuery) -> BigRational {
    let j = q.j();
    let two_j = Pow::pow(&BigInt::from(2), j);
    let t6 = Pow::pow(&BigInt::from(q.t), 6u32);
    let d = BigInt::from(q.d());
    let mut value = BigRational::new(BigInt::from(512) * &two_j * 2187 * t6, &d * &d);
    for (p, _) in factorize(6 * q.t) {
        let p2 = (p * p) as i64;
        value *= rat(p2 - 1, p2);
    }
    value - BigRational::from_integer(two_j)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OddStatus {
    Found(u64),
    /// No generalized pentagonal `g` has `4g ≡ r (mod t)`: every EO-bar(2M) in the class is even.
    Absent,
    /// Some exist, but none with `M ≤ limit`.
    BeyondLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityScan {
    pub r: u64,
    pub t: u64,
    pub limit: u64,
    pub first_even: Option<u64>,
    pub first_odd: OddStatus,
    pub bound: BigRational,
}

impl ParityScan {
    pub fn to_json(&self) -> Value {
        let (odd, status) = match self.first_odd {
            OddStatus::Found(m) => (Value::String(m.to_string()), "found"),
            OddStatus::Absent => (Value::Null, "absent"),
            OddStatus::BeyondLimit => (Value::Null, "beyond-limit"),
        };
        json!({
            "r": self.r.to_string(),
            "t": self.t.to_string(),
            "limit": self.limit.to_string(),
            "first_even_N": self.first_even.map(|n| n.to_string()),
            "first_odd_M": odd,
            "odd_status": status,
            "bound": rat_to_string(&self.bound),
        })
    }
}

/// Ascending generalized pentagonal numbers `0, 1, 2, 5, 7, 12, 15, ...`.
fn pentagonals() -> impl Iterator<Item = u64> {
    std::iter::once(0).chain((1u64..).flat_map(|k| [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2]))
}

/// Scans `N ≡ r (mod t)`, `N ≤ limit`. EO-bar(2N) is odd exactly when
/// `N = 4g` with `g` generalized pentagonal, and `4g mod t` depends only on the
/// pentagonal index mod `t`, so absence of odd values is decided exactly.
pub fn run_parity_scan(r: u64, t: u64, limit: u64) -> Result<ParityScan> {
    let q = BoundQuery::new(r, t)?;
    if limit < t {
        return Err(Error::InvalidArgument(format!("limit {limit} is below t = {t}")));
    }
    let first_even = (r..=limit)
        .step_by(t as usize)
        .find(|&n| pentagonal_parity_eobar(2 * n) == Parity::Even);

    let reachable = (0..t as i128).any(|k| {
        let g = k * (3 * k - 1) / 2;
        (4 * g).rem_euclid(t as i128) == r as i128
    });
    let first_odd = if !reachable {
        OddStatus::Absent
    } else {
        pentagonals()
            .map(|g| 4 * g)
            .take_while(|&m| m <= limit)
            .find(|&m| m % t == r)
            .map_or(OddStatus::BeyondLimit, OddStatus::Found)
    };
    Ok(ParityScan {
        r,
        t,
        limit,
        first_even,
        first_odd,
        bound: first_odd_bound(&q),
    })
}

/// `f_t = η^4(12z)/η^4(6z) · Δ^{2^j}(6tz)` on Γ0(72t).
pub fn ft_form(t: u64, j: u32) -> Result<EtaQuotient> {
    let e = 24i64
        .checked_mul(1i64.checked_shl(j).ok_or_else(|| Error::Overflow("2^j".into()))?)
        .ok_or_else(|| Error::Overflow("24·2^j".into()))?;
    EtaQuotient::new(72 * t, [(12, 4), (6, -4), (6 * t, e)])
}

/// `4 gcd(d,12)^2/12 - 4 gcd(d,6)^2/6 + 24·2^j gcd(d,6t)^2/(6t)`, the sign of
/// which decides vanishing of `f_t` at cusps with denominator `d`.
pub fn ft_bracket(d: u64, t: u64, j: u32) -> BigRational {
    let g = |a: u64| gcd_i(d as i64, a as i64) as i64;
    let (g12, g6, g6t) = (g(12), g(6), g(6 * t));
    rat(4 * g12 * g12, 12) - rat(4 * g6 * g6, 6) + rat(24 * (1 << j) * g6t * g6t, 6 * t as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::divisors;

    #[test]
    fn bound_values() {
        assert_eq!(first_odd_bound(&BoundQuery::new(0, 1).unwrap()), rat(746495, 1));
        let q = BoundQuery::new(1, 2).unwrap();
        assert_eq!((q.d(), q.j()), (1, 0));
        assert_eq!(first_odd_bound(&q), rat(512 * 2187 * 64 * 2 / 3 - 1, 1));
        assert_eq!(BoundQuery::new(0, 12).unwrap().j(), 1);
        assert_eq!(BoundQuery::new(0, 11).unwrap().j(), 0);
        assert_eq!(BoundQuery::new(1, 11).unwrap().d(), 11);
        assert!(BoundQuery::new(3, 3).is_err());
    }

    #[test]
    fn scan_small_cases() {
        let s = run_parity_scan(0, 1, 100).unwrap();
        assert_eq!(s.first_even, Some(1));
        assert_eq!(s.first_odd, OddStatus::Found(0));
        // 4g ≡ 2 (mod 4) never happens.
        assert_eq!(run_parity_scan(2, 4, 1000).unwrap().first_odd, OddStatus::Absent);
        assert_eq!(run_parity_scan(1, 4, 1000).unwrap().first_odd, OddStatus::Absent);
        assert_eq!(run_parity_scan(0, 4, 1000).unwrap().first_odd, OddStatus::Found(0));
        assert!(run_parity_scan(0, 5, 3).is_err());
    }

    #[test]
    fn scan_against_brute_force() {
        for t in 1..=12u64 {
            for r in 0..t {
                let s = run_parity_scan(r, t, 20_000).unwrap();
                let brute = (r..=20_000)
                    .step_by(t as usize)
                    .find(|&m| pentagonal_parity_eobar(2 * m) == Parity::Odd);
                match s.first_odd {
                    OddStatus::Found(m) => assert_eq!(Some(m), brute),
                    OddStatus::Absent => assert_eq!(brute, None),
                    OddStatus::BeyondLimit => panic!("r = {r}, t = {t}"),
                }
            }
        }
    }

    #[test]
    fn ft_orders_are_positive() {
        for t in 1..=12u64 {
            let j = BoundQuery::new(0, t).unwrap().j();
            let f = ft_form(t, j).unwrap();
            let c = f.classify();
            assert!(c.is_certified_cusp_form(), "t = {t}");
            assert_eq!(c.weight, rat(12 << j, 1));
            let corrected = rat(4 << j, t as i64) - rat(1, 3);
            let mut least = None::<BigRational>;
            for d in divisors(72 * t) {
                let b = ft_bracket(d, t, j);
                assert!(b >= corrected, "t = {t}, d = {d}");
                least = Some(least.map_or(b.clone(), |l| l.min(b)));
            }
            assert_eq!(least.unwrap(), corrected);
        }
    }

    #[test]
    fn displayed_ft_bound_fails_at_d_1() {
        // 2^j·6/t - 1/2 exceeds the bracket at d = 1 for t = 1, j = 0.
        assert_eq!(ft_bracket(1, 1, 0), rat(11, 3));
        assert!(ft_bracket(1, 1, 0) < rat(6, 1) - rat(1, 2));
    }
}
