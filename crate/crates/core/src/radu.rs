//! Radu's finite criterion for congruences `c_r(mn + t') ≡ 0 (mod u)`, where
//! `Σ c_r(n) q^n = Π_{δ | M} (q^δ; q^δ)^{r_δ}`.
//!
//! The pipeline checks membership in Δ*, nonnegativity of the cusp bounds at a
//! complete set of double coset representatives, and then the congruence for
//! `0 ≤ n ≤ ⌊ν⌋` on every residue in `P_{m,r}(t)`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arith::{divisors, factorize, gcd, gcd_i, index_gamma0, is_squarefree, rat, rat_to_string};
use crate::error::{Error, Result};
use crate::series::{build_eta_product, CoefficientDomain, EtaFactor, Series};

/// `(m, M, N, r, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaduTuple {
    pub m: u64,
    pub big_m: u64,
    pub n: u64,
    r: BTreeMap<u64, i64>,
    pub t: u64,
}

impl RaduTuple {
    /// `r` may omit divisors of `M` (exponent 0) but must not name non-divisors.
    pub fn new(m: u64, big_m: u64, n: u64, r: BTreeMap<u64, i64>, t: u64) -> Result<Self> {
        if m == 0 || big_m == 0 || n == 0 {
            return Err(Error::InvalidArgument("m, M and N must be positive".into()));
        }
        if t >= m {
            return Err(Error::InvalidArgument(format!("t = {t} is not in [0, {m})")));
        }
        if let Some(d) = r.keys().find(|&&d| d == 0 || big_m % d != 0) {
            return Err(Error::InvalidArgument(format!("{d} does not divide M = {big_m}")));
        }
        let r = r.into_iter().filter(|&(_, e)| e != 0).collect();
        Ok(RaduTuple { m, big_m, n, r, t })
    }

    /// Exponents listed against the divisors of `M` in ascending order.
    pub fn from_vector(m: u64, big_m: u64, n: u64, r: &[i64], t: u64) -> Result<Self> {
        let ds = divisors(big_m);
        if ds.len() != r.len() {
            return Err(Error::InvalidArgument(format!(
                "M = {big_m} has {} divisors, got {} exponents",
                ds.len(),
                r.len()
            )));
        }
        RaduTuple::new(m, big_m, n, ds.into_iter().zip(r.iter().copied()).collect(), t)
    }

    pub fn r(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.r.iter().map(|(&d, &e)| (d, e))
    }

    /// `k = gcd(m² - 1, 24)`.
    pub fn k(&self) -> u64 {
        let m = self.m as u128 % 24;
        gcd(((m * m + 23) % 24) as u64, 24)
    }

    /// `(s, j)` with `Π δ^{|r_δ|} = 2^s j`, `j` odd.
    pub fn two_adic_split(&self) -> (u64, BigInt) {
        let mut s = 0u64;
        let mut j = BigInt::from(1);
        for (d, e) in self.r() {
            for (p, a) in factorize(d) {
                let total = a as u64 * e.unsigned_abs();
                if p == 2 {
                    s += total;
                } else {
                    j *= num_traits::pow(BigInt::from(p), total as usize);
                }
            }
        }
        (s, j)
    }

    fn sum_r(&self) -> i128 {
        self.r().map(|(_, e)| e as i128).sum()
    }

    fn sum_delta_r(&self) -> i128 {
        self.r().map(|(d, e)| d as i128 * e as i128).sum()
    }
}

/// Each Δ* condition, evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaStarReport {
    pub k: u64,
    pub s: u64,
    pub j: BigInt,
    pub conditions: [bool; 6],
}

impl DeltaStarReport {
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|&c| c)
    }

    /// 1-based numbers of the failing conditions.
    pub fn failed(&self) -> Vec<usize> {
        (1..=6).filter(|&i| !self.conditions[i - 1]).collect()
    }
}

pub fn delta_star_check(tuple: &RaduTuple) -> DeltaStarReport {
    let (m, n) = (tuple.m, tuple.n);
    let k = tuple.k();
    let (s, j) = tuple.two_adic_split();
    let (mi, ni, ki) = (m as i128, n as i128, k as i128);

    let c1 = factorize(m).iter().all(|&(p, _)| n % p == 0);
    let c2 = tuple.r().all(|(d, _)| (mi * ni) % d as i128 == 0);
    let c3 = {
        // Σ r_δ mN/δ is an integer only when every δ divides mN; condition 2 covers that.
        let sum: i128 = tuple
            .r()
            .map(|(d, e)| {
                let q = mi * ni;
                if q % d as i128 == 0 {
                    e as i128 * (q / d as i128)
                } else {
                    0
                }
            })
            .sum();
        c2 && (ki * ni * sum).rem_euclid(24) == 0
    };
    let c4 = (ki * ni * tuple.sum_r()).rem_euclid(8) == 0;
    let c5 = {
        let a = -24 * ki * tuple.t as i128 - ki * tuple.sum_delta_r();
        let modulus = 24 * mi;
        let g = a.abs().gcd(&modulus);
        ni % (modulus / g) == 0
    };
    let c6 = if m % 2 == 0 {
        let first = (ki * ni) % 4 == 0 && (s as i128 * ni) % 8 == 0;
        let second = s % 2 == 0 && ((BigInt::from(1) - &j) * n).mod_floor(&BigInt::from(8)).is_zero();
        first || second
    } else {
        true
    };
    DeltaStarReport {
        k,
        s,
        j,
        conditions: [c1, c2, c3, c4, c5, c6],
    }
}

/// Squares of units mod `modulus`, as canonical representatives in `[0, modulus)`.
pub fn unit_squares(modulus: u64) -> BTreeSet<u64> {
    (1..modulus.max(2))
        .filter(|&x| gcd(x, modulus) == 1)
        .map(|x| ((x as u128 * x as u128) % modulus as u128) as u64)
        .collect()
}

/// `P_{m,r}(t) = { ts + ((s-1)/24) Σ δ r_δ mod m : [s] a square unit mod 24m }`.
pub fn compute_p(tuple: &RaduTuple) -> BTreeSet<u64> {
    let m = tuple.m as i128;
    let sdr = tuple.sum_delta_r();
    unit_squares(24 * tuple.m)
        .into_iter()
        .map(|s| {
            assert!(s % 24 == 1, "square of a unit mod 24m is 1 mod 24");
            let s = s as i128;
            ((tuple.t as i128 * s + (s - 1) / 24 * sdr).rem_euclid(m)) as u64
        })
        .collect()
}

/// `[[1, 0], [δ, 1]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CosetRep {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl CosetRep {
    pub fn lower(delta: u64) -> Self {
        CosetRep {
            a: 1,
            b: 0,
            c: delta as i64,
            d: 1,
        }
    }

    pub fn determinant(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }
}

/// Double coset representatives of Γ0(N)\SL2(Z)/Γ∞, one per divisor of `N`.
/// Only available when `N` or `N/2` is squarefree.
pub fn coset_reps(n: u64) -> Result<Vec<CosetRep>> {
    let ok = is_squarefree(n) || (n % 2 == 0 && is_squarefree(n / 2));
    if !ok {
        return Err(Error::UnsupportedLevel(n));
    }
    Ok(divisors(n).into_iter().map(CosetRep::lower).collect())
}

/// `p_{m,r}(γ) = min_λ (1/24) Σ r_δ gcd²(δa + δkλc, mc) / (δm)`.
pub fn lower_bound_pmr(gamma: &CosetRep, tuple: &RaduTuple) -> BigRational {
    let k = tuple.k() as i64;
    let m = tuple.m as i64;
    (0..m)
        .map(|lambda| {
            tuple
                .r()
                .map(|(d, e)| {
                    let d = d as i64;
                    let g = gcd_i(d * gamma.a + d * k * lambda * gamma.c, m * gamma.c) as i64;
                    rat(e * g * g, 24 * d * m)
                })
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .min()
        .unwrap_or_else(BigRational::zero)
}

/// `p*_{r'}(γ) = (1/24) Σ r'_δ gcd²(δ, c) / δ`.
pub fn p_star(gamma: &CosetRep, rprime: &BTreeMap<u64, i64>) -> BigRational {
    rprime
        .iter()
        .map(|(&d, &e)| {
            let g = gcd_i(d as i64, gamma.c) as i64;
            rat(e * g * g, 24 * d as i64)
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

/// `ν = (1/24)[(Σ r_δ + Σ r'_δ)[Γ:Γ0(N)] - Σ δ r'_δ] - (1/24m) Σ δ r_δ - t_min/m`.
pub fn nu_bound(tuple: &RaduTuple, rprime: &BTreeMap<u64, i64>, p_set: &BTreeSet<u64>) -> BigRational {
    let t_min = *p_set.iter().next().expect("P contains t");
    let sum_rp: i128 = rprime.values().map(|&e| e as i128).sum();
    let sum_drp: i128 = rprime.iter().map(|(&d, &e)| d as i128 * e as i128).sum();
    let idx = index_gamma0(tuple.n) as i128;
    let big = |x: i128| BigInt::from(x);
    let first = BigRational::new(big((tuple.sum_r() + sum_rp) * idx - sum_drp), big(24));
    let second = BigRational::new(big(tuple.sum_delta_r()), big(24 * tuple.m as i128));
    let third = BigRational::new(big(t_min as i128), big(tuple.m as i128));
    first - second - third
}

/// A claim `c_r(mn + t') ≡ 0 (mod u)` for every `t' ∈ P_{m,r}(t)` and `n ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceClaim {
    pub tuple: RaduTuple,
    pub rprime: BTreeMap<u64, i64>,
    pub u: u64,
}

/// Claim file layout; the keys of `r` and `rprime` are divisors as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimJson {
    pub m: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub r: BTreeMap<u64, i64>,
    pub t: u64,
    #[serde(default)]
    pub rprime: BTreeMap<u64, i64>,
    pub u: u64,
}

impl TryFrom<ClaimJson> for CongruenceClaim {
    type Error = Error;

    fn try_from(c: ClaimJson) -> Result<Self> {
        let tuple = RaduTuple::new(c.m, c.big_m, c.n, c.r, c.t)?;
        if let Some(d) = c.rprime.keys().find(|&&d| d == 0 || c.n % d != 0) {
            return Err(Error::InvalidArgument(format!(
                "r' names {d}, which does not divide N = {}",
                c.n
            )));
        }
        CongruenceClaim::new(tuple, c.rprime, c.u)
    }
}

impl CongruenceClaim {
    pub fn new(tuple: RaduTuple, rprime: BTreeMap<u64, i64>, u: u64) -> Result<Self> {
        if u == 0 || u > u32::MAX as u64 {
            return Err(Error::InvalidModulus(u));
        }
        Ok(CongruenceClaim { tuple, rprime, u })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: ClaimJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        CongruenceClaim::try_from(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub n: u64,
    pub t_prime: u64,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    VerifiedForAllN,
    Counterexample(Witness),
    PreconditionFailed(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub delta_star: DeltaStarReport,
    /// `(δ, p_{m,r}(γ_δ) + p*_{r'}(γ_δ))` per coset representative, when available.
    pub bounds: Vec<(u64, BigRational)>,
    pub nu: BigRational,
    pub p_set: BTreeSet<u64>,
    /// Arguments `mn + t'` whose coefficients were checked.
    pub checked: Vec<u64>,
}

impl VerificationReport {
    pub fn floor_nu(&self) -> i64 {
        self.nu.floor().to_integer().to_i64().expect("ν fits in i64")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strings = |v: &mut dyn Iterator<Item = u64>| v.map(|x| x.to_string()).collect::<Vec<_>>();
        let mut out = json!({
            "verdict": match self.verdict {
                Verdict::VerifiedForAllN => "verified-for-all-n",
                Verdict::Counterexample(_) => "counterexample",
                Verdict::PreconditionFailed(_) => "precondition-failed",
            },
            "nu": rat_to_string(&self.nu),
            "P": strings(&mut self.p_set.iter().copied()),
            "checked": strings(&mut self.checked.iter().copied()),
            "delta_star": {
                "k": self.delta_star.k.to_string(),
                "s": self.delta_star.s.to_string(),
                "j": self.delta_star.j.to_string(),
                "failed": self.delta_star.failed().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            },
            "bounds": self.bounds.iter().map(|(d, b)| json!({"delta": d.to_string(), "value": rat_to_string(b)})).collect::<Vec<_>>(),
        });
        match &self.verdict {
            Verdict::Counterexample(w) => {
                out["witness"] = json!({
                    "n": w.n.to_string(),
                    "t_prime": w.t_prime.to_string(),
                    "value": w.value.to_string(),
                });
            }
            Verdict::PreconditionFailed(which) => {
                out["failed"] = json!(which);
            }
            Verdict::VerifiedForAllN => {}
        }
        out
    }
}

/// `Σ c_r(n) q^n` mod `u` up to `q^t`, built directly in the modular domain.
pub fn c_r_series(tuple: &RaduTuple, t: usize, u: u32) -> Result<Series> {
    let domain = CoefficientDomain::modular(u as u64)?;
    let factors: Vec<EtaFactor> = tuple.r().map(|(d, e)| EtaFactor { scale: d, exponent: e }).collect();
    if factors.is_empty() {
        return Ok(Series::one(domain, t));
    }
    build_eta_product(&factors, t, domain)
}

/// First `(n, t')` with `n ≤ n_max` and `c_r(mn + t') ≢ 0 (mod u)`.
pub fn first_failure(tuple: &RaduTuple, p_set: &BTreeSet<u64>, n_max: u64, u: u32) -> Result<Option<Witness>> {
    let t_max = (tuple.m * n_max + p_set.iter().max().copied().unwrap_or(0)) as usize;
    let series = c_r_series(tuple, t_max, u)?;
    let res = series.residues().expect("modular");
    for n in 0..=n_max {
        for &tp in p_set {
            let v = res[(tuple.m * n + tp) as usize];
            if v != 0 {
                return Ok(Some(Witness {
                    n,
                    t_prime: tp,
                    value: v,
                }));
            }
        }
    }
    Ok(None)
}

/// Runs the whole check. A witness found among the initial cases is reported as a
/// counterexample even when a precondition fails, since it refutes the claim
/// outright; otherwise any failed precondition blocks the "for all n" verdict.
pub fn verify_claim(claim: &CongruenceClaim) -> Result<VerificationReport> {
    let tuple = &claim.tuple;
    let delta_star = delta_star_check(tuple);
    let mut failed: Vec<String> = delta_star
        .failed()
        .into_iter()
        .map(|c| format!("delta-star condition {c}"))
        .collect();

    let mut bounds = Vec::new();
    match coset_reps(tuple.n) {
        Ok(reps) => {
            for g in reps {
                let b = lower_bound_pmr(&g, tuple) + p_star(&g, &claim.rprime);
                if b.is_negative() {
                    failed.push(format!("negative cusp bound at delta = {}", g.c));
                }
                bounds.push((g.c as u64, b));
            }
        }
        Err(e) => failed.push(e.to_string()),
    }

    let p_set = compute_p(tuple);
    let nu = nu_bound(tuple, &claim.rprime, &p_set);
    let floor = nu.floor().to_integer();
    let n_max = if floor.is_negative() { None } else { floor.to_u64() };

    let mut checked = Vec::new();
    let mut witness = None;
    if claim.u > 1 {
        if let Some(n_max) = n_max {
            for n in 0..=n_max {
                checked.extend(p_set.iter().map(|&tp| tuple.m * n + tp));
            }
            witness = first_failure(tuple, &p_set, n_max, claim.u as u32)?;
        }
    }
    let verdict = if claim.u == 1 {
        Verdict::VerifiedForAllN
    } else if let Some(w) = witness {
        Verdict::Counterexample(w)
    } else if !failed.is_empty() {
        Verdict::PreconditionFailed(failed)
    } else {
        Verdict::VerifiedForAllN
    };
    Ok(VerificationReport {
        verdict,
        delta_star,
        bounds,
        nu,
        p_set,
        checked,
    })
}

/// Independent sweep of `c_r(mn + t')` for `n ≤ horizon`; `None` when every value vanishes mod `u`.
pub fn spot_check(claim: &CongruenceClaim, horizon: u64) -> Result<Option<Witness>> {
    if claim.u == 1 {
        return Ok(None);
    }
    first_failure(&claim.tuple, &compute_p(&claim.tuple), horizon, claim.u as u32)
}
