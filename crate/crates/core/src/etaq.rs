//! Eta quotients `f(z) = Π_{δ | N} η(δz)^{r_δ}`: weight, the two mod-24 level
//! conditions, nebentypus character, orders at the cusps of Γ0(N), and the
//! resulting holomorphy classification.
//!
//! All orders and weights are exact rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, divisors, euler_phi, factorize, gcd, kronecker};
use crate::error::{Error, Result};
use crate::series::{build_eta_product, CoefficientDomain, EtaFactor, Series};

pub use crate::arith::index_gamma0;

/// An eta quotient of level `N`; divisors missing from the map have exponent 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

/// Cusp `c/d` of Γ0(N); only the denominator enters the order formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cusp {
    d: u64,
}

impl Cusp {
    pub fn new(d: u64, level: u64) -> Result<Self> {
        if d == 0 || level % d != 0 {
            return Err(Error::InvalidArgument(format!(
                "cusp denominator {d} does not divide {level}"
            )));
        }
        Ok(Cusp { d })
    }

    pub fn denominator(&self) -> u64 {
        self.d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormClass {
    CuspForm,
    Holomorphic,
    WeaklyHolomorphic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormClassification {
    pub weight: BigRational,
    pub integral_weight: bool,
    pub satisfies_24_conditions: bool,
    pub min_cusp_order: BigRational,
    /// Label from the sign of `min_cusp_order` alone.
    pub class: FormClass,
    /// The label describes a modular form on Γ0(N) only when both 24-conditions
    /// hold and the weight is a nonnegative integer.
    pub certified: bool,
}

impl FormClassification {
    pub fn is_certified_cusp_form(&self) -> bool {
        self.certified && self.class == FormClass::CuspForm
    }

    pub fn is_certified_holomorphic(&self) -> bool {
        self.certified && self.class != FormClass::WeaklyHolomorphic
    }
}

impl EtaQuotient {
    /// Builds a quotient; repeated divisors are summed and zero exponents dropped.
    pub fn new<I: IntoIterator<Item = (u64, i64)>>(level: u64, exponents: I) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("level must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (delta, r) in exponents {
            if delta == 0 || level % delta != 0 {
                return Err(Error::InvalidArgument(format!(
                    "{delta} does not divide the level {level}"
                )));
            }
            *map.entry(delta).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaQuotient { level, exponents: map })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponent(&self, delta: u64) -> i64 {
        self.exponents.get(&delta).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.exponents.iter().map(|(&d, &r)| (d, r))
    }

    fn sum_r(&self) -> i64 {
        self.exponents.values().sum()
    }

    /// `Σ δ r_δ`: 24 times the power of q in front of the product.
    pub fn sum_delta_r(&self) -> i64 {
        self.exponents().map(|(d, r)| d as i64 * r).sum()
    }

    /// `½ Σ r_δ`.
    pub fn weight(&self) -> BigRational {
        arith::rat(self.sum_r(), 2)
    }

    pub fn integral_weight(&self) -> Option<i64> {
        let s = self.sum_r();
        (s % 2 == 0).then_some(s / 2)
    }

    /// `(Σ δ r_δ ≡ 0 mod 24, Σ (N/δ) r_δ ≡ 0 mod 24)`.
    pub fn check_level_conditions(&self) -> (bool, bool) {
        let a = self.sum_delta_r();
        let b: i64 = self.exponents().map(|(d, r)| (self.level / d) as i64 * r).sum();
        (a.rem_euclid(24) == 0, b.rem_euclid(24) == 0)
    }

    /// Squarefree kernel of `(-1)^ℓ Π δ^{r_δ}`, with sign.
    pub fn character_kernel(&self) -> Result<BigInt> {
        let l = self
            .integral_weight()
            .ok_or_else(|| Error::NonIntegralWeight(arith::rat_to_string(&self.weight())))?;
        let mut parity: BTreeMap<u64, i64> = BTreeMap::new();
        for (delta, r) in self.exponents() {
            for (p, e) in factorize(delta) {
                *parity.entry(p).or_insert(0) += e as i64 * r;
            }
        }
        let mut kernel = BigInt::one();
        for (p, e) in parity {
            if e.rem_euclid(2) == 1 {
                kernel *= p;
            }
        }
        if l.rem_euclid(2) == 1 {
            kernel = -kernel;
        }
        Ok(kernel)
    }

    /// `χ(d) = ((-1)^ℓ Π δ^{r_δ} / d)`, evaluated on the squarefree kernel.
    pub fn character(&self, d: i64) -> Result<i8> {
        let kernel = self.character_kernel()?;
        if kernel.is_one() {
            return Ok(1);
        }
        Ok(kronecker(&kernel, &BigInt::from(d)))
    }

    /// Order of vanishing at a cusp with denominator `d`:
    /// `(N/24) Σ gcd(d,δ)^2 r_δ / (gcd(d, N/d) d δ)`.
    pub fn cusp_order(&self, cusp: Cusp) -> BigRational {
        let n = self.level;
        let d = cusp.d;
        assert!(n % d == 0, "cusp denominator must divide the level");
        let width = gcd(d, n / d);
        let mut sum = BigRational::zero();
        for (delta, r) in self.exponents() {
            let g = gcd(d, delta);
            let num = BigInt::from(g * g) * r;
            let den = BigInt::from(width) * d * delta;
            sum += BigRational::new(num, den);
        }
        sum * BigRational::new(BigInt::from(n), BigInt::from(24))
    }

    /// Order at the cusp `c/d`; `c` must be coprime to `d` and does not affect the value.
    pub fn cusp_order_at(&self, c: i64, d: u64) -> Result<BigRational> {
        if arith::gcd_i(c, d as i64) != 1 {
            return Err(Error::InvalidArgument(format!("{c}/{d} is not in lowest terms")));
        }
        Ok(self.cusp_order(Cusp::new(d, self.level)?))
    }

    /// Orders at every divisor of the level, ascending by divisor.
    pub fn cusp_orders(&self) -> Vec<(u64, BigRational)> {
        divisors(self.level)
            .into_iter()
            .map(|d| (d, self.cusp_order(Cusp { d })))
            .collect()
    }

    /// `Σ_{d | N} (#cusps with denominator d) · order(d)`.
    pub fn valence_sum(&self) -> BigRational {
        cusp_census(self.level)
            .into_iter()
            .map(|(d, count)| self.cusp_order(Cusp { d }) * BigInt::from(count))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn classify(&self) -> FormClassification {
        let weight = self.weight();
        let integral = self.integral_weight();
        let (c1, c2) = self.check_level_conditions();
        let min = self
            .cusp_orders()
            .into_iter()
            .map(|(_, o)| o)
            .min()
            .expect("every level has the cusp at infinity");
        let class = if min.is_positive() {
            FormClass::CuspForm
        } else if min.is_zero() {
            FormClass::Holomorphic
        } else {
            FormClass::WeaklyHolomorphic
        };
        FormClassification {
            certified: c1 && c2 && integral.is_some_and(|l| l >= 0),
            integral_weight: integral.is_some(),
            satisfies_24_conditions: c1 && c2,
            min_cusp_order: min,
            class,
            weight,
        }
    }

    /// q-expansion `q^{Σδr/24} Π (q^δ; q^δ)^{r_δ}` up to `q^t`. Needs `Σ δ r_δ`
    /// to be a nonnegative multiple of 24.
    pub fn to_series(&self, t: usize, domain: CoefficientDomain) -> Result<Series> {
        let s = self.sum_delta_r();
        if s < 0 || s % 24 != 0 {
            return Err(Error::InvalidArgument(format!(
                "Σ δ r_δ = {s} is not a nonnegative multiple of 24"
            )));
        }
        let v = (s / 24) as usize;
        if t < v {
            return Ok(Series::zero(domain, t));
        }
        let factors: Vec<EtaFactor> = self
            .exponents()
            .map(|(d, r)| EtaFactor { scale: d, exponent: r })
            .collect();
        let body = if factors.is_empty() {
            Series::one(domain, t - v)
        } else {
            build_eta_product(&factors, t - v, domain)?
        };
        Ok(body.inflate(1, t).shift(v))
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.level)?;
        for (i, (d, r)) in self.exponents().enumerate() {
            write!(f, "{} {d}:{r}", if i == 0 { "" } else { "," })?;
        }
        Ok(())
    }
}

impl FromStr for EtaQuotient {
    type Err = Error;

    /// Parses `N; δ1:r1, δ2:r2, ...`.
    fn from_str(s: &str) -> Result<Self> {
        let (level, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `N; d:r, ...`, got `{s}`")))?;
        let level: u64 = level
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("level `{}`: {e}", level.trim())))?;
        let mut pairs = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (d, r) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `delta:exponent`, got `{item}`")))?;
            let d: u64 = d
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("divisor `{d}`: {e}")))?;
            let r: i64 = r
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("exponent `{r}`: {e}")))?;
            pairs.push((d, r));
        }
        EtaQuotient::new(level, pairs)
    }
}

/// Number of Γ0(N)-inequivalent cusps with each denominator `d | N`.
pub fn cusp_census(level: u64) -> Vec<(u64, u64)> {
    divisors(level)
        .into_iter()
        .map(|d| (d, euler_phi(gcd(d, level / d))))
        .collect()
}

/// Valence check for a certified holomorphic quotient: the cusp orders add up to
/// `ℓ · [SL2(Z) : Γ0(N)] / 12`.
pub fn valence_consistent(eq: &EtaQuotient) -> Option<bool> {
    let c = eq.classify();
    if !c.satisfies_24_conditions || !c.integral_weight {
        return None;
    }
    let expected = c.weight * BigInt::from(index_gamma0(eq.level)) / BigInt::from(12);
    Some(eq.valence_sum() == expected)
}

/// Integer value of a rational, if it is one.
pub fn as_integer(r: &BigRational) -> Option<i64> {
    r.is_integer().then(|| r.to_integer().to_i64()).flatten()
}
