//! Hecke operators `T_p` on q-expansions, eigenform residual checks, and the two
//! infinite families of EO-bar congruences (mod 2 from η⁸(3z), mod 8 from
//! η⁵(96z)/η(24z)).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::arith::{gcd, is_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::etaq::EtaQuotient;
use crate::series::{named_series, CoefficientDomain, NamedSeries, Series};

/// Data fixing `T_p` on forms of weight `ℓ` with character value `χ(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeckeContext {
    pub weight: u32,
    pub p: u64,
    pub chi: i8,
}

impl HeckeContext {
    pub fn new(weight: u32, p: u64, chi: i8) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if weight == 0 {
            return Err(Error::InvalidArgument("weight must be at least 1".into()));
        }
        if !(-1..=1).contains(&chi) {
            return Err(Error::InvalidArgument(format!("character value {chi}")));
        }
        Ok(HeckeContext { weight, p, chi })
    }

    /// Weight and `χ(p)` taken from an eta quotient.
    pub fn for_eta_quotient(eq: &EtaQuotient, p: u64) -> Result<Self> {
        let w = eq
            .integral_weight()
            .filter(|&w| w >= 1)
            .ok_or_else(|| Error::NonIntegralWeight(crate::arith::rat_to_string(&eq.weight())))?;
        let chi = eq.character(p as i64)?;
        HeckeContext::new(w as u32, p, chi)
    }

    /// `χ(p) p^{ℓ-1}`.
    pub fn twist(&self) -> BigInt {
        BigInt::from(self.chi) * Pow::pow(&BigInt::from(self.p), self.weight - 1)
    }
}

/// `g(n) = f(pn) + χ(p) p^{ℓ-1} f(n/p)`, the second term only when `p | n`.
/// The result is truncated at `⌊T/p⌋`.
pub fn apply_tp(f: &Series, ctx: &HeckeContext) -> Result<Series> {
    let p = ctx.p as usize;
    let t = f.truncation();
    if t < p {
        return Err(Error::TruncationTooSmall { need: p, have: t });
    }
    if let Some(m) = f.domain().modulus() {
        if ctx.weight > 1 && gcd(ctx.p, m as u64) > 1 {
            return Err(Error::InformationLoss { p: ctx.p, modulus: m });
        }
    }
    let twist = ctx.twist();
    let out_t = t / p;
    let coeffs: Vec<BigInt> = (0..=out_t)
        .map(|n| {
            let mut c = f.coeff(p * n);
            if n % p == 0 && !twist.is_zero() {
                c += &twist * f.coeff(n / p);
            }
            c
        })
        .collect();
    let g = Series::from_bigints(CoefficientDomain::Exact, coeffs);
    match f.domain().modulus() {
        Some(m) => g.reduce(m),
        None => Ok(g),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenStatus {
    ExactMatch,
    MismatchAt(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenReport {
    pub p: u64,
    pub lambda: BigInt,
    /// Largest `n` up to which the eigen identity was confirmed.
    pub checked_to: usize,
    pub status: EigenStatus,
}

impl EigenReport {
    pub fn to_json(&self) -> serde_json::Value {
        let status = match self.status {
            EigenStatus::ExactMatch => "exact-match".to_string(),
            EigenStatus::MismatchAt(n) => format!("mismatch-at({n})"),
        };
        json!({
            "p": self.p.to_string(),
            "lambda": self.lambda.to_string(),
            "checked_to": self.checked_to.to_string(),
            "status": status,
        })
    }
}

/// Reads `λ(p) = a(vp)` for a form whose first nonzero coefficient `a(v)` is 1,
/// then checks `T_p f = λ(p) f` at every index up to `⌊T/p⌋`.
pub fn eigen_residual(f: &Series, ctx: &HeckeContext) -> Result<EigenReport> {
    let v = f
        .valuation()
        .ok_or_else(|| Error::NotNormalized("series is zero".into()))?;
    if !f.coeff(v).is_one() {
        return Err(Error::NotNormalized(format!(
            "leading coefficient a({v}) = {}",
            f.coeff(v)
        )));
    }
    let p = ctx.p as usize;
    let need = v * p;
    if f.truncation() < need {
        return Err(Error::TruncationTooSmall {
            need,
            have: f.truncation(),
        });
    }
    let lambda = f.coeff(need);
    let g = apply_tp(f, ctx)?;
    let modulus = f.domain().modulus().map(BigInt::from);
    let same = |a: BigInt, b: BigInt| match &modulus {
        Some(m) => (a - b).mod_floor(m).is_zero(),
        None => a == b,
    };
    let last = g.truncation();
    let status = match (0..=last).find(|&n| !same(g.coeff(n), &lambda * f.coeff(n))) {
        Some(n) => EigenStatus::MismatchAt(n),
        None => EigenStatus::ExactMatch,
    };
    let checked_to = match status {
        EigenStatus::ExactMatch => last,
        EigenStatus::MismatchAt(n) => n.saturating_sub(1),
    };
    Ok(EigenReport {
        p: ctx.p,
        lambda,
        checked_to,
        status,
    })
}

/// The two congruence families for EO-bar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `p_i ≥ 5`, `p_i ≡ 2 (mod 3)`, modulus 2.
    Thm1,
    /// `p_i ≡ 1 (mod 24)` with EO-bar((19p_i - 1)/3) ≡ 0 (mod 8), modulus 8.
    Thm2,
}

impl Family {
    pub fn modulus(&self) -> u32 {
        match self {
            Family::Thm1 => 2,
            Family::Thm2 => 8,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Thm1 => "thm1-family",
            Family::Thm2 => "thm2-family",
        }
    }
}

fn overflow(what: &str) -> Error {
    Error::Overflow(format!("family index: {what}"))
}

fn check_primes(family: Family, primes: &[u64]) -> Result<()> {
    if primes.is_empty() {
        return Err(Error::InvalidInstance("at least one prime is required".into()));
    }
    for &p in primes {
        if !is_prime(p) {
            return Err(Error::InvalidInstance(format!("{p} is not prime")));
        }
        let ok = match family {
            Family::Thm1 => p >= 5 && p % 3 == 2,
            Family::Thm2 => p % 24 == 1,
        };
        if !ok {
            let want = match family {
                Family::Thm1 => "p >= 5 and p ≡ 2 (mod 3)",
                Family::Thm2 => "p ≡ 1 (mod 24)",
            };
            return Err(Error::InvalidInstance(format!("prime {p} violates {want}")));
        }
    }
    Ok(())
}

/// Argument of EO-bar for one member of a family.
///
/// Thm1: `P² n + (p_1²…p_k² p_{k+1}(3j + p_{k+1}) - 1)/3`.
/// Thm2: `8 P² n + (p_1²…p_k² p_{k+1}(24j + 19 p_{k+1}) - 1)/3`,
/// where `P = p_1 … p_{k+1}`.
pub fn family_index(family: Family, primes: &[u64], j: i64, n: u64) -> Result<u128> {
    check_primes(family, primes)?;
    let (&last, head) = primes.split_last().expect("nonempty");
    if j.rem_euclid(last as i64) == 0 {
        return Err(Error::InvalidInstance(format!("j = {j} is divisible by {last}")));
    }
    let mut head_sq: i128 = 1;
    for &p in head {
        head_sq = head_sq
            .checked_mul(
                (p as i128)
                    .checked_mul(p as i128)
                    .ok_or_else(|| overflow("prime square"))?,
            )
            .ok_or_else(|| overflow("prime product"))?;
    }
    let last = last as i128;
    let all_sq = head_sq
        .checked_mul(last * last)
        .ok_or_else(|| overflow("prime product"))?;
    let (scale, inner) = match family {
        Family::Thm1 => (1i128, (j as i128) * 3 + last),
        Family::Thm2 => (8i128, (j as i128) * 24 + 19 * last),
    };
    let numerator = head_sq
        .checked_mul(last)
        .and_then(|x| x.checked_mul(inner))
        .and_then(|x| x.checked_sub(1))
        .ok_or_else(|| overflow("offset"))?;
    if numerator.rem_euclid(3) != 0 {
        return Err(Error::InvalidInstance(format!(
            "offset {numerator}/3 is not an integer"
        )));
    }
    let index = all_sq
        .checked_mul(scale)
        .and_then(|x| x.checked_mul(n as i128))
        .and_then(|x| x.checked_add(numerator / 3))
        .ok_or_else(|| overflow("index"))?;
    u128::try_from(index).map_err(|_| Error::InvalidInstance(format!("index {index} is negative")))
}

pub fn family_index_thm1(primes: &[u64], j: i64, n: u64) -> Result<u128> {
    family_index(Family::Thm1, primes, j, n)
}

pub fn family_index_thm2(primes: &[u64], j: i64, n: u64) -> Result<u128> {
    family_index(Family::Thm2, primes, j, n)
}

/// `(19p - 1)/3`, the eligibility index for the mod-8 family.
pub fn thm2_eligibility_index(p: u64) -> u64 {
    (19 * p - 1) / 3
}

/// One failing member of a family sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyFailure {
    pub j: i64,
    pub n: u64,
    pub index: u64,
    pub residue: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub family: Family,
    pub primes: Vec<u64>,
    pub modulus: u32,
    pub checked: usize,
    pub max_index: u64,
    /// Primes failing the EO-bar((19p-1)/3) ≡ 0 (mod 8) hypothesis.
    pub ineligible: Vec<u64>,
    pub failures: Vec<FamilyFailure>,
}

impl FamilyReport {
    pub fn holds(&self) -> bool {
        self.ineligible.is_empty() && self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "family": self.family.name(),
            "primes": self.primes.iter().map(u64::to_string).collect::<Vec<_>>(),
            "modulus": self.modulus.to_string(),
            "checked": self.checked.to_string(),
            "max_index": self.max_index.to_string(),
            "ineligible": self.ineligible.iter().map(u64::to_string).collect::<Vec<_>>(),
            "failures": self.failures.iter().map(|f| json!({
                "j": f.j.to_string(),
                "n": f.n.to_string(),
                "index": f.index.to_string(),
                "residue": f.residue.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// EO-bar mod `m` up to `q^t`, refusing truncations above `ceiling`.
pub fn eobar_mod(t: usize, m: u32, ceiling: usize) -> Result<Series> {
    if t + 1 > ceiling {
        return Err(Error::CeilingExceeded {
            requested: t + 1,
            ceiling,
        });
    }
    named_series(NamedSeries::Eobar, t, CoefficientDomain::modular(m as u64)?)
}

/// Checks `EO-bar(index) ≡ 0` for every `j` in `js` and `0 ≤ n ≤ n_max`, reading
/// one EO-bar series reduced mod 2 or 8.
pub fn verify_family(family: Family, primes: &[u64], js: &[i64], n_max: u64, ceiling: usize) -> Result<FamilyReport> {
    let mut cells = Vec::new();
    for &j in js {
        for n in 0..=n_max {
            let idx = family_index(family, primes, j, n)?;
            let idx = u64::try_from(idx).map_err(|_| overflow("index exceeds u64"))?;
            cells.push((j, n, idx));
        }
    }
    let mut max_index = cells.iter().map(|c| c.2).max().unwrap_or(0);
    let mut distinct: Vec<u64> = primes.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if family == Family::Thm2 {
        for &p in &distinct {
            max_index = max_index.max(thm2_eligibility_index(p));
        }
    }
    let t = usize::try_from(max_index).map_err(|_| overflow("index exceeds usize"))?;
    let modulus = family.modulus();
    let series = eobar_mod(t, modulus, ceiling)?;
    let res = series.residues().expect("modular");
    let ineligible = match family {
        Family::Thm1 => Vec::new(),
        Family::Thm2 => distinct
            .into_iter()
            .filter(|&p| res[thm2_eligibility_index(p) as usize] != 0)
            .collect(),
    };
    let failures: Vec<FamilyFailure> = cells
        .par_iter()
        .filter_map(|&(j, n, index)| {
            let residue = res[index as usize];
            (residue != 0).then_some(FamilyFailure { j, n, index, residue })
        })
        .collect();
    Ok(FamilyReport {
        family,
        primes: primes.to_vec(),
        modulus,
        checked: cells.len(),
        max_index,
        ineligible,
        failures,
    })
}

/// Primes `p ≤ limit`, `p ≡ 1 (mod 24)`, with EO-bar((19p - 1)/3) ≡ 0 (mod 8).
pub fn eligible_prime_search_thm2(limit: u64) -> Result<Vec<u64>> {
    let candidates: Vec<u64> = primes_up_to(limit).into_iter().filter(|p| p % 24 == 1).collect();
    let Some(&largest) = candidates.last() else {
        return Ok(Vec::new());
    };
    let t = thm2_eligibility_index(largest) as usize;
    let series = named_series(NamedSeries::Eobar, t, CoefficientDomain::modular(8)?)?;
    let res = series.residues().expect("modular");
    Ok(candidates
        .into_iter()
        .filter(|&p| res[thm2_eligibility_index(p) as usize] == 0)
        .collect())
}

/// `F_j` for `j ∈ {1, 7, 13, 19}`: the weight-2 eta quotients on Γ0(2304) built
/// from η(24z) and η(96z), each supported on exponents ≡ j (mod 24).
pub fn fj_form(j: u64) -> Result<EtaQuotient> {
    let (a, b) = match j {
        1 => (5, -1),
        7 => (3, 1),
        13 => (1, 3),
        19 => (-1, 5),
        _ => return Err(Error::InvalidArgument(format!("no F_{j}; j must be 1, 7, 13 or 19"))),
    };
    EtaQuotient::new(2304, [(24, a), (96, b)])
}

pub const FJ_CLASSES: [u64; 4] = [1, 7, 13, 19];
/// Primes, two per class 5, 11, 17, 23 (mod 24), on which `T_p` should vanish.
pub const FJ_ANNIHILATING: [u64; 8] = [5, 29, 11, 59, 17, 41, 23, 47];
/// Primes, one per class 1, 7, 13, 19 (mod 24), on which `T_p` should permute the `F_j`.
pub const FJ_PERMUTING: [u64; 4] = [73, 7, 13, 19];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FjMapping {
    pub j: u64,
    pub p: u64,
    pub target: u64,
    pub supported: bool,
    /// `c` with `T_p F_j = c F_target` on the checked range, when such `c` exists.
    pub multiple: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FjReport {
    pub truncation: usize,
    pub support: Vec<(u64, bool)>,
    pub annihilated: Vec<(u64, u64, bool)>,
    pub mappings: Vec<FjMapping>,
}

impl FjReport {
    pub fn ok(&self) -> bool {
        self.support.iter().all(|s| s.1)
            && self.annihilated.iter().all(|a| a.2)
            && self.mappings.iter().all(|m| m.supported && m.multiple.is_some())
    }
}

/// Support classes of the `F_j`, annihilation by `T_p` for `p ≡ 5, 11, 17, 23`
/// (mod 24), and `T_p F_j ∈ Z·F_{pj mod 24}` for `p ≡ 1, 7, 13, 19` (mod 24).
/// All `F_j` have weight 2 and trivial character.
pub fn fj_structure_check(t: usize) -> Result<FjReport> {
    if t < 500 {
        return Err(Error::TruncationTooSmall { need: 500, have: t });
    }
    let forms: Vec<(u64, Series)> = FJ_CLASSES
        .iter()
        .map(|&j| Ok((j, fj_form(j)?.to_series(t, CoefficientDomain::Exact)?)))
        .collect::<Result<_>>()?;
    let form = |j: u64| &forms.iter().find(|f| f.0 == j).expect("class").1;

    let support = forms
        .iter()
        .map(|(j, f)| {
            (
                *j,
                f.valuation() == Some(*j as usize) && f.support().iter().all(|&n| n as u64 % 24 == *j),
            )
        })
        .collect();

    let mut annihilated = Vec::new();
    for &(j, ref f) in &forms {
        for &p in &FJ_ANNIHILATING {
            let g = apply_tp(f, &HeckeContext::new(2, p, 1)?)?;
            annihilated.push((j, p, g.is_zero()));
        }
    }

    let mut mappings = Vec::new();
    for &(j, ref f) in &forms {
        // Need at least two terms of the image class to pin down the multiple.
        for &p in FJ_PERMUTING.iter().filter(|&&p| t / p as usize >= 43) {
            let target = p * j % 24;
            let g = apply_tp(f, &HeckeContext::new(2, p, 1)?)?;
            let supported = g.support().iter().all(|&n| n as u64 % 24 == target);
            let image = form(target);
            let c = g.coeff(target as usize);
            let multiple = (0..=g.truncation())
                .all(|n| g.coeff(n) == &c * image.coeff(n))
                .then_some(c);
            mappings.push(FjMapping {
                j,
                p,
                target,
                supported,
                multiple,
            });
        }
    }
    Ok(FjReport {
        truncation: t,
        support,
        annihilated,
        mappings,
    })
}

/// `a(n)` as an i64, for tests and small reports.
pub fn coeff_i64(f: &Series, n: usize) -> Option<i64> {
    f.coeff(n).to_i64()
}
