//! Truncated power series in q with exact or modular integer coefficients.
//!
//! A [`Series`] stores the coefficients of `q^0 .. q^T` densely. Positive
//! valuations are represented by leading zeros, so index `n` is always the
//! coefficient of `q^n`. Products truncate at the smaller of the two truncation
//! orders and nothing is ever extrapolated past `T`.

mod eta;
mod io;
pub(crate) mod kernels;
mod named;

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use eta::{build_eta_product, dissection_check, dissection_mismatch, expand_eta_factor, EtaFactor};
pub use io::SeriesJson;
pub use named::{named_series, NamedSeries};

/// Ring the coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoefficientDomain {
    Exact,
    Modular { modulus: u32 },
}

impl CoefficientDomain {
    pub fn modular(modulus: u64) -> Result<Self> {
        if modulus < 2 || modulus > u32::MAX as u64 {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(CoefficientDomain::Modular {
            modulus: modulus as u32,
        })
    }

    pub fn modulus(&self) -> Option<u32> {
        match self {
            CoefficientDomain::Exact => None,
            CoefficientDomain::Modular { modulus } => Some(*modulus),
        }
    }
}

impl fmt::Display for CoefficientDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientDomain::Exact => write!(f, "exact"),
            CoefficientDomain::Modular { modulus } => write!(f, "mod {modulus}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Modular(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    domain: CoefficientDomain,
    coeffs: Coeffs,
}

fn reduce_big(c: &BigInt, m: u32) -> u32 {
    c.mod_floor(&BigInt::from(m)).to_u32().expect("residue fits in u32")
}

fn reduce_i64(c: i64, m: u32) -> u32 {
    c.rem_euclid(m as i64) as u32
}

impl Series {
    pub fn zero(domain: CoefficientDomain, truncation: usize) -> Self {
        let len = truncation + 1;
        let coeffs = match domain {
            CoefficientDomain::Exact => Coeffs::Exact(vec![BigInt::zero(); len]),
            CoefficientDomain::Modular { .. } => Coeffs::Modular(vec![0; len]),
        };
        Series { domain, coeffs }
    }

    pub fn one(domain: CoefficientDomain, truncation: usize) -> Self {
        let mut s = Self::zero(domain, truncation);
        match &mut s.coeffs {
            Coeffs::Exact(v) => v[0] = BigInt::one(),
            Coeffs::Modular(v) => v[0] = 1,
        }
        s
    }

    /// Builds a series from `q^0..q^{len-1}` coefficients, reducing when modular.
    pub fn from_i64s(domain: CoefficientDomain, coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least one coefficient");
        let coeffs = match domain {
            CoefficientDomain::Exact => Coeffs::Exact(coeffs.iter().map(|&c| BigInt::from(c)).collect()),
            CoefficientDomain::Modular { modulus } => {
                Coeffs::Modular(coeffs.iter().map(|&c| reduce_i64(c, modulus)).collect())
            }
        };
        Series { domain, coeffs }
    }

    pub fn from_bigints(domain: CoefficientDomain, coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least one coefficient");
        let coeffs = match domain {
            CoefficientDomain::Exact => Coeffs::Exact(coeffs),
            CoefficientDomain::Modular { modulus } => {
                Coeffs::Modular(coeffs.iter().map(|c| reduce_big(c, modulus)).collect())
            }
        };
        Series { domain, coeffs }
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    pub fn truncation(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Modular(v) => v.len(),
        }
    }

    /// Coefficient of `q^n`; in the modular domain this is the canonical residue.
    ///
    /// Panics when `n` exceeds the truncation.
    pub fn coeff(&self, n: usize) -> BigInt {
        match &self.coeffs {
            Coeffs::Exact(v) => v[n].clone(),
            Coeffs::Modular(v) => BigInt::from(v[n]),
        }
    }

    pub fn get(&self, n: usize) -> Option<BigInt> {
        (n <= self.truncation()).then(|| self.coeff(n))
    }

    pub fn is_zero_at(&self, n: usize) -> bool {
        match &self.coeffs {
            Coeffs::Exact(v) => v[n].is_zero(),
            Coeffs::Modular(v) => v[n] == 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.len()).all(|n| self.is_zero_at(n))
    }

    /// Whether the coefficient of `q^n` is divisible by `u`. In the modular domain
    /// `u` must divide the modulus.
    pub fn divisible_at(&self, n: usize, u: u32) -> Result<bool> {
        if u == 0 {
            return Err(Error::InvalidArgument("divisibility by zero".into()));
        }
        match &self.coeffs {
            Coeffs::Exact(v) => Ok((&v[n] % BigInt::from(u)).is_zero()),
            Coeffs::Modular(v) => {
                let m = self.domain.modulus().expect("modular");
                if m % u != 0 {
                    return Err(Error::InvalidArgument(format!("{u} does not divide the modulus {m}")));
                }
                Ok(v[n] % u == 0)
            }
        }
    }

    /// Residues as a slice when modular.
    pub fn residues(&self) -> Option<&[u32]> {
        match &self.coeffs {
            Coeffs::Modular(v) => Some(v),
            Coeffs::Exact(_) => None,
        }
    }

    pub fn exact_coeffs(&self) -> Option<&[BigInt]> {
        match &self.coeffs {
            Coeffs::Exact(v) => Some(v),
            Coeffs::Modular(_) => None,
        }
    }

    /// Indices of nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&n| !self.is_zero_at(n)).collect()
    }

    pub fn nonzero_count(&self) -> usize {
        (0..self.len()).filter(|&n| !self.is_zero_at(n)).count()
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        (0..self.len()).find(|&n| !self.is_zero_at(n))
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().map(|c| c.to_string()).collect(),
            Coeffs::Modular(v) => v.iter().map(|c| c.to_string()).collect(),
        }
    }

    /// Drops every term above `q^t`.
    pub fn truncate(&self, t: usize) -> Result<Series> {
        if t > self.truncation() {
            return Err(Error::TruncationTooSmall {
                need: t,
                have: self.truncation(),
            });
        }
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v[..=t].to_vec()),
            Coeffs::Modular(v) => Coeffs::Modular(v[..=t].to_vec()),
        };
        Ok(Series {
            domain: self.domain,
            coeffs,
        })
    }

    /// Maps into a modular domain. From a modular domain, `modulus` must divide the
    /// current modulus.
    pub fn reduce(&self, modulus: u32) -> Result<Series> {
        let target = CoefficientDomain::modular(modulus as u64)?;
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => v.iter().map(|c| reduce_big(c, modulus)).collect(),
            Coeffs::Modular(v) => {
                let m = self.domain.modulus().expect("modular");
                if m % modulus != 0 {
                    return Err(Error::DomainMismatch(self.domain.to_string(), target.to_string()));
                }
                v.iter().map(|&c| c % modulus).collect()
            }
        };
        Ok(Series {
            domain: target,
            coeffs: Coeffs::Modular(coeffs),
        })
    }

    fn check_same_domain(&self, other: &Series) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(self.domain.to_string(), other.domain.to_string()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Series, sub: bool) -> Result<Series> {
        self.check_same_domain(other)?;
        let len = self.len().min(other.len());
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => Coeffs::Exact(
                a[..len]
                    .iter()
                    .zip(b)
                    .map(|(x, y)| if sub { x - y } else { x + y })
                    .collect(),
            ),
            (Coeffs::Modular(a), Coeffs::Modular(b)) => {
                let m = self.domain.modulus().expect("modular") as u64;
                Coeffs::Modular(
                    a[..len]
                        .iter()
                        .zip(b)
                        .map(|(&x, &y)| {
                            let y = if sub { (m - y as u64) % m } else { y as u64 };
                            ((x as u64 + y) % m) as u32
                        })
                        .collect(),
                )
            }
            _ => unreachable!("domains already checked"),
        };
        Ok(Series {
            domain: self.domain,
            coeffs,
        })
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.zip_with(other, false)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.zip_with(other, true)
    }

    pub fn scale(&self, k: i64) -> Series {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v.iter().map(|c| c * k).collect()),
            Coeffs::Modular(v) => {
                let m = self.domain.modulus().expect("modular");
                let k = reduce_i64(k, m) as u64;
                Coeffs::Modular(v.iter().map(|&c| (c as u64 * k % m as u64) as u32).collect())
            }
        };
        Series {
            domain: self.domain,
            coeffs,
        }
    }

    /// Multiplies by `q^v`, keeping the truncation.
    pub fn shift(&self, v: usize) -> Series {
        let mut out = Series::zero(self.domain, self.truncation());
        let len = self.len();
        match (&mut out.coeffs, &self.coeffs) {
            (Coeffs::Exact(o), Coeffs::Exact(a)) => {
                for n in v..len {
                    o[n] = a[n - v].clone();
                }
            }
            (Coeffs::Modular(o), Coeffs::Modular(a)) => {
                if v < len {
                    o[v..].copy_from_slice(&a[..len - v]);
                }
            }
            _ => unreachable!(),
        }
        out
    }

    /// Substitutes `q -> q^g` and truncates at `t`.
    pub fn inflate(&self, g: usize, t: usize) -> Series {
        assert!(g >= 1);
        let mut out = Series::zero(self.domain, t);
        match (&mut out.coeffs, &self.coeffs) {
            (Coeffs::Exact(o), Coeffs::Exact(a)) => {
                for (i, c) in a.iter().enumerate().take(t / g + 1) {
                    o[i * g] = c.clone();
                }
            }
            (Coeffs::Modular(o), Coeffs::Modular(a)) => {
                for (i, &c) in a.iter().enumerate().take(t / g + 1) {
                    o[i * g] = c;
                }
            }
            _ => unreachable!(),
        }
        out
    }

    /// Coefficients `a[m n + t]` for `n = 0..=(T - t)/m`.
    pub fn extract_progression(&self, m: usize, t: usize) -> Result<Series> {
        if m == 0 || t >= m {
            return Err(Error::InvalidArgument(format!("need 0 <= t < m, got m = {m}, t = {t}")));
        }
        if self.truncation() < t {
            return Err(Error::TruncationTooSmall {
                need: t,
                have: self.truncation(),
            });
        }
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => Coeffs::Exact(v[t..].iter().step_by(m).cloned().collect()),
            Coeffs::Modular(v) => Coeffs::Modular(v[t..].iter().step_by(m).copied().collect()),
        };
        Ok(Series {
            domain: self.domain,
            coeffs,
        })
    }

    /// Whether the nonzero terms are few enough for the sparse kernels to win.
    fn is_sparse(&self) -> bool {
        let t = self.truncation();
        self.nonzero_count() <= 4 * t.sqrt() + 8
    }

    fn sparse_exact(&self) -> Vec<(usize, BigInt)> {
        match &self.coeffs {
            Coeffs::Exact(v) => v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e, c.clone()))
                .collect(),
            Coeffs::Modular(_) => unreachable!(),
        }
    }

    fn sparse_mod(&self) -> Vec<(usize, u32)> {
        match &self.coeffs {
            Coeffs::Modular(v) => v.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect(),
            Coeffs::Exact(_) => unreachable!(),
        }
    }

    /// Product truncated at `min(self.T, other.T)`.
    pub fn multiply(&self, other: &Series) -> Result<Series> {
        self.check_same_domain(other)?;
        let len = self.len().min(other.len());
        // Drive the kernel with the operand that has fewer nonzero terms.
        let (dense, sparse) = if other.is_sparse() || other.nonzero_count() <= self.nonzero_count() {
            (self, other)
        } else {
            (other, self)
        };
        let coeffs = match &dense.coeffs {
            Coeffs::Exact(d) => Coeffs::Exact(kernels::exact_mul_sparse(d, &sparse.sparse_exact(), len)),
            Coeffs::Modular(d) => {
                let m = self.domain.modulus().expect("modular");
                Coeffs::Modular(kernels::mod_mul_sparse(d, &sparse.sparse_mod(), len, m))
            }
        };
        Ok(Series {
            domain: self.domain,
            coeffs,
        })
    }

    /// Quotient `self / divisor`, truncated at the smaller truncation.
    pub fn divide(&self, divisor: &Series) -> Result<Series> {
        self.check_same_domain(divisor)?;
        let len = self.len().min(divisor.len());
        let coeffs = match (&self.coeffs, &divisor.coeffs) {
            (Coeffs::Exact(num), Coeffs::Exact(_)) => {
                let mut terms = divisor.sparse_exact();
                if terms.first().map(|t| t.0) != Some(0) {
                    terms.insert(0, (0, BigInt::zero()));
                }
                Coeffs::Exact(kernels::exact_div_sparse(&num[..len], &terms)?)
            }
            (Coeffs::Modular(num), Coeffs::Modular(_)) => {
                let m = self.domain.modulus().expect("modular");
                let mut terms = divisor.sparse_mod();
                if terms.first().map(|t| t.0) != Some(0) {
                    terms.insert(0, (0, 0));
                }
                Coeffs::Modular(kernels::mod_div_sparse(&num[..len], &terms, m)?)
            }
            _ => unreachable!(),
        };
        Ok(Series {
            domain: self.domain,
            coeffs,
        })
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn invert(&self) -> Result<Series> {
        Series::one(self.domain, self.truncation()).divide(self)
    }

    /// Multiplies by a sparse integer polynomial given as (exponent, coefficient) pairs.
    pub(crate) fn mul_terms(&self, terms: &[(usize, i64)]) -> Series {
        let len = self.len();
        let coeffs = match &self.coeffs {
            Coeffs::Exact(d) => {
                let t: Vec<(usize, BigInt)> = terms.iter().map(|&(e, c)| (e, BigInt::from(c))).collect();
                Coeffs::Exact(kernels::exact_mul_sparse(d, &t, len))
            }
            Coeffs::Modular(d) => {
                let m = self.domain.modulus().expect("modular");
                let t: Vec<(usize, u32)> = terms.iter().map(|&(e, c)| (e, reduce_i64(c, m))).collect();
                Coeffs::Modular(kernels::mod_mul_sparse(d, &t, len, m))
            }
        };
        Series {
            domain: self.domain,
            coeffs,
        }
    }

    /// Divides by a sparse integer polynomial whose constant term is ±1.
    pub(crate) fn div_terms(&self, terms: &[(usize, i64)]) -> Result<Series> {
        let coeffs = match &self.coeffs {
            Coeffs::Exact(d) => {
                let t: Vec<(usize, BigInt)> = terms.iter().map(|&(e, c)| (e, BigInt::from(c))).collect();
                Coeffs::Exact(kernels::exact_div_sparse(d, &t)?)
            }
            Coeffs::Modular(d) => {
                let m = self.domain.modulus().expect("modular");
                let t: Vec<(usize, u32)> = terms.iter().map(|&(e, c)| (e, reduce_i64(c, m))).collect();
                Coeffs::Modular(kernels::mod_div_sparse(d, &t, m)?)
            }
        };
        Ok(Series {
            domain: self.domain,
            coeffs,
        })
    }

    /// Largest absolute coefficient (exact) or largest residue (modular).
    pub fn max_abs(&self) -> BigInt {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().map(|c| c.abs()).max().unwrap_or_default(),
            Coeffs::Modular(v) => BigInt::from(v.iter().copied().max().unwrap_or(0)),
        }
    }
}

/// Free-function form of [`Series::multiply`].
pub fn multiply(a: &Series, b: &Series) -> Result<Series> {
    a.multiply(b)
}

/// Free-function form of [`Series::invert`].
pub fn invert(a: &Series) -> Result<Series> {
    a.invert()
}

/// Free-function form of [`Series::extract_progression`].
pub fn extract_progression(a: &Series, m: usize, t: usize) -> Result<Series> {
    a.extract_progression(m, t)
}
