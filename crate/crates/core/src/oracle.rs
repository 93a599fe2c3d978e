//! Brute-force counts of the partition functions, by walking the partitions
//! themselves. Nothing here touches a generating function, so these counts are
//! an independent check on the series coefficients.

use rayon::prelude::*;

use crate::arith::is_generalized_pentagonal;
use crate::error::{Error, Result};

pub const DEFAULT_CAP: u64 = 60;

/// Parts in nonincreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().sum()
    }

    fn multiplicity(&self, part: u64) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    /// Every even part is less than every odd part.
    pub fn is_eo(&self) -> bool {
        let max_even = self.parts.iter().filter(|p| *p % 2 == 0).max();
        let min_odd = self.parts.iter().filter(|p| *p % 2 == 1).min();
        match (max_even, min_odd) {
            (Some(e), Some(o)) => e < o,
            _ => true,
        }
    }

    /// An EO partition in which only the largest even part has odd multiplicity.
    /// Without even parts, every multiplicity must be even.
    pub fn is_eobar(&self) -> bool {
        if !self.is_eo() {
            return false;
        }
        let largest_even = self.parts.iter().copied().filter(|p| p % 2 == 0).max();
        let mut distinct = self.parts.clone();
        distinct.dedup();
        distinct.into_iter().all(|p| {
            let odd = self.multiplicity(p) % 2 == 1;
            if Some(p) == largest_even {
                odd
            } else {
                !odd
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Counting entry points, guarded by an enumeration cap.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub cap: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_CAP }
    }
}

/// Calls `visit` on every partition of `n` whose parts are at most `max_part`,
/// skipping any subtree in which `allow(prefix, next_part)` is false.
fn descend<A, V>(remaining: u64, max_part: u64, prefix: &mut Vec<u64>, allow: &A, visit: &mut V)
where
    A: Fn(&[u64], u64) -> bool,
    V: FnMut(&[u64]),
{
    if remaining == 0 {
        visit(prefix);
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        if !allow(prefix, part) {
            continue;
        }
        prefix.push(part);
        descend(remaining - part, part, prefix, allow, visit);
        prefix.pop();
    }
}

fn for_each_partition<A, V>(n: u64, allow: A, mut visit: V)
where
    A: Fn(&[u64], u64) -> bool,
    V: FnMut(&[u64]),
{
    let mut prefix = Vec::new();
    descend(n, n, &mut prefix, &allow, &mut visit);
}

/// Parts arrive largest first, so an odd part after an even one breaks the
/// even-below-odd condition for good.
fn eo_prune(prefix: &[u64], part: u64) -> bool {
    !(part % 2 == 1 && prefix.last().is_some_and(|p| p % 2 == 0))
}

impl Oracle {
    pub fn new(cap: u64) -> Self {
        Oracle { cap }
    }

    fn check_cap(&self, n: u64) -> Result<()> {
        if n > self.cap {
            return Err(Error::CapExceeded { n, cap: self.cap });
        }
        Ok(())
    }

    /// Number of partitions of `n`.
    pub fn count_partitions(&self, n: u64) -> Result<u64> {
        self.check_cap(n)?;
        let mut count = 0;
        for_each_partition(n, |_, _| true, |_| count += 1);
        Ok(count)
    }

    /// Partitions of `n` in which every even part is below every odd part.
    pub fn eo_partitions(&self, n: u64) -> Result<Vec<Partition>> {
        self.check_cap(n)?;
        let mut out = Vec::new();
        for_each_partition(n, eo_prune, |p| out.push(Partition { parts: p.to_vec() }));
        Ok(out)
    }

    pub fn count_eo(&self, n: u64) -> Result<u64> {
        self.check_cap(n)?;
        let mut count = 0;
        for_each_partition(n, eo_prune, |_| count += 1);
        Ok(count)
    }

    pub fn count_eobar(&self, n: u64) -> Result<u64> {
        self.check_cap(n)?;
        let mut count = 0;
        for_each_partition(n, eo_prune, |p| {
            if (Partition { parts: p.to_vec() }).is_eobar() {
                count += 1;
            }
        });
        Ok(count)
    }

    /// Multisets of parts `≡ 2 (mod 4)`, each part in one of two colors, summing to `n`.
    pub fn count_eou(&self, n: u64) -> Result<u64> {
        self.check_cap(n)?;
        // For each part size, pick how many copies carry each color.
        fn go(remaining: u64, parts: &[u64]) -> u64 {
            if remaining == 0 {
                return 1;
            }
            let Some((&part, rest)) = parts.split_first() else {
                return 0;
            };
            let most = remaining / part;
            let mut total = 0;
            for first in 0..=most {
                for second in 0..=most - first {
                    total += go(remaining - (first + second) * part, rest);
                }
            }
            total
        }
        let parts: Vec<u64> = (2..=n).step_by(4).collect::<Vec<_>>().into_iter().rev().collect();
        Ok(go(n, &parts))
    }

    /// `f(n)` for each `n` in `0..=upto`, enumerated in parallel.
    pub fn table<F>(&self, upto: u64, f: F) -> Result<Vec<u64>>
    where
        F: Fn(&Oracle, u64) -> Result<u64> + Sync,
    {
        self.check_cap(upto)?;
        (0..=upto).into_par_iter().map(|n| f(self, n)).collect()
    }
}

/// Parity of EO-bar(n) from the closed form: odd iff `n = 8k(3k±1)/2`.
pub fn pentagonal_parity_eobar(n: u64) -> Parity {
    if n % 8 == 0 && is_generalized_pentagonal(n / 8) {
        Parity::Odd
    } else {
        Parity::Even
    }
}
