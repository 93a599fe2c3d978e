use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::eta::{build_eta_product, EtaFactor};
use super::{CoefficientDomain, Series};
use crate::error::{Error, Result};

/// Generating functions with a fixed name on the command line and in claim files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedSeries {
    /// Σ EO-bar(n) q^n = (q^4;q^4)^3 / (q^2;q^2)^2
    Eobar,
    /// Σ EO(n) q^n = 1 / ((1-q)(q^2;q^2))
    Eo,
    /// Σ EO_u(n) q^n = 1 / (q^2;q^4)^2
    Eou,
    /// Σ EO-bar(2n) q^n = (q^2;q^2)^3 / (q;q)^2
    EobarEven,
    /// Σ EO_u(2n) q^n = (q^2;q^2)^2 / (q;q)^2
    EouEven,
    /// η^8(3z) = q (q^3;q^3)^8
    Eta83z,
    /// η^5(96z)/η(24z) = q^19 (q^96;q^96)^5 / (q^24;q^24)
    Thm2Form,
}

impl NamedSeries {
    pub const ALL: [NamedSeries; 7] = [
        NamedSeries::Eobar,
        NamedSeries::Eo,
        NamedSeries::Eou,
        NamedSeries::EobarEven,
        NamedSeries::EouEven,
        NamedSeries::Eta83z,
        NamedSeries::Thm2Form,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            NamedSeries::Eobar => "eobar",
            NamedSeries::Eo => "eo",
            NamedSeries::Eou => "eou",
            NamedSeries::EobarEven => "eobar_even",
            NamedSeries::EouEven => "eou_even",
            NamedSeries::Eta83z => "eta8_3z",
            NamedSeries::Thm2Form => "thm2_form",
        }
    }

    /// Eta factors and the power of q in front.
    fn factors(&self) -> (usize, Vec<(u64, i64)>) {
        match self {
            NamedSeries::Eobar => (0, vec![(4, 3), (2, -2)]),
            NamedSeries::Eo => (0, vec![(2, -1)]),
            NamedSeries::Eou => (0, vec![(4, 2), (2, -2)]),
            NamedSeries::EobarEven => (0, vec![(2, 3), (1, -2)]),
            NamedSeries::EouEven => (0, vec![(2, 2), (1, -2)]),
            NamedSeries::Eta83z => (1, vec![(3, 8)]),
            NamedSeries::Thm2Form => (19, vec![(96, 5), (24, -1)]),
        }
    }
}

impl fmt::Display for NamedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NamedSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedSeries::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownSeries(s.to_string()))
    }
}

/// q-expansion of a named generating function up to `q^t`.
pub fn named_series(name: NamedSeries, t: usize, domain: CoefficientDomain) -> Result<Series> {
    let (valuation, factors) = name.factors();
    let factors: Vec<EtaFactor> = factors
        .into_iter()
        .map(|(s, e)| EtaFactor { scale: s, exponent: e })
        .collect();
    if t < valuation {
        return Ok(Series::zero(domain, t));
    }
    let body = build_eta_product(&factors, t - valuation, domain)?;
    let body = if name == NamedSeries::Eo {
        // Partial sums: divide by (1 - q).
        body.div_terms(&[(0, 1), (1, -1)])?
    } else {
        body
    };
    if valuation == 0 {
        return Ok(body);
    }
    Ok(body.inflate(1, t).shift(valuation))
}
