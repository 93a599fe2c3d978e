use std::io::Write;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{CoefficientDomain, Series};
use crate::error::{Error, Result};

/// Wire form of a series. Coefficients are decimal strings so exact values never
/// pass through a 64-bit float or integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub domain: CoefficientDomain,
    pub truncation: usize,
    pub coeffs: Vec<String>,
}

impl From<&Series> for SeriesJson {
    fn from(s: &Series) -> Self {
        SeriesJson {
            domain: s.domain(),
            truncation: s.truncation(),
            coeffs: s.to_decimal_strings(),
        }
    }
}

impl TryFrom<SeriesJson> for Series {
    type Error = Error;

    fn try_from(j: SeriesJson) -> Result<Series> {
        if j.coeffs.len() != j.truncation + 1 {
            return Err(Error::Parse(format!(
                "truncation {} needs {} coefficients, got {}",
                j.truncation,
                j.truncation + 1,
                j.coeffs.len()
            )));
        }
        if let CoefficientDomain::Modular { modulus } = j.domain {
            if modulus < 2 {
                return Err(Error::InvalidModulus(modulus as u64));
            }
        }
        let values = j
            .coeffs
            .iter()
            .map(|c| {
                c.parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("coefficient `{c}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(m) = j.domain.modulus() {
            let m = BigInt::from(m);
            if let Some(bad) = values.iter().find(|c| **c < BigInt::from(0) || **c >= m) {
                return Err(Error::Parse(format!("coefficient {bad} is not a residue mod {m}")));
            }
        }
        Ok(Series::from_bigints(j.domain, values))
    }
}

impl Series {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeriesJson::from(self)).expect("series serializes")
    }

    pub fn from_json(text: &str) -> Result<Series> {
        let j: SeriesJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Series::try_from(j)
    }

    /// Writes `index,coefficient` rows with a header line.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["index", "coefficient"]).map_err(io)?;
        for (n, c) in self.to_decimal_strings().into_iter().enumerate() {
            w.write_record([n.to_string(), c]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }
}
