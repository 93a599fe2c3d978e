//! Proportion of a progression of coefficients divisible by a modulus, reported
//! at a list of horizons.

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::arith::rat_to_string;
use crate::error::{Error, Result};
use crate::series::{named_series, CoefficientDomain, NamedSeries};

/// Coefficient `a(stride·n + offset)` of `series`, tested mod `modulus`, for
/// `0 ≤ n ≤ horizon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub function: String,
    pub series: NamedSeries,
    pub modulus: u32,
    pub stride: usize,
    pub offset: usize,
    pub horizon: usize,
    pub checkpoints: Vec<usize>,
}

impl ScanConfig {
    /// EO-bar(8n + 6) mod `modulus`.
    pub fn eobar_8n6(modulus: u32, horizon: usize, checkpoints: Vec<usize>) -> Result<Self> {
        ScanConfig::new("eobar(8n+6)", NamedSeries::Eobar, modulus, 8, 6, horizon, checkpoints)
    }

    /// EO_u(2n) mod `modulus`.
    pub fn eou_2n(modulus: u32, horizon: usize, checkpoints: Vec<usize>) -> Result<Self> {
        ScanConfig::new("eou(2n)", NamedSeries::EouEven, modulus, 1, 0, horizon, checkpoints)
    }

    pub fn new(
        function: &str,
        series: NamedSeries,
        modulus: u32,
        stride: usize,
        offset: usize,
        horizon: usize,
        mut checkpoints: Vec<usize>,
    ) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidModulus(0));
        }
        if stride == 0 {
            return Err(Error::InvalidArgument("stride must be positive".into()));
        }
        if checkpoints.is_empty() {
            checkpoints.push(horizon);
        }
        if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("checkpoints must be strictly ascending".into()));
        }
        if checkpoints.last().is_some_and(|&c| c > horizon) {
            return Err(Error::InvalidArgument("checkpoints must not exceed the horizon".into()));
        }
        Ok(ScanConfig {
            function: function.to_string(),
            series,
            modulus,
            stride,
            offset,
            horizon,
            checkpoints,
        })
    }

    /// Largest series exponent the scan reads.
    pub fn truncation(&self) -> Result<usize> {
        self.stride
            .checked_mul(self.horizon)
            .and_then(|x| x.checked_add(self.offset))
            .ok_or_else(|| Error::Overflow("scan truncation".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityRow {
    pub horizon: usize,
    pub divisible: usize,
    pub total: usize,
}

impl DensityRow {
    pub fn fraction(&self) -> BigRational {
        crate::arith::rat(self.divisible as i64, self.total as i64)
    }

    /// Share of `n` whose coefficient is not divisible.
    pub fn exception_ratio(&self) -> BigRational {
        crate::arith::rat((self.total - self.divisible) as i64, self.total as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub function: String,
    pub modulus: u32,
    pub rows: Vec<DensityRow>,
}

impl DensityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "function": self.function,
            "modulus": self.modulus.to_string(),
            "rows": self.rows.iter().map(|r| json!({
                "X": r.horizon.to_string(),
                "divisible": r.divisible.to_string(),
                "total": r.total.to_string(),
                "fraction": rat_to_string(&r.fraction()),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Builds the series once mod `u` and counts divisible coefficients up to each checkpoint.
pub fn run_density(config: &ScanConfig, ceiling: usize) -> Result<DensityReport> {
    let t = config.truncation()?;
    if t + 1 > ceiling {
        return Err(Error::CeilingExceeded {
            requested: t + 1,
            ceiling,
        });
    }
    let divisible: Vec<bool> = if config.modulus == 1 {
        vec![true; config.horizon + 1]
    } else {
        let s = named_series(config.series, t, CoefficientDomain::modular(config.modulus as u64)?)?;
        let res = s.residues().expect("modular");
        (0..=config.horizon)
            .map(|n| res[config.stride * n + config.offset] == 0)
            .collect()
    };
    let mut rows = Vec::new();
    let mut count = 0;
    let mut next = 0;
    for (n, &ok) in divisible.iter().enumerate() {
        count += ok as usize;
        while next < config.checkpoints.len() && config.checkpoints[next] == n {
            rows.push(DensityRow {
                horizon: n,
                divisible: count,
                total: n + 1,
            });
            next += 1;
        }
    }
    Ok(DensityReport {
        function: config.function.clone(),
        modulus: config.modulus,
        rows,
    })
}
