//! Claim files and their verdicts.

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hecke::{verify_family, Family};
use crate::radu::{spot_check, verify_claim, ClaimJson, CongruenceClaim, Verdict};

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct FamilyClaim {
    pub primes: Vec<u64>,
    pub j: Vec<i64>,
    pub n_max: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    Radu(CongruenceClaim),
    Family(Family, FamilyClaim),
}

impl Claim {
    pub fn parse(text: &str) -> Result<Claim> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("claim has no string field `kind`".into()))?
            .to_string();
        let parse = |e: serde_json::Error| Error::Parse(e.to_string());
        match kind.as_str() {
            "radu" => {
                let c: ClaimJson = serde_json::from_value(v).map_err(parse)?;
                Ok(Claim::Radu(CongruenceClaim::try_from(c)?))
            }
            "thm1-family" => Ok(Claim::Family(Family::Thm1, serde_json::from_value(v).map_err(parse)?)),
            "thm2-family" => Ok(Claim::Family(Family::Thm2, serde_json::from_value(v).map_err(parse)?)),
            other => Err(Error::Parse(format!("unknown claim kind `{other}`"))),
        }
    }

    pub fn load(path: &Path) -> Result<Claim> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Claim::parse(&text)
    }
}

/// Spot-check horizon past the initial cases: `⌊ν⌋ + 10m`.
pub fn default_spot_horizon(claim: &CongruenceClaim, floor_nu: i64) -> u64 {
    floor_nu.max(0) as u64 + 10 * claim.tuple.m
}

/// Runs a claim; returns the exit code and the JSON report.
pub fn run_claim(claim: &Claim, ceiling: usize) -> Result<(i32, Value)> {
    match claim {
        Claim::Radu(c) => {
            let report = verify_claim(c)?;
            let mut out = report.to_json();
            let code = match report.verdict {
                Verdict::VerifiedForAllN => {
                    let horizon = default_spot_horizon(c, report.floor_nu());
                    match spot_check(c, horizon)? {
                        None => {
                            out["spot_check"] = json!({"horizon": horizon.to_string(), "status": "ok"});
                            EXIT_VERIFIED
                        }
                        Some(w) => {
                            out["spot_check"] = json!({
                                "horizon": horizon.to_string(),
                                "status": "contradiction",
                                "n": w.n.to_string(),
                                "t_prime": w.t_prime.to_string(),
                                "value": w.value.to_string(),
                            });
                            EXIT_COUNTEREXAMPLE
                        }
                    }
                }
                Verdict::Counterexample(_) => EXIT_COUNTEREXAMPLE,
                Verdict::PreconditionFailed(_) => EXIT_PRECONDITION,
            };
            Ok((code, out))
        }
        Claim::Family(family, fc) => {
            let report = verify_family(*family, &fc.primes, &fc.j, fc.n_max, ceiling)?;
            let code = if !report.ineligible.is_empty() {
                EXIT_PRECONDITION
            } else if !report.failures.is_empty() {
                EXIT_COUNTEREXAMPLE
            } else {
                EXIT_VERIFIED
            };
            let mut out = report.to_json();
            out["verdict"] = json!(match code {
                EXIT_VERIFIED => "verified",
                EXIT_COUNTEREXAMPLE => "counterexample",
                _ => "precondition-failed",
            });
            Ok((code, out))
        }
    }
}
