//! The `etacong` command line. Every invocation ends with exit code 0
//! (verified / success), 1 (counterexample or disagreement) or 2 (precondition
//! failed, bad input, or any other error).

pub mod density;
pub mod parity;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arith::rat_to_string;
use crate::error::{Error, Result};
use crate::etaq::EtaQuotient;
use crate::hecke::{eigen_residual, eligible_prime_search_thm2, fj_structure_check, EigenStatus, HeckeContext};
use crate::oracle::Oracle;
use crate::radu::{CongruenceClaim, RaduTuple};
use crate::series::{named_series, CoefficientDomain, NamedSeries, Series};

pub use density::{run_density, DensityReport, ScanConfig};
pub use parity::{first_odd_bound, run_parity_scan, BoundQuery, OddStatus, ParityScan};
pub use verify::{run_claim, Claim, EXIT_COUNTEREXAMPLE, EXIT_PRECONDITION, EXIT_VERIFIED};

pub const DEFAULT_CEILING: usize = 10_000_000;
pub const CEILING_ENV: &str = "ETACONG_MEM_CEILING";

/// Coefficient ceiling from `ETACONG_MEM_CEILING`, or the default.
pub fn ceiling() -> Result<usize> {
    match std::env::var(CEILING_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| Error::InvalidArgument(format!("{CEILING_ENV}={v}: {e}"))),
        Err(_) => Ok(DEFAULT_CEILING),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "etacong",
    version,
    about = "q-series, eta quotients and congruence checks for EO partitions"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Truncation order T
    #[arg(short = 'T', long = "terms", global = true)]
    pub terms: Option<usize>,
    /// Work modulo this integer instead of exactly
    #[arg(long = "mod", global = true)]
    pub modulus: Option<u64>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub out: OutputFormat,
    /// Compare series coefficients with brute-force counts
    #[arg(long, global = true)]
    pub cross_check: bool,
    /// Worker threads
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print coefficients of a named generating function
    Expand { series: String },
    /// Count partitions by enumeration
    Oracle {
        /// eo, eobar, eou, eobar_even or eou_even
        function: String,
        /// A single argument
        #[arg(long, conflicts_with = "upto")]
        n: Option<u64>,
        /// All arguments 0..=upto
        #[arg(long)]
        upto: Option<u64>,
        #[arg(long, default_value_t = crate::oracle::DEFAULT_CAP)]
        cap: u64,
    },
    /// Check a claim file (radu, thm1-family or thm2-family)
    Verify { claim: PathBuf },
    /// Run Radu's check on a tuple given on the command line
    Radu {
        #[arg(long)]
        m: u64,
        #[arg(long = "M")]
        big_m: u64,
        #[arg(long = "N")]
        n: u64,
        /// Exponents for the divisors of M, ascending, comma separated
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long)]
        t: u64,
        /// `delta:exponent` pairs for divisors of N; default all zero
        #[arg(long, allow_hyphen_values = true)]
        rprime: Option<String>,
        #[arg(long, default_value_t = 2)]
        u: u64,
    },
    /// Hecke operator checks
    Hecke {
        #[command(subcommand)]
        action: HeckeAction,
    },
    /// Proportion of a progression of coefficients divisible by a modulus
    Density {
        #[arg(long, value_enum)]
        function: DensityFunction,
        /// Largest n scanned
        #[arg(long)]
        horizon: usize,
        /// Comma-separated intermediate horizons
        #[arg(long)]
        checkpoints: Option<String>,
    },
    /// First even and first odd EO-bar(2N) with N ≡ r (mod t)
    ParityScan {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        limit: u64,
    },
    /// Upper bound for the first odd EO-bar(2M) with M ≡ r (mod t)
    Bound {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        t: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum HeckeAction {
    /// λ(p) and the eigen residual of a normalized form
    Eigen {
        /// eta8_3z, thm2_form, or an eta quotient `N; d:r, ...`
        form: String,
        #[arg(long)]
        p: u64,
    },
    /// Support classes and Hecke images of the four F_j
    Fj,
    /// Primes p ≡ 1 (mod 24) up to a limit with EO-bar((19p-1)/3) ≡ 0 (mod 8)
    Eligible {
        #[arg(long)]
        limit: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DensityFunction {
    /// EO-bar(8n+6), default modulus 8
    #[value(name = "eobar-8n6")]
    Eobar8n6,
    /// EO_u(2n), default modulus 2
    #[value(name = "eou-2n")]
    Eou2n,
}

struct Outcome {
    code: i32,
    body: Body,
}

enum Body {
    Json(Value),
    Text(String),
}

impl Outcome {
    fn json(code: i32, v: Value) -> Self {
        Outcome {
            code,
            body: Body::Json(v),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PRECONDITION } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    if let Some(jobs) = cli.common.jobs {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    match execute(&cli) {
        Ok(o) => {
            let written = match o.body {
                Body::Json(v) => writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json")),
                Body::Text(t) => write!(out, "{t}"),
            };
            if written.is_err() {
                return EXIT_PRECONDITION;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_PRECONDITION
        }
    }
}

fn domain(common: &Common) -> Result<CoefficientDomain> {
    match common.modulus {
        Some(m) => CoefficientDomain::modular(m),
        None => Ok(CoefficientDomain::Exact),
    }
}

fn terms(common: &Common, default: usize) -> Result<usize> {
    let t = common.terms.unwrap_or(default);
    let c = ceiling()?;
    if t >= c {
        return Err(Error::CeilingExceeded {
            requested: t + 1,
            ceiling: c,
        });
    }
    Ok(t)
}

fn csv_text(header: [&str; 2], rows: impl Iterator<Item = (String, String)>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(header).map_err(io)?;
    for (a, b) in rows {
        w.write_record([a, b]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf8"))
}

/// Brute-force counter for a named series, if one exists.
fn oracle_for(name: NamedSeries) -> Option<fn(&Oracle, u64) -> Result<u64>> {
    match name {
        NamedSeries::Eo => Some(|o, n| o.count_eo(n)),
        NamedSeries::Eobar => Some(|o, n| o.count_eobar(n)),
        NamedSeries::Eou => Some(|o, n| o.count_eou(n)),
        NamedSeries::EobarEven => Some(|o, n| o.count_eobar(2 * n)),
        NamedSeries::EouEven => Some(|o, n| o.count_eou(2 * n)),
        NamedSeries::Eta83z | NamedSeries::Thm2Form => None,
    }
}

/// First index where the series and the oracle disagree, checking `n ≤ min(T, cap)`
/// (halved for the even-part series).
pub fn cross_check(name: NamedSeries, s: &Series, oracle: &Oracle) -> Result<Option<(u64, String, u64)>> {
    let count = oracle_for(name).ok_or_else(|| Error::InvalidArgument(format!("no oracle for `{name}`")))?;
    let reach = match name {
        NamedSeries::EobarEven | NamedSeries::EouEven => oracle.cap / 2,
        _ => oracle.cap,
    };
    let upto = (s.truncation() as u64).min(reach);
    let counts = oracle.table(upto, count)?;
    let modulus = s.domain().modulus();
    for (n, c) in counts.into_iter().enumerate() {
        let expected = match modulus {
            Some(m) => c % m as u64,
            None => c,
        };
        let got = s.coeff(n);
        if got != expected.into() {
            return Ok(Some((n as u64, got.to_string(), expected)));
        }
    }
    Ok(None)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let common = &cli.common;
    match &cli.command {
        Command::Expand { series } => {
            let name: NamedSeries = series.parse()?;
            let t = terms(common, 20)?;
            let s = named_series(name, t, domain(common)?)?;
            if common.cross_check {
                if let Some((n, got, want)) = cross_check(name, &s, &Oracle::default())? {
                    return Ok(Outcome::json(
                        EXIT_COUNTEREXAMPLE,
                        json!({"cross_check": "mismatch", "n": n.to_string(), "series": got, "oracle": want.to_string()}),
                    ));
                }
            }
            Ok(match common.out {
                OutputFormat::Json => Outcome::json(
                    0,
                    serde_json::to_value(crate::series::SeriesJson::from(&s)).expect("json"),
                ),
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    s.write_csv(&mut buf)?;
                    Outcome {
                        code: 0,
                        body: Body::Text(String::from_utf8(buf).expect("utf8")),
                    }
                }
            })
        }
        Command::Oracle { function, n, upto, cap } => {
            let name: NamedSeries = function.parse()?;
            let count = oracle_for(name).ok_or_else(|| Error::InvalidArgument(format!("no oracle for `{name}`")))?;
            let oracle = Oracle::new(*cap);
            let (from, to) = match (n, upto) {
                (Some(n), None) => (*n, *n),
                (None, Some(u)) => (0, *u),
                _ => return Err(Error::InvalidArgument("give exactly one of --n or --upto".into())),
            };
            let arg_limit = match name {
                NamedSeries::EobarEven | NamedSeries::EouEven => 2 * to,
                _ => to,
            };
            if arg_limit > *cap {
                return Err(Error::CapExceeded {
                    n: arg_limit,
                    cap: *cap,
                });
            }
            let all = oracle.table(to, count)?;
            let values: Vec<(u64, u64)> = (from..=to).map(|k| (k, all[k as usize])).collect();
            if common.cross_check {
                let s = named_series(name, to as usize, CoefficientDomain::Exact)?;
                if let Some(&(k, c)) = values.iter().find(|&&(k, c)| s.coeff(k as usize) != c.into()) {
                    return Ok(Outcome::json(
                        EXIT_COUNTEREXAMPLE,
                        json!({"cross_check": "mismatch", "n": k.to_string(), "series": s.coeff(k as usize).to_string(), "oracle": c.to_string()}),
                    ));
                }
            }
            Ok(match common.out {
                OutputFormat::Json => Outcome::json(
                    0,
                    json!({
                        "function": name.as_str(),
                        "counts": values.iter().map(|(k, c)| json!({"n": k.to_string(), "count": c.to_string()})).collect::<Vec<_>>(),
                    }),
                ),
                OutputFormat::Csv => Outcome {
                    code: 0,
                    body: Body::Text(csv_text(
                        ["n", "count"],
                        values.iter().map(|(k, c)| (k.to_string(), c.to_string())),
                    )?),
                },
            })
        }
        Command::Verify { claim } => {
            let claim = Claim::load(claim)?;
            let (code, report) = run_claim(&claim, ceiling()?)?;
            Ok(Outcome::json(code, report))
        }
        Command::Radu {
            m,
            big_m,
            n,
            r,
            t,
            rprime,
            u,
        } => {
            let r: Vec<i64> = parse_list(r)?;
            let tuple = RaduTuple::from_vector(*m, *big_m, *n, &r, *t)?;
            let rprime = match rprime {
                Some(text) => parse_pairs(text)?,
                None => Default::default(),
            };
            if let Some(d) = rprime.keys().find(|&&d| d == 0 || n % d != 0) {
                return Err(Error::InvalidArgument(format!(
                    "r' names {d}, which does not divide N = {n}"
                )));
            }
            let claim = Claim::Radu(CongruenceClaim::new(tuple, rprime, *u)?);
            let (code, report) = run_claim(&claim, ceiling()?)?;
            Ok(Outcome::json(code, report))
        }
        Command::Hecke { action } => hecke(common, action),
        Command::Density {
            function,
            horizon,
            checkpoints,
        } => {
            let checkpoints = match checkpoints {
                Some(c) => parse_list(c)?,
                None => Vec::new(),
            };
            let config = match function {
                DensityFunction::Eobar8n6 => {
                    ScanConfig::eobar_8n6(modulus_u32(common.modulus.unwrap_or(8))?, *horizon, checkpoints)?
                }
                DensityFunction::Eou2n => {
                    ScanConfig::eou_2n(modulus_u32(common.modulus.unwrap_or(2))?, *horizon, checkpoints)?
                }
            };
            let report = run_density(&config, ceiling()?)?;
            Ok(match common.out {
                OutputFormat::Json => Outcome::json(0, report.to_json()),
                OutputFormat::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let io = |e: csv::Error| Error::Parse(e.to_string());
                    w.write_record(["X", "divisible", "total", "fraction"]).map_err(io)?;
                    for row in &report.rows {
                        w.write_record([
                            row.horizon.to_string(),
                            row.divisible.to_string(),
                            row.total.to_string(),
                            rat_to_string(&row.fraction()),
                        ])
                        .map_err(io)?;
                    }
                    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
                    Outcome {
                        code: 0,
                        body: Body::Text(String::from_utf8(bytes).expect("utf8")),
                    }
                }
            })
        }
        Command::ParityScan { r, t, limit } => Ok(Outcome::json(0, run_parity_scan(*r, *t, *limit)?.to_json())),
        Command::Bound { r, t } => {
            let q = BoundQuery::new(*r, *t)?;
            let b = first_odd_bound(&q);
            Ok(Outcome::json(
                0,
                json!({
                    "r": r.to_string(),
                    "t": t.to_string(),
                    "d": q.d().to_string(),
                    "j": q.j().to_string(),
                    "bound": rat_to_string(&b),
                    "integral": b.is_integer(),
                }),
            ))
        }
    }
}

fn hecke(common: &Common, action: &HeckeAction) -> Result<Outcome> {
    match action {
        HeckeAction::Eigen { form, p } => {
            let (eq, series) = match form.parse::<NamedSeries>() {
                Ok(NamedSeries::Eta83z) => (EtaQuotient::new(9, [(3, 8)])?, NamedSeries::Eta83z),
                Ok(NamedSeries::Thm2Form) => (EtaQuotient::new(2304, [(96, 5), (24, -1)])?, NamedSeries::Thm2Form),
                Ok(other) => return Err(Error::InvalidArgument(format!("`{other}` is not a modular form"))),
                Err(_) => {
                    let eq: EtaQuotient = form.parse()?;
                    let ctx = HeckeContext::for_eta_quotient(&eq, *p)?;
                    let f = eq.to_series(terms(common, 1000)?, domain(common)?)?;
                    return Ok(eigen_outcome(&f, &ctx)?);
                }
            };
            let ctx = HeckeContext::for_eta_quotient(&eq, *p)?;
            let f = named_series(series, terms(common, 1000)?, domain(common)?)?;
            eigen_outcome(&f, &ctx)
        }
        HeckeAction::Fj => {
            let report = fj_structure_check(terms(common, 5000)?)?;
            let v = json!({
                "truncation": report.truncation.to_string(),
                "support": report.support.iter().map(|(j, ok)| json!({"j": j.to_string(), "ok": ok})).collect::<Vec<_>>(),
                "annihilated": report.annihilated.iter().map(|(j, p, ok)| json!({"j": j.to_string(), "p": p.to_string(), "ok": ok})).collect::<Vec<_>>(),
                "mappings": report.mappings.iter().map(|m| json!({
                    "j": m.j.to_string(),
                    "p": m.p.to_string(),
                    "target": m.target.to_string(),
                    "supported": m.supported,
                    "multiple": m.multiple.as_ref().map(|c| c.to_string()),
                })).collect::<Vec<_>>(),
            });
            Ok(Outcome::json(
                if report.ok() {
                    EXIT_VERIFIED
                } else {
                    EXIT_COUNTEREXAMPLE
                },
                v,
            ))
        }
        HeckeAction::Eligible { limit } => {
            let t = crate::hecke::thm2_eligibility_index(*limit) as usize;
            let c = ceiling()?;
            if t >= c {
                return Err(Error::CeilingExceeded {
                    requested: t + 1,
                    ceiling: c,
                });
            }
            let primes = eligible_prime_search_thm2(*limit)?;
            Ok(Outcome::json(
                0,
                json!({"limit": limit.to_string(), "primes": primes.iter().map(u64::to_string).collect::<Vec<_>>()}),
            ))
        }
    }
}

fn eigen_outcome(f: &Series, ctx: &HeckeContext) -> Result<Outcome> {
    let report = eigen_residual(f, ctx)?;
    let code = match report.status {
        EigenStatus::ExactMatch => EXIT_VERIFIED,
        EigenStatus::MismatchAt(_) => EXIT_COUNTEREXAMPLE,
    };
    Ok(Outcome::json(code, report.to_json()))
}

fn modulus_u32(m: u64) -> Result<u32> {
    u32::try_from(m)
        .ok()
        .filter(|&m| m >= 1)
        .ok_or(Error::InvalidModulus(m))
}

fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<T>().map_err(|e| Error::Parse(format!("`{x}`: {e}"))))
        .collect()
}

fn parse_pairs(text: &str) -> Result<std::collections::BTreeMap<u64, i64>> {
    let mut out = std::collections::BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (d, e) = item
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `delta:exponent`, got `{item}`")))?;
        let d: u64 = d.trim().parse().map_err(|e| Error::Parse(format!("`{d}`: {e}")))?;
        let e: i64 = e.trim().parse().map_err(|x| Error::Parse(format!("`{e}`: {x}")))?;
        *out.entry(d).or_insert(0) += e;
    }
    Ok(out)
}
