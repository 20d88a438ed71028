//! Parameter scans and report emission behind the `motzkin` binary.
//!
//! A [`RunConfig`] names a [`Command`] and a grid of `(n, s, t)` values;
//! [`run`] evaluates every grid point on a worker pool and returns a
//! [`Report`] of named tables, written as CSV or JSON by [`Report::emit`].

mod commands;
mod report;

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::linalg::EigenConfig;
use crate::{Error, Result};

pub use report::{format_float, Cell, Report, Table};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "MOTZKIN_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Count,
    Gap,
    MarkovVerify,
    Cheeger,
    TheoremScan,
    EntropyScan,
    Mcmc,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Count,
        Command::Gap,
        Command::MarkovVerify,
        Command::Cheeger,
        Command::TheoremScan,
        Command::EntropyScan,
        Command::Mcmc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Count => "count",
            Command::Gap => "gap",
            Command::MarkovVerify => "markov-verify",
            Command::Cheeger => "cheeger",
            Command::TheoremScan => "theorem-scan",
            Command::EntropyScan => "entropy-scan",
            Command::Mcmc => "mcmc",
        }
    }

    fn needs_t(self) -> bool {
        self != Command::Count
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Command> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown command {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format {s:?}, expected csv or json"))),
        }
    }
}

/// Everything that determines a run's output. Output format, locations and
/// the timing switch are excluded from the config hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: Vec<usize>,
    pub s: Vec<usize>,
    pub t: Vec<f64>,
    pub seed: u64,
    /// MCMC steps.
    pub steps: u64,
    /// MCMC trace stride; `0` picks about ten thousand rows.
    pub stride: u64,
    /// MCMC start walk in text form; the flat walk when absent.
    pub start: Option<String>,
    /// Relative tolerance of the gap relation.
    pub tol: f64,
    /// Absolute tolerance of the transition matrix identities.
    pub identity_tol: f64,
    /// Bound on `‖H ψ‖` for the ground state.
    pub frustration_tol: f64,
    pub eigen: EigenConfig,
    /// Also diagonalize the full-space Hamiltonian (`gap` only).
    pub full_space: bool,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Directory for coordinate-format matrix exports.
    #[serde(skip)]
    pub export: Option<PathBuf>,
    /// Adds wall-clock columns, which makes output differ between runs.
    #[serde(skip)]
    pub timings: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            n: Vec::new(),
            s: Vec::new(),
            t: Vec::new(),
            seed: 0,
            steps: 1_000_000,
            stride: 0,
            start: None,
            tol: 1e-9,
            identity_tol: 1e-12,
            frustration_tol: 1e-10,
            eigen: EigenConfig::default(),
            full_space: false,
            format: Format::Csv,
            out: None,
            export: None,
            timings: false,
        }
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let missing = |flag: &str| Error::Config(format!("{} requires --{flag}", self.command.as_str()));
        if self.n.is_empty() {
            return Err(missing("n"));
        }
        if self.s.is_empty() {
            return Err(missing("s"));
        }
        if self.command.needs_t() && self.t.is_empty() {
            return Err(missing("t"));
        }
        for (name, v) in [
            ("tol", self.tol),
            ("identity-tol", self.identity_tol),
            ("frustration-tol", self.frustration_tol),
            ("eigen tolerance", self.eigen.tol),
            ("zero tolerance", self.eigen.zero_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.command == Command::Mcmc && self.steps == 0 {
            return Err(Error::Config("mcmc requires --steps > 0".into()));
        }
        Ok(())
    }

    /// Grid in `n`-major, then `s`, then `t` order. Commands without `t`
    /// use `t = 1`.
    pub fn grid(&self) -> Result<Vec<crate::ModelParams>> {
        let ts = if self.command.needs_t() { self.t.clone() } else { vec![1.0] };
        let mut out = Vec::with_capacity(self.n.len() * self.s.len() * ts.len());
        for &n in &self.n {
            for &s in &self.s {
                for &t in &ts {
                    out.push(crate::ModelParams::new(n, s, t)?);
                }
            }
        }
        Ok(out)
    }
}

/// Parses `"3"`, `"1,2,4"`, `"2..5"` (inclusive) or `"10..400:10"` (with a
/// step), and comma-separated mixtures of these.
pub fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("cannot parse integer list {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((lo, rest)) = part.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (hi, step.trim().parse::<usize>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            if step == 0 || hi < lo {
                return Err(bad());
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

/// Parses `"2"` or `"1.1,1.5,2"`.
pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("cannot parse real list {text:?}")))
        })
        .collect()
}

/// Worker count from [`WORKERS_ENV`], if set.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&w| w > 0)
            .map(Some)
            .ok_or_else(|| Error::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Runs the configured command on a pool sized by [`WORKERS_ENV`].
pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers_from_env()? {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    pool.install(|| commands::dispatch(config))
}
