use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::congruence::{CaseId, CATALOG};
use crate::rational::PIntegerRational;

pub const WORKERS_ENV: &str = "CONGRLAB_WORKERS";

/// Integers -3..6, then the rational entries.
pub fn standard_alpha_sweep() -> Vec<PIntegerRational> {
    let mut out: Vec<PIntegerRational> = (-3..=6).map(PIntegerRational::integer).collect();
    for s in ["1/2", "-1/2", "1/3", "2/3", "3/2", "5/2", "1/4", "7/3"] {
        out.push(s.parse().expect("valid literal"));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Catalog congruences.
    Cases,
    /// Harmonic and Bernoulli lemma suites.
    Lemmas,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub mode: Mode,
    pub prime_min: u64,
    pub prime_max: u64,
    pub alphas: Vec<PIntegerRational>,
    pub cases: Vec<CaseId>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub workers: usize,
    pub tightness: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Cases,
            prime_min: 3,
            prime_max: 499,
            alphas: standard_alpha_sweep(),
            cases: CATALOG.iter().map(|c| c.id).collect(),
            format: Format::Text,
            output: None,
            workers: default_workers(),
            tightness: false,
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UsageError {
    /// `--help` or `--version`; not a failure.
    #[error("{0}")]
    Info(String),
    #[error("{}", .0.join("\n"))]
    Invalid(Vec<String>),
}

#[derive(Debug, Parser)]
#[command(name = "congrlab", version, about = "Exact checks of Wolstenholme/Morley-type congruences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check catalog congruences at one prime.
    Verify {
        #[arg(long = "p", value_name = "P")]
        p: u64,
        #[command(flatten)]
        select: Selection,
        #[command(flatten)]
        out: Output,
    },
    /// Sweep catalog congruences over a prime range.
    Scan {
        #[arg(long, value_name = "A..B", default_value = "3..499")]
        primes: String,
        #[command(flatten)]
        select: Selection,
        #[command(flatten)]
        out: Output,
    },
    /// Run the harmonic and Bernoulli lemma suites over a prime range.
    Lemmas {
        #[arg(long, value_name = "A..B", default_value = "3..199")]
        primes: String,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
struct Selection {
    /// Catalog ids (or aliases), comma separated; "all" for the whole catalog.
    #[arg(long = "case", value_delimiter = ',')]
    cases: Vec<String>,
    /// Parameters as integers or a/b; defaults to the standard sweep.
    #[arg(long = "alpha", value_delimiter = ',', allow_hyphen_values = true)]
    alphas: Vec<String>,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Keep two extra powers of p so over-strong agreement is reported.
    #[arg(long)]
    tightness: bool,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("--primes: expected A..B, got {s:?}"))?;
    let lo = a.trim().parse::<u64>().map_err(|e| format!("--primes: bad lower bound {a:?}: {e}"))?;
    let hi = b.trim().parse::<u64>().map_err(|e| format!("--primes: bad upper bound {b:?}: {e}"))?;
    Ok((lo, hi))
}

/// Parse a command line (including the program name) against an environment
/// lookup.
pub fn parse_config<I, T>(
    argv: I,
    env: impl Fn(&str) -> Option<String>,
) -> Result<ScanConfig, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => UsageError::Info(e.to_string()),
            _ => {
                let msg = e.to_string();
                let first = msg.lines().next().unwrap_or("invalid arguments");
                UsageError::Invalid(vec![first.trim_start_matches("error: ").to_string()])
            }
        }
    })?;

    let mut errors = Vec::new();
    let mut cfg = ScanConfig::default();
    let (range, select, out) = match cli.command {
        Command::Verify { p, select, out } => (Ok((p, p)), Some(select), out),
        Command::Scan { primes, select, out } => (parse_range(&primes), Some(select), out),
        Command::Lemmas { primes, out } => {
            cfg.mode = Mode::Lemmas;
            cfg.alphas.clear();
            cfg.cases.clear();
            (parse_range(&primes), None, out)
        }
    };
    match range {
        Ok((lo, hi)) => {
            if lo < 3 {
                errors.push(format!("--primes: lower bound must be >= 3, got {lo}"));
            }
            if hi < lo {
                errors.push(format!("--primes: upper bound {hi} is below lower bound {lo}"));
            }
            cfg.prime_min = lo;
            cfg.prime_max = hi;
        }
        Err(e) => errors.push(e),
    }

    if let Some(select) = select {
        if !select.cases.is_empty() && !select.cases.iter().any(|c| c == "all") {
            let mut ids = Vec::new();
            for c in &select.cases {
                match c.parse::<CaseId>() {
                    Ok(id) if !ids.contains(&id) => ids.push(id),
                    Ok(_) => {}
                    Err(e) => errors.push(format!("--case: {e}")),
                }
            }
            // catalog order keeps reports independent of flag order
            cfg.cases = CATALOG.iter().map(|c| c.id).filter(|id| ids.contains(id)).collect();
        }
        if !select.alphas.is_empty() {
            cfg.alphas.clear();
            for a in &select.alphas {
                match a.parse::<PIntegerRational>() {
                    Ok(q) if !cfg.alphas.contains(&q) => cfg.alphas.push(q),
                    Ok(_) => {}
                    Err(e) => errors.push(format!("--alpha: {a:?}: {e}")),
                }
            }
        }
    }

    cfg.format = out.format;
    cfg.output = out.output;
    cfg.tightness = out.tightness;
    match out.workers {
        Some(0) => errors.push("--workers: must be at least 1".to_string()),
        Some(n) => cfg.workers = n,
        None => {
            if let Some(v) = env(WORKERS_ENV) {
                match v.trim().parse::<usize>() {
                    Ok(n) if n > 0 => cfg.workers = n,
                    _ => errors.push(format!("{WORKERS_ENV}: expected a positive integer, got {v:?}")),
                }
            }
        }
    }

    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(UsageError::Invalid(errors))
    }
}
