//! Prime-range sweeps: configuration, parallel evaluation and reports.

mod config;
mod report;

use std::io::Write;

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

pub use config::{
    default_workers, parse_config, standard_alpha_sweep, Format, Mode, ScanConfig, UsageError,
    WORKERS_ENV,
};
pub use report::{emit_report, Anomaly, AnomalyKind, ConfigEcho, Record, ScanReport, Summary};

use crate::bernoulli::{check_lemma4, BernoulliCache};
use crate::congruence::{CaseError, CongruenceCase, PrimeContext};
use crate::harmonic::{check_h_congruences, check_power_sum_lemma3, check_reflection_exact};
use crate::primes::odd_primes_in;
use crate::residue::prime_power;
use crate::verdict::Verdict;
use crate::word::Word;

/// Extra powers of `p` kept under `--tightness`.
pub const TIGHTNESS_MARGIN: u32 = 2;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error(transparent)]
    Case(#[from] CaseError),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub fn run_scan(cfg: &ScanConfig) -> Result<ScanReport, ScanError> {
    let primes = odd_primes_in(cfg.prime_min, cfg.prime_max);
    let cases: Vec<&'static CongruenceCase> = cfg.cases.iter().map(|&id| CongruenceCase::get(id)).collect();

    // Built once, before the fan-out, then shared read-only.
    let needs_bernoulli = match cfg.mode {
        Mode::Cases => cases.iter().any(|c| c.needs_bernoulli),
        Mode::Lemmas => true,
    };
    let bernoulli = (needs_bernoulli && cfg.prime_max >= 5)
        .then(|| BernoulliCache::up_to(cfg.prime_max as usize - 3));

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| ScanError::Pool(e.to_string()))?;
    let per_prime: Vec<Result<Vec<Verdict>, CaseError>> = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| match cfg.mode {
                Mode::Cases => scan_prime(p, &cases, cfg, bernoulli.as_ref()),
                Mode::Lemmas => Ok(lemma_prime(p, bernoulli.as_ref())),
            })
            .collect()
    });

    let mut verdicts = Vec::new();
    for r in per_prime {
        verdicts.extend(r?);
    }
    if cfg.mode == Mode::Cases {
        // Stable sort: within one (case, p) the alpha order is the config order.
        let rank = |v: &Verdict| cfg.cases.iter().position(|c| c.as_str() == v.case);
        verdicts.sort_by_key(|v| (rank(v), v.p));
    }
    Ok(ScanReport::from_verdicts(ConfigEcho::from(cfg), &verdicts))
}

fn scan_prime(
    p: u64,
    cases: &[&CongruenceCase],
    cfg: &ScanConfig,
    bernoulli: Option<&BernoulliCache>,
) -> Result<Vec<Verdict>, CaseError> {
    let margin = if cfg.tightness { TIGHTNESS_MARGIN } else { 0 };
    let Some(top) = cases.iter().map(|c| c.exponent.at(p) + margin).max() else {
        return Ok(Vec::new());
    };
    if u64::supports(&prime_power(p, top)) {
        scan_prime_with::<u64>(p, top, margin, cases, cfg, bernoulli)
    } else {
        scan_prime_with::<BigUint>(p, top, margin, cases, cfg, bernoulli)
    }
}

fn scan_prime_with<W: Word>(
    p: u64,
    top: u32,
    margin: u32,
    cases: &[&CongruenceCase],
    cfg: &ScanConfig,
    bernoulli: Option<&BernoulliCache>,
) -> Result<Vec<Verdict>, CaseError> {
    let ctx = PrimeContext::<W>::new(p, top, bernoulli)?;
    let mut out = Vec::new();
    for case in cases {
        if case.uses_alpha() {
            for a in &cfg.alphas {
                out.push(ctx.verify(case, Some(a), margin)?);
            }
        } else {
            out.push(ctx.verify(case, None, margin)?);
        }
    }
    Ok(out)
}

fn lemma_prime(p: u64, bernoulli: Option<&BernoulliCache>) -> Vec<Verdict> {
    let mut out = check_h_congruences(p);
    out.extend(check_reflection_exact(p));
    out.extend(check_power_sum_lemma3(p));
    match bernoulli {
        Some(cache) => out.extend(check_lemma4(p, cache)),
        None => out.extend(check_lemma4(p, &BernoulliCache::new())),
    }
    out
}

/// Write the report where the config says. Returns the bytes written.
pub fn write_report(report: &ScanReport, cfg: &ScanConfig) -> Result<Vec<u8>, ScanError> {
    let bytes = emit_report(report, cfg.format);
    match &cfg.output {
        Some(path) => std::fs::write(path, &bytes).map_err(|source| ScanError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(&bytes)
                .and_then(|()| stdout.flush())
                .map_err(|source| ScanError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    Ok(bytes)
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// The whole command line program; returns the exit status.
pub fn main_with<I, T>(argv: I, env: impl Fn(&str) -> Option<String>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match parse_config(argv, env) {
        Ok(cfg) => cfg,
        Err(UsageError::Info(text)) => {
            print!("{text}");
            return EXIT_OK;
        }
        Err(e @ UsageError::Invalid(_)) => {
            for line in e.to_string().lines() {
                eprintln!("congrlab: {line}");
            }
            return EXIT_USAGE;
        }
    };
    let report = match run_scan(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("congrlab: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = write_report(&report, &cfg) {
        eprintln!("congrlab: {e}");
        return EXIT_USAGE;
    }
    if report.has_failures() {
        EXIT_FAIL
    } else {
        EXIT_OK
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::CaseId;
    use crate::verdict::Status;

    fn cfg(args: &[&str]) -> ScanConfig {
        parse_config(std::iter::once("congrlab").chain(args.iter().copied()), |_| None).unwrap()
    }

    #[test]
    fn rel70_small_range() {
        let r = run_scan(&cfg(&["scan", "--primes", "3..13", "--case", "rel70"])).unwrap();
        assert_eq!(r.records.len(), 5);
        assert_eq!(r.records[0].status, Status::Skip);
        assert_eq!(r.records[0].reason.as_deref(), Some("requires p >= 5"));
        assert!(r.records[1..].iter().all(|x| x.status == Status::Pass));
    }

    #[test]
    fn thm1_at_seven_uses_m6() {
        let r = run_scan(&cfg(&["verify", "--case", "thm1", "--p", "7", "--alpha", "2"])).unwrap();
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.records[0].m, 6);
        assert_eq!(r.records[0].status, Status::Pass);
    }

    #[test]
    fn thm1_at_five_is_126() {
        let r = run_scan(&cfg(&["verify", "--case", "thm1", "--p", "5", "--alpha", "2"])).unwrap();
        assert_eq!(r.records[0].lhs.as_deref(), Some("126"));
        assert_eq!(r.records[0].rhs.as_deref(), Some("126"));
    }

    #[test]
    fn non_p_integer_alpha_is_skipped() {
        let r = run_scan(&cfg(&["scan", "--alpha", "1/7", "--primes", "7..7"])).unwrap();
        let thm = r.records.iter().find(|x| x.case == "thm1").unwrap();
        assert_eq!(thm.status, Status::Skip);
        assert!(thm.reason.as_deref().unwrap().starts_with("NotPInteger"));
    }

    #[test]
    fn ordering_follows_catalog_then_prime_then_alpha() {
        let c = cfg(&["scan", "--primes", "5..13", "--case", "thm1,rel70", "--alpha", "3,2", "--workers", "3"]);
        assert_eq!(c.cases, vec![CaseId::WolstenholmeRel70, CaseId::Thm1]);
        let r = run_scan(&c).unwrap();
        let keys: Vec<(String, u64, Option<String>)> =
            r.records.iter().map(|x| (x.case.clone(), x.p, x.alpha.clone())).collect();
        assert_eq!(keys[0], ("wolstenholme_rel70".into(), 5, None));
        assert_eq!(keys[4], ("thm1".into(), 5, Some("3".into())));
        assert_eq!(keys[5], ("thm1".into(), 5, Some("2".into())));
        assert_eq!(keys[6], ("thm1".into(), 7, Some("3".into())));
    }

    #[test]
    fn tightness_measures_past_the_claim() {
        let r = run_scan(&cfg(&["scan", "--primes", "5..11", "--case", "rel70", "--tightness"])).unwrap();
        assert!(r.anomalies.is_empty());
        assert_eq!(r.records[0].valuation.as_deref(), Some("3"));
        // exact equality at p = 3
        let r = run_scan(&cfg(&["verify", "--case", "thm1", "--p", "3", "--alpha", "2", "--tightness"])).unwrap();
        assert_eq!(r.anomalies.len(), 1);
        assert_eq!(r.anomalies[0].kind, AnomalyKind::Strengthened);
    }

    #[test]
    fn lemma_mode_small() {
        let r = run_scan(&cfg(&["lemmas", "--primes", "3..13"])).unwrap();
        assert_eq!(r.summary.fail, 0, "{:?}", r.anomalies);
        assert!(r.summary.pass > 0);
    }
}
