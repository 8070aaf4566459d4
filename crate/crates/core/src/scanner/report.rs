use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::{Format, Mode, ScanConfig};
use crate::verdict::{Status, Verdict};

/// The parts of a config that determine the report. Worker count and
/// output path are left out so reports compare byte for byte.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub mode: Mode,
    pub prime_min: u64,
    pub prime_max: u64,
    pub alphas: Vec<String>,
    pub cases: Vec<String>,
    pub tightness: bool,
}

impl From<&ScanConfig> for ConfigEcho {
    fn from(cfg: &ScanConfig) -> Self {
        Self {
            mode: cfg.mode,
            prime_min: cfg.prime_min,
            prime_max: cfg.prime_max,
            alphas: cfg.alphas.iter().map(ToString::to_string).collect(),
            cases: cfg.cases.iter().map(|c| c.as_str().to_string()).collect(),
            tightness: cfg.tightness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub case: String,
    pub p: u64,
    pub alpha: Option<String>,
    pub m: u32,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub status: Status,
    pub valuation: Option<String>,
    pub reason: Option<String>,
}

impl From<&Verdict> for Record {
    fn from(v: &Verdict) -> Self {
        Self {
            case: v.case.clone(),
            p: v.p,
            alpha: v.alpha.as_ref().map(ToString::to_string),
            m: v.exponent,
            lhs: v.lhs.as_ref().map(ToString::to_string),
            rhs: v.rhs.as_ref().map(ToString::to_string),
            status: v.status,
            valuation: v.valuation.map(|x| x.to_string()),
            reason: v.reason.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnomalyKind {
    Fail,
    /// Agreement to a higher power of `p` than claimed.
    Strengthened,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anomaly {
    pub kind: AnomalyKind,
    pub case: String,
    pub p: u64,
    pub alpha: Option<String>,
    pub m: u32,
    pub valuation: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub config: ConfigEcho,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub anomalies: Vec<Anomaly>,
}

impl ScanReport {
    pub fn from_verdicts(config: ConfigEcho, verdicts: &[Verdict]) -> Self {
        let mut summary = Summary::default();
        let mut anomalies = Vec::new();
        for v in verdicts {
            match v.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skip => summary.skip += 1,
            }
            let kind = if v.status == Status::Fail {
                AnomalyKind::Fail
            } else if v.is_strengthened() {
                AnomalyKind::Strengthened
            } else {
                continue;
            };
            anomalies.push(Anomaly {
                kind,
                case: v.case.clone(),
                p: v.p,
                alpha: v.alpha.as_ref().map(ToString::to_string),
                m: v.exponent,
                valuation: v.valuation.map(|x| x.to_string()),
            });
        }
        Self {
            config,
            records: verdicts.iter().map(Record::from).collect(),
            summary,
            anomalies,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }
}

pub fn emit_report(report: &ScanReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serializes");
            out.push(b'\n');
            out
        }
        Format::Csv => emit_csv(report),
        Format::Text => emit_text(report).into_bytes(),
    }
}

fn emit_csv(report: &ScanReport) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["case", "p", "alpha", "m", "lhs", "rhs", "status", "valuation"])
        .expect("in-memory write");
    for r in &report.records {
        let opt = |s: &Option<String>| s.clone().unwrap_or_default();
        w.write_record([
            r.case.clone(),
            r.p.to_string(),
            opt(&r.alpha),
            r.m.to_string(),
            opt(&r.lhs),
            opt(&r.rhs),
            r.status.as_str().to_string(),
            opt(&r.valuation),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn emit_text(report: &ScanReport) -> String {
    let header = ["case", "p", "alpha", "m", "status", "val", "lhs", "rhs"];
    let rows: Vec<[String; 8]> = report
        .records
        .iter()
        .map(|r| {
            let opt = |s: &Option<String>| s.clone().unwrap_or_else(|| "-".into());
            let rhs = match (&r.rhs, &r.reason) {
                (Some(rhs), None) => rhs.clone(),
                (Some(rhs), Some(why)) => format!("{rhs}  ({why})"),
                (None, Some(why)) => why.clone(),
                (None, None) => "-".into(),
            };
            [
                r.case.clone(),
                r.p.to_string(),
                opt(&r.alpha),
                r.m.to_string(),
                r.status.as_str().to_string(),
                opt(&r.valuation),
                opt(&r.lhs),
                rhs,
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else if i == 1 || i == 3 {
                let _ = write!(s, "{cell:>w$}  ");
            } else {
                let _ = write!(s, "{cell:<w$}  ");
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&header.map(String::from));
    for row in &rows {
        line(row);
    }
    let s = report.summary;
    let _ = writeln!(out, "\npass {}  fail {}  skip {}", s.pass, s.fail, s.skip);
    if !report.anomalies.is_empty() {
        out.push_str("anomalies:\n");
        for a in &report.anomalies {
            let alpha = a.alpha.as_deref().map(|x| format!(" alpha={x}")).unwrap_or_default();
            let val = a.valuation.as_deref().unwrap_or("-");
            let kind = match a.kind {
                AnomalyKind::Fail => "fail",
                AnomalyKind::Strengthened => "strengthened",
            };
            let _ = writeln!(out, "  {kind} {} p={}{alpha} m={} valuation={val}", a.case, a.p, a.m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::{verify_case, CaseId, CongruenceCase};
    use crate::rational::PIntegerRational;
    use crate::residue::Valuation;
    use num_bigint::BigUint;

    fn echo() -> ConfigEcho {
        ConfigEcho::from(&ScanConfig::default())
    }

    #[test]
    fn empty_report_has_zero_counts() {
        let r = ScanReport::from_verdicts(echo(), &[]);
        let v: serde_json::Value = serde_json::from_slice(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(v["summary"], serde_json::json!({"pass": 0, "fail": 0, "skip": 0}));
        assert_eq!(v["records"], serde_json::json!([]));
        assert_eq!(v["anomalies"], serde_json::json!([]));
    }

    #[test]
    fn csv_pass_line() {
        let v = verify_case(CongruenceCase::get(CaseId::WolstenholmeRel70), 5, None).unwrap();
        let r = ScanReport::from_verdicts(echo(), &[v]);
        let csv = String::from_utf8(emit_report(&r, Format::Csv)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "case,p,alpha,m,lhs,rhs,status,valuation");
        assert_eq!(lines[1], "wolstenholme_rel70,5,,3,1,1,pass,>=3");
    }

    #[test]
    fn strengthened_case_is_an_anomaly() {
        let mut v = Verdict::skip("wolstenholme_rel70", 16843, None, 3, "");
        v.status = Status::Pass;
        v.reason = None;
        v.lhs = Some(BigUint::from(1u32));
        v.rhs = Some(BigUint::from(1u32));
        v.valuation = Some(Valuation::Exact(4));
        let r = ScanReport::from_verdicts(echo(), &[v]);
        assert_eq!(r.anomalies.len(), 1);
        assert_eq!(r.anomalies[0].kind, AnomalyKind::Strengthened);
        let text = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
        assert!(text.contains("strengthened wolstenholme_rel70 p=16843 m=3 valuation=4"));
    }

    #[test]
    fn json_round_trip() {
        let a = PIntegerRational::integer(2);
        let vs = vec![
            verify_case(CongruenceCase::get(CaseId::Thm1), 5, Some(&a)).unwrap(),
            verify_case(CongruenceCase::get(CaseId::Rel38), 3, Some(&a)).unwrap(),
            verify_case(CongruenceCase::get(CaseId::Morley), 3, None).unwrap(),
        ];
        let r = ScanReport::from_verdicts(echo(), &vs);
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, skip: 1 });
        let bytes = emit_report(&r, Format::Json);
        let back: ScanReport = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn text_table_is_aligned() {
        let vs: Vec<Verdict> = [5u64, 7, 11]
            .iter()
            .map(|&p| verify_case(CongruenceCase::get(CaseId::WolstenholmeRel70), p, None).unwrap())
            .collect();
        let r = ScanReport::from_verdicts(echo(), &vs);
        let text = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
        let rows: Vec<&str> = text.lines().take(4).collect();
        let col = rows[0].find("status").unwrap();
        assert!(rows[1..].iter().all(|l| &l[col..col + 4] == "pass"), "{text}");
    }
}
