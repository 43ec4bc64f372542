//! Record serialization and sweep checkpoints.
//!
//! json-lines is the lossless format: `n`, `p` and `q` are decimal strings
//! because closed-form members run to thousands of digits. CSV shortens `n`
//! to [`CSV_SIGNIFICANT_DIGITS`] digits and adds a digit count.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::Factorization;
use crate::primality::SeqKind;
use crate::solver::{
    ClosedForm, EquationSpec, Provenance, SolutionForm, SolutionRecord, SolveReport, SweepProgress,
};

/// Environment variable that overrides the bundled prime-index catalog.
pub const CATALOG_ENV: &str = "SIGMA2_CATALOG";

pub const CSV_SIGNIFICANT_DIGITS: usize = 40;

/// Longest `n` the human format prints in full.
const HUMAN_FULL_DIGITS: usize = 60;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("checkpoint is for {found}, not {expected}")]
    SpecMismatch { expected: Box<EquationSpec>, found: Box<EquationSpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    JsonLines,
    Csv,
    Human,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" | "jsonl" | "json-lines" => Ok(OutputFormat::JsonLines),
            "csv" => Ok(OutputFormat::Csv),
            "human" | "text" => Ok(OutputFormat::Human),
            other => Err(format!("unknown format {other:?}; expected json-lines, csv or human")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ClosedFormWire {
    seq: String,
    i: u64,
    j: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RecordWire {
    n: String,
    form: String,
    p: Option<String>,
    q: Option<String>,
    factorization: Option<Vec<(u64, u32)>>,
    provenance: String,
    verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    closed_form: Option<ClosedFormWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn seq_name(seq: SeqKind) -> &'static str {
    match seq {
        SeqKind::Fib => "fib",
        SeqKind::Lucas => "lucas",
    }
}

impl From<&SolutionRecord> for RecordWire {
    fn from(r: &SolutionRecord) -> Self {
        let (p, q, factorization) = match &r.form {
            SolutionForm::Prime(p) | SolutionForm::PrimeSquare(p) => (Some(p.to_string()), None, None),
            SolutionForm::PrimePair(p, q) => (Some(p.to_string()), Some(q.to_string()), None),
            SolutionForm::Exceptional(f) => (None, None, Some(f.factors().to_vec())),
        };
        RecordWire {
            n: r.n.to_string(),
            form: r.form.name().to_string(),
            p,
            q,
            factorization,
            provenance: r.provenance.name().to_string(),
            verified: r.verified,
            closed_form: r.closed_form.map(|c| ClosedFormWire { seq: seq_name(c.seq).to_string(), i: c.i, j: c.j }),
            note: r.note.clone(),
        }
    }
}

fn parse_nat(field: &str, value: Option<&String>) -> Result<BigUint, IoError> {
    let value = value.ok_or_else(|| IoError::Malformed(format!("missing {field}")))?;
    value.parse().map_err(|_| IoError::Malformed(format!("{field} = {value:?} is not a natural number")))
}

impl TryFrom<RecordWire> for SolutionRecord {
    type Error = IoError;

    fn try_from(w: RecordWire) -> Result<Self, IoError> {
        let form = match w.form.as_str() {
            "prime" => SolutionForm::Prime(parse_nat("p", w.p.as_ref())?),
            "prime-square" => SolutionForm::PrimeSquare(parse_nat("p", w.p.as_ref())?),
            "prime-pair" => SolutionForm::PrimePair(parse_nat("p", w.p.as_ref())?, parse_nat("q", w.q.as_ref())?),
            "exceptional" => {
                let f = w.factorization.ok_or_else(|| IoError::Malformed("missing factorization".into()))?;
                let sorted = f.windows(2).all(|w| w[0].0 < w[1].0) && f.iter().all(|&(p, e)| p >= 2 && e > 0);
                if !sorted {
                    return Err(IoError::Malformed(format!("factorization {f:?} is not sorted with positive exponents")));
                }
                SolutionForm::Exceptional(Factorization::from_sorted(f))
            }
            other => return Err(IoError::Malformed(format!("unknown form {other:?}"))),
        };
        let provenance = match w.provenance.as_str() {
            "sieve" => Provenance::Sieve,
            "conic" => Provenance::Conic,
            "closed-form" => Provenance::ClosedForm,
            other => return Err(IoError::Malformed(format!("unknown provenance {other:?}"))),
        };
        let closed_form = match w.closed_form {
            None => None,
            Some(c) => {
                let seq = match c.seq.as_str() {
                    "fib" => SeqKind::Fib,
                    "lucas" => SeqKind::Lucas,
                    other => return Err(IoError::Malformed(format!("unknown sequence {other:?}"))),
                };
                Some(ClosedForm { seq, i: c.i, j: c.j })
            }
        };
        let n = parse_nat("n", Some(&w.n))?;
        let product = match &form {
            SolutionForm::Prime(p) => p.clone(),
            SolutionForm::PrimeSquare(p) => p * p,
            SolutionForm::PrimePair(p, q) => p * q,
            SolutionForm::Exceptional(f) => BigUint::from(f.value()),
        };
        if product != n {
            return Err(IoError::Malformed(format!("n = {n} does not match its {} factors", form.name())));
        }
        Ok(SolutionRecord {
            n,
            form,
            verified: w.verified,
            provenance,
            closed_form,
            note: w.note,
        })
    }
}

/// One json-lines line, without the trailing newline.
pub fn record_json(r: &SolutionRecord) -> String {
    serde_json::to_string(&RecordWire::from(r)).expect("record serializes")
}

pub fn parse_record_json(line: &str) -> Result<SolutionRecord, IoError> {
    serde_json::from_str::<RecordWire>(line)?.try_into()
}

fn shorten(digits: &str) -> String {
    if digits.len() <= CSV_SIGNIFICANT_DIGITS {
        digits.to_string()
    } else {
        format!("{}...", &digits[..CSV_SIGNIFICANT_DIGITS])
    }
}

fn factor_string(r: &SolutionRecord) -> String {
    match &r.form {
        SolutionForm::Prime(p) => p.to_string(),
        SolutionForm::PrimeSquare(p) => format!("{p}^2"),
        SolutionForm::PrimePair(p, q) => format!("{p} * {q}"),
        SolutionForm::Exceptional(f) => f.to_string(),
    }
}

/// `n` as printed by the human format: in full when short, else by digit count.
fn human_n(r: &SolutionRecord) -> String {
    let digits = r.n.to_string();
    if digits.len() <= HUMAN_FULL_DIGITS {
        digits
    } else {
        format!("<{} digits>", digits.len())
    }
}

pub fn human_line(r: &SolutionRecord) -> String {
    let mut line = format!("n = {}", human_n(r));
    match r.closed_form {
        Some(c) => {
            let _ = write!(line, " = {c}");
        }
        None if r.n.to_string().len() <= HUMAN_FULL_DIGITS => {
            let _ = write!(line, " = {}", factor_string(r).replace(" * ", " · "));
        }
        None => {}
    }
    let _ = write!(line, "  [{}, {}", r.form.name(), r.provenance.name());
    line.push_str(if r.verified { ", verified]" } else { ", unverified]" });
    if let Some(note) = &r.note {
        let _ = write!(line, " ({note})");
    }
    line
}

pub fn write_records<W: Write>(out: &mut W, format: OutputFormat, records: &[SolutionRecord]) -> Result<(), IoError> {
    match format {
        OutputFormat::JsonLines => {
            for r in records {
                writeln!(out, "{}", record_json(r))?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "digits", "form", "factors", "provenance", "verified", "closed_form"])?;
            for r in records {
                let digits = r.n.to_string();
                let factors = match &r.form {
                    SolutionForm::PrimePair(p, q) => format!("{} * {}", shorten(&p.to_string()), shorten(&q.to_string())),
                    _ => factor_string(r),
                };
                w.write_record([
                    shorten(&digits),
                    digits.len().to_string(),
                    r.form.name().to_string(),
                    factors,
                    r.provenance.name().to_string(),
                    r.verified.to_string(),
                    r.closed_form.map(|c| c.to_string()).unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
        OutputFormat::Human => {
            for r in records {
                writeln!(out, "{}", human_line(r))?;
            }
        }
    }
    Ok(())
}

/// Trailing summary of a solve run as a JSON object.
pub fn summary_value(report: &SolveReport, timestamp: Option<u64>) -> Value {
    let mut v = json!({
        "summary": true,
        "A": report.spec.a.to_string(),
        "B": report.spec.b.to_string(),
        "classification": report.classification.to_string(),
        "symbolic": report.symbolic.as_ref().map(|s| s.to_string()),
        "count": report.records.len(),
        "exceptional": report.records.iter().filter(|r| r.form.is_exceptional()).count(),
        "searched_upto": report.searched_upto.to_string(),
        "q_bound": report.q_bound.to_string(),
        "complete": report.complete,
        "residual": report.residual().map(|(lo, hi)| [lo.to_string(), hi.to_string()]),
    });
    if let Some(t) = timestamp {
        v["timestamp"] = json!(t);
    }
    v
}

pub fn write_summary<W: Write>(
    out: &mut W,
    format: OutputFormat,
    report: &SolveReport,
    timestamp: Option<u64>,
) -> Result<(), IoError> {
    let v = summary_value(report, timestamp);
    match format {
        OutputFormat::JsonLines => writeln!(out, "{v}")?,
        OutputFormat::Csv => {
            for (k, val) in v.as_object().expect("object") {
                if k != "summary" {
                    writeln!(out, "# {k}: {val}")?;
                }
            }
        }
        OutputFormat::Human => {
            if let Some(s) = &report.symbolic {
                writeln!(out, "solutions: {s}")?;
            }
            writeln!(out, "{}", report.spec)?;
            writeln!(out, "classification: {}", report.classification)?;
            writeln!(out, "{} solutions listed, swept 1..={}, prime pairs with q <= {}", report.records.len(), report.searched_upto, report.q_bound)?;
            match report.residual() {
                Some((lo, hi)) => writeln!(out, "coverage: partial, {lo}..={hi} not swept")?,
                None => writeln!(out, "coverage: complete")?,
            }
            if let Some(t) = timestamp {
                writeln!(out, "timestamp: {t}")?;
            }
        }
    }
    Ok(())
}

/// Seconds since the Unix epoch.
pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Saved state of an exhaustive sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub spec: EquationSpec,
    pub cap: u64,
    pub progress: SweepProgress,
}

#[derive(Serialize, Deserialize)]
struct CheckpointWire {
    a: String,
    b: String,
    cap: u64,
    completed_upto: u64,
    found: Vec<RecordWire>,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        let wire = CheckpointWire {
            a: self.spec.a.to_string(),
            b: self.spec.b.to_string(),
            cap: self.cap,
            completed_upto: self.progress.completed_upto,
            found: self.progress.found.iter().map(RecordWire::from).collect(),
        };
        serde_json::to_string_pretty(&wire).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let wire: CheckpointWire = serde_json::from_str(text)?;
        let int = |field: &str, s: &str| {
            s.parse::<BigInt>().map_err(|_| IoError::Malformed(format!("{field} = {s:?} is not an integer")))
        };
        let found = wire.found.into_iter().map(SolutionRecord::try_from).collect::<Result<Vec<_>, _>>()?;
        if found.iter().any(|r| r.n > BigUint::from(wire.completed_upto)) {
            return Err(IoError::Malformed("checkpoint lists a solution beyond completed_upto".into()));
        }
        Ok(Checkpoint {
            spec: EquationSpec::new(int("a", &wire.a)?, int("b", &wire.b)?),
            cap: wire.cap,
            progress: SweepProgress { completed_upto: wire.completed_upto, found },
        })
    }

    /// Writes through a temporary file so an interrupted save leaves the old one intact.
    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        let file_err = |source| IoError::File { path: path.display().to_string(), source };
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_json()).map_err(file_err)?;
        std::fs::rename(&tmp, path).map_err(file_err)
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn ensure_spec(&self, spec: &EquationSpec) -> Result<(), IoError> {
        if &self.spec == spec {
            Ok(())
        } else {
            Err(IoError::SpecMismatch { expected: Box::new(spec.clone()), found: Box::new(self.spec.clone()) })
        }
    }
}
