use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint};
use serde_json::json;
use thiserror::Error;

use sigma2_core::arith::{self, ArithError, SieveConfig};
use sigma2_core::families::{self, EntryStatus, FamilyError, FamilyName, TableReport};
use sigma2_core::io::{self, Checkpoint, IoError, OutputFormat, CATALOG_ENV};
use sigma2_core::pell::{orbit_reps, solve_fib_conic, ConicPoint, ConicSpec, FibConicSign, PellError};
use sigma2_core::primality::{catalog_load, PrimalityPolicy, PrimeCatalog};
use sigma2_core::solver::{self, Candidate, EquationSpec, SolutionForm, SolverConfig, SolverError, SweepProgress};

use crate::args::{Cli, Command, GlobalArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DISCREPANCY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Failed(_) | CliError::Io(_) => EXIT_DISCREPANCY,
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::BudgetExceeded { .. }
            | SolverError::ScanBudgetExceeded { .. }
            | SolverError::Arith(ArithError::BudgetExceeded { .. })
            | SolverError::Pell(PellError::SearchTooLarge { .. }) => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Solver(s) => s.into(),
            FamilyError::BoundTooLarge(_) => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io(io) => CliError::Io(io),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<PellError> for CliError {
    fn from(e: PellError) -> Self {
        SolverError::from(e).into()
    }
}

fn solver_config(g: &GlobalArgs) -> SolverConfig {
    SolverConfig {
        sieve: SieveConfig { segment_size: g.segments, ..SieveConfig::default() },
        policy: PrimalityPolicy::with_rounds(g.rounds),
        threads: g.threads.map(|t| t as usize),
        ..SolverConfig::default()
    }
}

fn load_catalog(g: &GlobalArgs) -> Result<PrimeCatalog, CliError> {
    let path = g.catalog.clone().or_else(|| std::env::var_os(CATALOG_ENV).map(PathBuf::from));
    match path {
        Some(p) => catalog_load(&p).map_err(|e| CliError::Usage(format!("cannot load catalog: {e}"))),
        None => Ok(PrimeCatalog::bundled()),
    }
}

pub fn run(cli: &Cli, out: &mut impl Write) -> Result<u8, CliError> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t as usize).build_global();
    }
    match &cli.command {
        Command::Solve { a, b } => cmd_solve(g, EquationSpec::new(a.clone(), b.clone()), out),
        Command::Family { name, m, k, verify } => cmd_family(g, *name, *m, *k, *verify, out),
        Command::Pell { fib_conic, d, n, y_bound } => cmd_pell(g, *fib_conic, d.as_ref(), n.as_ref(), y_bound, out),
        Command::Sigma2 { n } => cmd_sigma2(g, *n, out),
        Command::VerifyTables => cmd_verify_tables(g, out),
    }
}

fn timestamp(g: &GlobalArgs) -> Option<u64> {
    (!g.no_timestamp).then(io::unix_timestamp)
}

fn cmd_solve(g: &GlobalArgs, spec: EquationSpec, out: &mut impl Write) -> Result<u8, CliError> {
    let config = solver_config(g);
    let progress = match &g.resume {
        Some(path) => {
            let cp = Checkpoint::load(path)?;
            cp.ensure_spec(&spec)?;
            cp.progress
        }
        None => SweepProgress::default(),
    };
    let save_to: Option<&Path> = g.checkpoint.as_deref().or(g.resume.as_deref());
    let mut save_error = None;
    let report = solver::solve_resumable(&spec, g.cap, &g.q_bound, &config, progress, |p| {
        if let Some(path) = save_to {
            let cp = Checkpoint { spec: spec.clone(), cap: g.cap, progress: p.clone() };
            if let Err(e) = cp.save(path) {
                save_error.get_or_insert(e);
            }
        }
    })
    .map_err(|e| match e {
        SolverError::BudgetExceeded { completed, budget, .. } => CliError::Budget(format!(
            "{e}\nfirst pass: --cap {} --checkpoint FILE; then repeat with --resume FILE, raising --cap by {budget} each time",
            completed + budget
        )),
        other => other.into(),
    })?;
    if let Some(e) = save_error {
        return Err(e.into());
    }
    if let Some(s) = &report.symbolic {
        match g.format {
            OutputFormat::JsonLines => writeln!(out, "{}", json!({"form": "symbolic", "solutions": s.to_string()}))?,
            OutputFormat::Csv => writeln!(out, "# solutions: {s}")?,
            OutputFormat::Human => {}
        }
    }
    io::write_records(out, g.format, &report.records)?;
    io::write_summary(out, g.format, &report, timestamp(g))?;
    Ok(EXIT_OK)
}

fn cmd_family(
    g: &GlobalArgs,
    name: FamilyName,
    m: Option<u64>,
    k: Option<u64>,
    verify: bool,
    out: &mut impl Write,
) -> Result<u8, CliError> {
    let value = match (name, m, k) {
        (FamilyName::Polignac, None, Some(k)) => k,
        (FamilyName::Polignac, Some(_), _) => return Err(CliError::Usage("polignac takes --k, not --m".into())),
        (_, Some(m), None) => m,
        _ => return Err(CliError::Usage("fib, lucas+ and lucas- take --m, not --k".into())),
    };
    let kind = name.with_parameter(value);
    let spec = families::family_spec(kind)?;
    let catalog = load_catalog(g)?;
    let policy = PrimalityPolicy::with_rounds(g.rounds);
    let mut records = families::generate(kind, g.index_bound, &catalog, g.recheck, &policy)?;
    if verify {
        for r in &mut records {
            if let SolutionForm::PrimePair(p, q) = &r.form {
                r.verified = solver::verify_solution(&Candidate::Pair(p.clone(), q.clone()), &spec, &policy)?;
            }
        }
    }
    io::write_records(out, g.format, &records)?;
    Ok(if records.iter().all(|r| r.verified) { EXIT_OK } else { EXIT_DISCREPANCY })
}

fn write_points(out: &mut impl Write, format: OutputFormat, kind: &str, points: &[ConicPoint]) -> Result<(), CliError> {
    for p in points {
        match format {
            OutputFormat::JsonLines => {
                writeln!(out, "{}", json!({"kind": kind, "x": p.x().to_string(), "y": p.y().to_string()}))?
            }
            OutputFormat::Csv => writeln!(out, "{kind},{},{}", p.x(), p.y())?,
            OutputFormat::Human => writeln!(out, "{kind} {p}")?,
        }
    }
    Ok(())
}

fn cmd_pell(
    g: &GlobalArgs,
    fib_conic: Option<i64>,
    d: Option<&BigInt>,
    n: Option<&BigInt>,
    y_bound: &BigUint,
    out: &mut impl Write,
) -> Result<u8, CliError> {
    if g.format == OutputFormat::Csv {
        writeln!(out, "kind,x,y")?;
    }
    if let Some(rhs) = fib_conic {
        let sign = FibConicSign::from_rhs(rhs)
            .ok_or_else(|| CliError::Usage(format!("--fib-conic takes -4 or 4, not {rhs}")))?;
        write_points(out, g.format, "point", &solve_fib_conic(sign, y_bound))?;
        return Ok(EXIT_OK);
    }
    let (Some(d), Some(n)) = (d, n) else {
        return Err(CliError::Usage("pell needs --fib-conic or both --D and --N".into()));
    };
    let spec = ConicSpec::from_discriminant(d.clone(), n.clone())?;
    let reps = orbit_reps(&spec)?;
    write_points(out, g.format, "rep", &reps.reps)?;
    write_points(out, g.format, "point", &reps.points_up_to(y_bound))?;
    Ok(EXIT_OK)
}

fn cmd_sigma2(g: &GlobalArgs, n: u64, out: &mut impl Write) -> Result<u8, CliError> {
    let f = arith::factor(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let s = f.sigma2();
    match g.format {
        OutputFormat::JsonLines => {
            writeln!(out, "{}", json!({"n": n.to_string(), "sigma2": s.to_string(), "factorization": f.factors()}))?
        }
        OutputFormat::Csv => writeln!(out, "n,sigma2,factorization\n{n},{s},{f}")?,
        OutputFormat::Human => writeln!(out, "sigma2({n}) = {s}\n{n} = {f}")?,
    }
    Ok(EXIT_OK)
}

fn status_text(status: &EntryStatus) -> String {
    match status {
        EntryStatus::Verified => "verified".into(),
        EntryStatus::NotInCatalog { index } => format!("index {index} not in catalog; rerun with a complete catalog or --recheck on a catalog listing it"),
        EntryStatus::NotPrime { index } => format!("index {index} failed the primality test"),
        EntryStatus::IdentityFails => "pair identity fails".into(),
        EntryStatus::NotGenerated => "not produced by generation".into(),
    }
}

fn write_table_report(out: &mut impl Write, format: OutputFormat, report: &TableReport) -> Result<(), CliError> {
    match format {
        OutputFormat::JsonLines => {
            for e in &report.entries {
                let line = json!({
                    "family": e.kind.to_string(),
                    "entry": e.form.to_string(),
                    "digits": e.digits,
                    "status": status_text(&e.status),
                    "ok": e.status == EntryStatus::Verified,
                });
                writeln!(out, "{line}")?;
            }
            for (kind, r) in &report.unlisted {
                writeln!(out, "{}", json!({"family": kind.to_string(), "unlisted": io::record_json(r)}))?;
            }
            for d in &report.digits {
                writeln!(out, "{}", json!({"digits_of": d.form.to_string(), "expected": d.expected, "actual": d.actual, "ok": d.ok()}))?;
            }
            writeln!(out, "{}", json!({"summary": true, "ok": report.ok(), "rechecked": report.rechecked}))?;
        }
        OutputFormat::Csv => {
            writeln!(out, "family,entry,digits,status")?;
            for e in &report.entries {
                writeln!(out, "{},{},{},{}", e.kind, e.form, e.digits, status_text(&e.status))?;
            }
        }
        OutputFormat::Human => {
            for e in &report.entries {
                writeln!(out, "{:<14} {:<16} {:>5} digits  {}", e.kind.to_string(), e.form.to_string(), e.digits, status_text(&e.status))?;
            }
            for (kind, r) in &report.unlisted {
                writeln!(out, "{kind}: generated but not listed: {}", io::human_line(r))?;
            }
            for d in &report.digits {
                let mark = if d.ok() { "ok" } else { "MISMATCH" };
                writeln!(out, "{} has {} digits (expected {}) {mark}", d.form, d.actual, d.expected)?;
            }
            let mode = if report.rechecked { "primality rechecked" } else { "catalog trusted above index 1000" };
            writeln!(out, "{} ({mode})", if report.ok() { "all tables verified" } else { "DISCREPANCIES FOUND" })?;
        }
    }
    Ok(())
}

fn cmd_verify_tables(g: &GlobalArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let catalog = load_catalog(g)?;
    let policy = PrimalityPolicy::with_rounds(g.rounds);
    let report = families::verify_tables(&catalog, g.recheck, &policy)?;
    write_table_report(out, g.format, &report)?;
    Ok(if report.ok() { EXIT_OK } else { EXIT_DISCREPANCY })
}
