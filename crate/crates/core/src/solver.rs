//! The equation `σ₂(n) − n² = A·n + B`.
//!
//! For `(A, B) = (0, 1)` the solutions are the primes and for `(1, 1)` the
//! prime squares. Every other pair has, beyond `(|A| + |B|)³`, only solutions
//! `n = p·q` with primes `p < q` on the conic `p² + q² + (1 − B) = A·p·q`.
//! [`solve`] combines an exhaustive sieve sweep below that bound (capped by
//! the caller) with an enumeration of the prime pairs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{self, primes_below, sieving_primes, sigma2_segment, ArithError, Factorization, SieveConfig, WORD_LIMIT};
use crate::pell::{orbit_reps, ConicSpec, PellError};
use crate::primality::{is_prime, is_prime_u64, PrimalityPolicy, SeqKind};
use crate::seq::Index;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Pell(#[from] PellError),
    #[error(
        "sweeping ({completed}, {upto}] covers {span} integers, more than the budget of {budget} per run; \
         run it as {passes} resumable passes of at most {budget} integers each"
    )]
    BudgetExceeded { completed: u64, upto: u64, span: u64, budget: u64, passes: u64 },
    #[error("prime scan up to {limit} exceeds the budget of {budget}")]
    ScanBudgetExceeded { limit: BigUint, budget: u64 },
    #[error("{0} has infinitely many solutions of a known shape; an exhaustive sweep is meaningless")]
    NotGeneral(Classification),
    #[error("{0} is not prime")]
    Composite(BigUint),
    #[error("prime pair needs distinct primes, got {0} twice")]
    NotDistinct(BigUint),
    #[error("{0} is too large for a direct σ₂ evaluation (limit 2^63)")]
    TooLarge(BigUint),
}

/// The pair `(A, B)` of `σ₂(n) − n² = A·n + B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquationSpec {
    pub a: BigInt,
    pub b: BigInt,
}

impl EquationSpec {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        EquationSpec { a: a.into(), b: b.into() }
    }

    /// `(|A| + |B|)³`.
    pub fn theoretical_bound(&self) -> BigUint {
        let s = self.a.magnitude() + self.b.magnitude();
        &s * &s * &s
    }

    /// Exact check of `σ₂(n) − n² = A·n + B` given `σ₂(n)`.
    pub fn holds_with_sigma2(&self, n: u64, sigma2: u128) -> bool {
        let n2 = (n as u128) * (n as u128);
        let Some(lhs) = sigma2.checked_sub(n2) else {
            return false;
        };
        if let (Some(a), Some(b)) = (self.a.to_i128(), self.b.to_i128()) {
            if let Some(rhs) = a.checked_mul(n as i128).and_then(|an| an.checked_add(b)) {
                return rhs >= 0 && lhs == rhs as u128;
            }
        }
        BigInt::from(lhs) == &self.a * BigInt::from(n) + &self.b
    }

    /// `p² + q² + (1 − B) = A·p·q`, equivalent to the equation at `n = pq`
    /// for distinct primes `p`, `q`.
    pub fn pair_identity_holds(&self, p: &BigUint, q: &BigUint) -> bool {
        let p = BigInt::from(p.clone());
        let q = BigInt::from(q.clone());
        &p * &p + &q * &q + (BigInt::one() - &self.b) == &self.a * &p * &q
    }

    pub fn conic(&self) -> ConicSpec {
        ConicSpec::for_equation(&self.a, &self.b)
    }
}

impl fmt::Display for EquationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma2(n) - n^2 = {}n", self.a)?;
        if self.b.is_negative() {
            write!(f, " - {}", self.b.magnitude())
        } else {
            write!(f, " + {}", self.b)
        }
    }
}

/// Shape of the pair conic `p² + q² − A·p·q = B − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConicKind {
    /// `A ≤ 1`: finitely many pairs.
    Elliptic,
    /// `A = 2`: `(q − p)² = B − 1`.
    DegenerateA2,
    /// `A ≥ 3`: `x² − (A² − 4)q² = 4(B − 1)` with `x = 2p − A·q`.
    Hyperbolic(ConicSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    AllPrimes,
    PrimeSquares,
    General { theoretical_bound: BigUint, conic: ConicKind },
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::AllPrimes => f.write_str("(A, B) = (0, 1): every prime"),
            Classification::PrimeSquares => f.write_str("(A, B) = (1, 1): every prime square"),
            Classification::General { theoretical_bound, conic } => {
                let kind = match conic {
                    ConicKind::Elliptic => "elliptic".to_string(),
                    ConicKind::DegenerateA2 => "degenerate (A = 2)".to_string(),
                    ConicKind::Hyperbolic(c) => format!("hyperbolic, {c}"),
                };
                write!(f, "general, exceptional bound {theoretical_bound}, {kind}")
            }
        }
    }
}

pub fn classify(spec: &EquationSpec) -> Classification {
    let one = BigInt::one();
    if spec.b == one {
        if spec.a.is_zero() {
            return Classification::AllPrimes;
        }
        if spec.a == one {
            return Classification::PrimeSquares;
        }
    }
    let conic = if spec.a <= one {
        ConicKind::Elliptic
    } else if spec.a == BigInt::from(2) {
        ConicKind::DegenerateA2
    } else {
        ConicKind::Hyperbolic(spec.conic())
    };
    Classification::General { theoretical_bound: spec.theoretical_bound(), conic }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionForm {
    Prime(BigUint),
    PrimeSquare(BigUint),
    /// `p < q`.
    PrimePair(BigUint, BigUint),
    Exceptional(Factorization),
}

impl SolutionForm {
    pub fn name(&self) -> &'static str {
        match self {
            SolutionForm::Prime(_) => "prime",
            SolutionForm::PrimeSquare(_) => "prime-square",
            SolutionForm::PrimePair(..) => "prime-pair",
            SolutionForm::Exceptional(_) => "exceptional",
        }
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(self, SolutionForm::Exceptional(_))
    }

    /// Shape of a word-size solution from its factorization.
    pub fn from_factorization(f: Factorization) -> Self {
        match f.factors() {
            [(p, 1)] => SolutionForm::Prime(BigUint::from(*p)),
            [(p, 2)] => SolutionForm::PrimeSquare(BigUint::from(*p)),
            [(p, 1), (q, 1)] => SolutionForm::PrimePair(BigUint::from(*p), BigUint::from(*q)),
            _ => SolutionForm::Exceptional(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Sieve,
    Conic,
    ClosedForm,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Sieve => "sieve",
            Provenance::Conic => "conic",
            Provenance::ClosedForm => "closed-form",
        }
    }
}

/// `n = S(i)·S(j)` for a Fibonacci or Lucas product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClosedForm {
    pub seq: SeqKind,
    pub i: Index,
    pub j: Index,
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.seq {
            SeqKind::Fib => 'F',
            SeqKind::Lucas => 'L',
        };
        write!(f, "{letter}_{} · {letter}_{}", self.i, self.j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionRecord {
    pub n: BigUint,
    pub form: SolutionForm,
    pub verified: bool,
    pub provenance: Provenance,
    pub closed_form: Option<ClosedForm>,
    pub note: Option<String>,
}

impl SolutionRecord {
    pub fn pair(p: BigUint, q: BigUint, provenance: Provenance) -> Self {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        SolutionRecord {
            n: &p * &q,
            form: SolutionForm::PrimePair(p, q),
            verified: false,
            provenance,
            closed_form: None,
            note: None,
        }
    }

    /// Re-checks the equation by the route appropriate to the record's form.
    pub fn recheck(&self, spec: &EquationSpec) -> bool {
        if let SolutionForm::PrimePair(p, q) = &self.form {
            if p != q && (p * q) == self.n && spec.pair_identity_holds(p, q) {
                return true;
            }
        }
        match self.n.to_u64() {
            Some(n) if (1..WORD_LIMIT).contains(&n) => {
                arith::sigma2(n).map(|s| spec.holds_with_sigma2(n, s)).unwrap_or(false)
            }
            _ => false,
        }
    }
}

/// Limits and knobs shared by the solver entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub sieve: SieveConfig,
    /// Largest number of integers one exhaustive sweep may cover.
    pub sweep_budget: u64,
    /// Largest prime-scan limit for the elliptic and `A = 2` paths.
    pub scan_budget: u64,
    pub policy: PrimalityPolicy,
    /// Worker threads for sweeps; `None` uses all available.
    pub threads: Option<usize>,
}

impl SolverConfig {
    pub const DEFAULT_SWEEP_BUDGET: u64 = 1 << 32;
    pub const DEFAULT_SCAN_BUDGET: u64 = 200_000_000;
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            sieve: SieveConfig::default(),
            sweep_budget: Self::DEFAULT_SWEEP_BUDGET,
            scan_budget: Self::DEFAULT_SCAN_BUDGET,
            policy: PrimalityPolicy::default(),
            threads: None,
        }
    }
}

fn run_in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        },
        None => job(),
    }
}

/// Every `n` in `[lo, hi]` solving the equation, by sieve alone.
///
/// No classification guard: this is the brute-force reference the other
/// paths are compared against.
pub fn sweep(spec: &EquationSpec, lo: u64, hi: u64, config: &SolverConfig) -> Result<Vec<u64>, SolverError> {
    let mut found = Vec::new();
    sweep_segments(spec, lo, hi, config, |_, hits| {
        found.extend_from_slice(hits);
    })?;
    Ok(found)
}

/// Drives the sieve over `[lo, hi]` in segment batches, reporting the hits
/// of each batch in order together with the last integer covered.
fn sweep_segments(
    spec: &EquationSpec,
    lo: u64,
    hi: u64,
    config: &SolverConfig,
    mut on_batch: impl FnMut(u64, &[u64]),
) -> Result<(), SolverError> {
    if lo > hi {
        return Ok(());
    }
    if lo == 0 || hi >= WORD_LIMIT {
        return Err(ArithError::OutOfRange(if lo == 0 { 0 } else { hi }).into());
    }
    let span = hi - lo + 1;
    if span > config.sieve.max_span {
        return Err(ArithError::BudgetExceeded {
            lo,
            hi,
            span,
            budget: config.sieve.max_span,
            segments: span.div_ceil(config.sieve.max_span),
        }
        .into());
    }
    let primes = sieving_primes(hi);
    let seg = config.sieve.segment_size.max(1) as u64;
    let workers = config.threads.unwrap_or_else(rayon::current_num_threads).max(1) as u64;
    let mut start = lo;
    while start <= hi {
        let segments: Vec<(u64, u64)> = (0..workers)
            .map_while(|k| {
                let s = start.checked_add(k * seg)?;
                (s <= hi).then(|| (s, s.saturating_add(seg - 1).min(hi)))
            })
            .collect();
        let batch_end = segments.last().map(|&(_, e)| e).unwrap_or(hi);
        let hits: Vec<Vec<u64>> = run_in_pool(config.threads, || {
            segments
                .par_iter()
                .map(|&(s, e)| {
                    sigma2_segment(s, e, &primes)
                        .into_iter()
                        .zip(s..=e)
                        .filter(|&(sigma, n)| spec.holds_with_sigma2(n, sigma))
                        .map(|(_, n)| n)
                        .collect()
                })
                .collect()
        });
        let flat: Vec<u64> = hits.into_iter().flatten().collect();
        on_batch(batch_end, &flat);
        match batch_end.checked_add(1) {
            Some(next) => start = next,
            None => break,
        }
    }
    Ok(())
}

/// Record for a sweep hit, with the form taken from its factorization and
/// the equation re-verified through that factorization.
pub fn sieve_record(spec: &EquationSpec, n: u64) -> Result<SolutionRecord, SolverError> {
    let f = arith::factor(n)?;
    let verified = spec.holds_with_sigma2(n, f.sigma2());
    Ok(SolutionRecord {
        n: BigUint::from(n),
        form: SolutionForm::from_factorization(f),
        verified,
        provenance: Provenance::Sieve,
        closed_form: None,
        note: None,
    })
}

/// State of an exhaustive sweep: everything in `[1, completed_upto]` is done.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SweepProgress {
    pub completed_upto: u64,
    pub found: Vec<SolutionRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub records: Vec<SolutionRecord>,
    pub searched_upto: u64,
    pub theoretical_bound: BigUint,
    /// The sweep reached the theoretical bound.
    pub complete: bool,
}

impl SweepReport {
    pub fn exceptional(&self) -> impl Iterator<Item = &SolutionRecord> {
        self.records.iter().filter(|r| r.form.is_exceptional())
    }
}

/// Sweep target: `min(cap, (|A| + |B|)³)`.
pub fn sweep_limit(spec: &EquationSpec, cap: u64) -> u64 {
    match spec.theoretical_bound().to_u64() {
        Some(b) => b.min(cap),
        None => cap,
    }
}

/// Exhaustive search below `min(cap, (|A| + |B|)³)`.
pub fn exceptional_search(spec: &EquationSpec, cap: u64, config: &SolverConfig) -> Result<SweepReport, SolverError> {
    exceptional_search_resumable(spec, cap, config, SweepProgress::default(), |_| {})
}

/// [`exceptional_search`] starting from `progress`, calling `on_progress`
/// after every batch of segments.
pub fn exceptional_search_resumable(
    spec: &EquationSpec,
    cap: u64,
    config: &SolverConfig,
    mut progress: SweepProgress,
    mut on_progress: impl FnMut(&SweepProgress),
) -> Result<SweepReport, SolverError> {
    let class = classify(spec);
    if !matches!(class, Classification::General { .. }) {
        return Err(SolverError::NotGeneral(class));
    }
    let bound = spec.theoretical_bound();
    let upto = sweep_limit(spec, cap).min(WORD_LIMIT - 1);
    if progress.completed_upto < upto {
        let span = upto - progress.completed_upto;
        if span > config.sweep_budget {
            return Err(SolverError::BudgetExceeded {
                completed: progress.completed_upto,
                upto,
                span,
                budget: config.sweep_budget,
                passes: span.div_ceil(config.sweep_budget),
            });
        }
        let mut failure = None;
        // sieve calls are bounded by max_span; chain them when the budget is larger
        let chunk = config.sieve.max_span.max(1);
        while progress.completed_upto < upto && failure.is_none() {
            let lo = progress.completed_upto + 1;
            let hi = lo.saturating_add(chunk - 1).min(upto);
            sweep_segments(spec, lo, hi, config, |done, hits| {
                if failure.is_some() {
                    return;
                }
                for &n in hits {
                    match sieve_record(spec, n) {
                        Ok(r) => progress.found.push(r),
                        Err(e) => failure = Some(e),
                    }
                }
                progress.completed_upto = done;
                on_progress(&progress);
            })?;
        }
        if let Some(e) = failure {
            return Err(e);
        }
    }
    let mut records: Vec<SolutionRecord> = progress.found.into_iter().filter(|r| r.n <= BigUint::from(upto)).collect();
    records.sort_by(|a, b| a.n.cmp(&b.n));
    records.dedup_by(|a, b| a.n == b.n);
    Ok(SweepReport {
        records,
        searched_upto: upto,
        complete: BigUint::from(upto) >= bound,
        theoretical_bound: bound,
    })
}

fn scan_limit(limit: &BigUint, config: &SolverConfig) -> Result<u64, SolverError> {
    match limit.to_u64() {
        Some(v) if v <= config.scan_budget => Ok(v),
        _ => Err(SolverError::ScanBudgetExceeded { limit: limit.clone(), budget: config.scan_budget }),
    }
}

fn prime_table(limit: u64) -> Vec<bool> {
    let mut table = vec![false; limit as usize + 1];
    for p in primes_below(limit + 1) {
        table[p as usize] = true;
    }
    table
}

/// Prime pairs `p < q ≤ q_bound` with `p² + q² + (1 − B) = A·p·q`.
pub fn pq_solutions(spec: &EquationSpec, q_bound: &BigUint, config: &SolverConfig) -> Result<Vec<SolutionRecord>, SolverError> {
    let class = classify(spec);
    let conic = match class {
        Classification::General { conic, .. } => conic,
        other => return Err(SolverError::NotGeneral(other)),
    };
    let mut pairs: BTreeMap<BigUint, SolutionRecord> = BTreeMap::new();
    let mut add = |p: BigUint, q: BigUint| {
        let mut r = SolutionRecord::pair(p, q, Provenance::Conic);
        if let SolutionForm::PrimePair(p, q) = &r.form {
            r.verified = spec.pair_identity_holds(p, q);
        }
        pairs.entry(r.n.clone()).or_insert(r);
    };
    let b_minus_1: BigInt = &spec.b - 1;
    match conic {
        ConicKind::Elliptic => {
            if b_minus_1.is_positive() {
                // p² + q² − A·p·q ≥ q²·c with c = 1 for A ≤ 0 and c = 1/2 for A = 1
                let reach = if spec.a.is_positive() { &b_minus_1 * 2 } else { b_minus_1.clone() };
                let q_max = reach.magnitude().sqrt().min(q_bound.clone());
                let q_max = scan_limit(&q_max, config)?;
                for q in primes_below(q_max + 1) {
                    let qb = BigInt::from(q);
                    // p² − A·q·p + (q² − (B − 1)) = 0
                    let aq = &spec.a * &qb;
                    let disc: BigInt = &aq * &aq - (&qb * &qb - &b_minus_1) * 4;
                    if disc.is_negative() {
                        continue;
                    }
                    let root = disc.sqrt();
                    if &root * &root != disc {
                        continue;
                    }
                    for twice_p in [&aq + &root, &aq - &root] {
                        if twice_p.is_odd() || twice_p.sign() != Sign::Plus {
                            continue;
                        }
                        let p = (twice_p >> 1u32).to_u64();
                        if let Some(p) = p {
                            if p >= 2 && p < q && is_prime_u64(p) {
                                add(BigUint::from(p), BigUint::from(q));
                            }
                        }
                    }
                }
            }
        }
        ConicKind::DegenerateA2 => {
            if b_minus_1.is_positive() {
                let gap = b_minus_1.sqrt();
                if &gap * &gap == b_minus_1 {
                    let gap = gap.to_biguint().expect("positive");
                    if &gap < q_bound {
                        let limit = scan_limit(q_bound, config)?;
                        let gap = gap.to_u64().expect("gap below q_bound");
                        let table = prime_table(limit);
                        for p in 2..=(limit - gap) {
                            if table[p as usize] && table[(p + gap) as usize] {
                                add(BigUint::from(p), BigUint::from(p + gap));
                            }
                        }
                    }
                }
            }
        }
        ConicKind::Hyperbolic(conic) => {
            if !conic.n().is_zero() {
                let reps = orbit_reps(&conic)?;
                let a = &spec.a;
                for point in reps.points_up_to(q_bound) {
                    let q = point.y();
                    if q < &BigUint::from(2u32) {
                        continue;
                    }
                    let twice_p = point.x() + a * BigInt::from(q.clone());
                    if twice_p.is_odd() || twice_p.sign() != Sign::Plus {
                        continue;
                    }
                    let p = (twice_p >> 1u32).to_biguint().expect("positive");
                    if p < BigUint::from(2u32) || &p == q || &p > q_bound {
                        continue;
                    }
                    if is_prime(q, &config.policy).is_prime_like() && is_prime(&p, &config.policy).is_prime_like() {
                        add(p, q.clone());
                    }
                }
            }
        }
    }
    Ok(pairs.into_values().collect())
}

/// Input to [`verify_solution`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Candidate {
    Single(BigUint),
    Pair(BigUint, BigUint),
}

/// Exact truth of the equation at a candidate. Pairs are checked through
/// the pair identity (any size) after both members pass the primality test.
pub fn verify_solution(candidate: &Candidate, spec: &EquationSpec, policy: &PrimalityPolicy) -> Result<bool, SolverError> {
    match candidate {
        Candidate::Single(n) => {
            let word = n.to_u64().filter(|&v| (1..WORD_LIMIT).contains(&v)).ok_or_else(|| SolverError::TooLarge(n.clone()))?;
            Ok(spec.holds_with_sigma2(word, arith::sigma2(word)?))
        }
        Candidate::Pair(p, q) => {
            for v in [p, q] {
                if !is_prime(v, policy).is_prime_like() {
                    return Err(SolverError::Composite(v.clone()));
                }
            }
            if p == q {
                return Err(SolverError::NotDistinct(p.clone()));
            }
            Ok(spec.pair_identity_holds(p, q))
        }
    }
}

/// Pair identity check when primality is vouched for elsewhere (e.g. a catalog).
pub fn verify_pair_trusted(p: &BigUint, q: &BigUint, spec: &EquationSpec) -> bool {
    p != q && spec.pair_identity_holds(p, q)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymbolicAnswer {
    AllPrimes,
    AllPrimeSquares,
}

impl fmt::Display for SymbolicAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolicAnswer::AllPrimes => "all primes",
            SymbolicAnswer::AllPrimeSquares => "all prime squares",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub spec: EquationSpec,
    pub classification: Classification,
    pub symbolic: Option<SymbolicAnswer>,
    pub records: Vec<SolutionRecord>,
    /// Last integer covered by the exhaustive sweep (0 when none ran).
    pub searched_upto: u64,
    pub q_bound: BigUint,
    /// The sweep reached `(|A| + |B|)³`.
    pub complete: bool,
}

impl SolveReport {
    /// Integers in `(searched_upto, bound]` that were not swept, if any.
    pub fn residual(&self) -> Option<(BigUint, BigUint)> {
        match &self.classification {
            Classification::General { theoretical_bound, .. } if !self.complete => {
                Some((BigUint::from(self.searched_upto) + 1u32, theoretical_bound.clone()))
            }
            _ => None,
        }
    }
}

pub fn solve(spec: &EquationSpec, cap: u64, q_bound: &BigUint, config: &SolverConfig) -> Result<SolveReport, SolverError> {
    solve_resumable(spec, cap, q_bound, config, SweepProgress::default(), |_| {})
}

/// [`solve`] whose sweep continues from `progress`.
pub fn solve_resumable(
    spec: &EquationSpec,
    cap: u64,
    q_bound: &BigUint,
    config: &SolverConfig,
    progress: SweepProgress,
    on_progress: impl FnMut(&SweepProgress),
) -> Result<SolveReport, SolverError> {
    let classification = classify(spec);
    let base = SolveReport {
        spec: spec.clone(),
        classification: classification.clone(),
        symbolic: None,
        records: Vec::new(),
        searched_upto: 0,
        q_bound: q_bound.clone(),
        complete: true,
    };
    match classification {
        Classification::AllPrimes => Ok(SolveReport { symbolic: Some(SymbolicAnswer::AllPrimes), ..base }),
        Classification::PrimeSquares => {
            let four = SolutionRecord {
                n: BigUint::from(4u32),
                form: SolutionForm::PrimeSquare(BigUint::from(2u32)),
                verified: spec.holds_with_sigma2(4, 21),
                provenance: Provenance::Sieve,
                closed_form: None,
                note: Some("only solution with n <= 8".to_string()),
            };
            Ok(SolveReport { symbolic: Some(SymbolicAnswer::AllPrimeSquares), records: vec![four], ..base })
        }
        Classification::General { .. } => {
            let sweep = exceptional_search_resumable(spec, cap, config, progress, on_progress)?;
            let pairs = pq_solutions(spec, q_bound, config)?;
            let mut merged: BTreeMap<BigUint, SolutionRecord> = BTreeMap::new();
            for r in sweep.records {
                merged.insert(r.n.clone(), r);
            }
            for r in pairs {
                merged.entry(r.n.clone()).or_insert(r);
            }
            Ok(SolveReport {
                records: merged.into_values().collect(),
                searched_upto: sweep.searched_upto,
                complete: sweep.complete,
                ..base
            })
        }
    }
}
