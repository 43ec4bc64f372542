//! Closed-form solution families.
//!
//! Four one-parameter families of `(A, B)` whose prime-pair solutions are
//! products of Fibonacci primes, of Lucas primes, or of primes a fixed even
//! gap apart. Primality of Fibonacci and Lucas members comes from a
//! [`PrimeCatalog`], optionally re-tested.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::primes_below;
use crate::primality::{is_prime, PrimalityPolicy, PrimeCatalog, SeqKind};
use crate::seq::{fib, lucas, Index};
use crate::solver::{
    exceptional_search, verify_pair_trusted, ClosedForm, EquationSpec, Provenance, SolutionRecord, SolverConfig,
    SolverError, SweepReport,
};

/// Indices at or below this are always re-tested, whatever the caller asks.
pub const ALWAYS_RECHECK_BELOW: Index = 1000;

/// Largest Polignac prime bound accepted by [`generate`].
pub const POLIGNAC_SCAN_LIMIT: u64 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("m must be a positive integer")]
    ZeroM,
    #[error("gap k must be positive")]
    ZeroGap,
    #[error("gap k = {0} is odd; for odd k the equation has only finitely many solutions, so there is no family")]
    OddGap(u64),
    #[error("unknown family {0:?}; expected fib, lucas+, lucas- or polignac")]
    UnknownFamily(String),
    #[error("prime bound {0} exceeds the scan limit {POLIGNAC_SCAN_LIMIT}")]
    BoundTooLarge(u64),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `A = L(2m)`, `B = −(F(2m)² − 1)`.
    FibMinus { m: Index },
    /// `A = L(2m)`, `B = L(2m)² − 3`.
    LucasPlus { m: Index },
    /// `A = L(2m)`, `B = −(L(2m)² − 5)`.
    LucasMinus { m: Index },
    /// `A = 2`, `B = k² + 1` with `k` even.
    Polignac { k: u64 },
}

/// Family names as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyName {
    Fib,
    LucasPlus,
    LucasMinus,
    Polignac,
}

impl FromStr for FamilyName {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fib" => Ok(FamilyName::Fib),
            "lucas+" => Ok(FamilyName::LucasPlus),
            "lucas-" | "lucas−" => Ok(FamilyName::LucasMinus),
            "polignac" => Ok(FamilyName::Polignac),
            other => Err(FamilyError::UnknownFamily(other.to_string())),
        }
    }
}

impl FamilyName {
    pub fn with_parameter(self, value: u64) -> FamilyKind {
        match self {
            FamilyName::Fib => FamilyKind::FibMinus { m: value },
            FamilyName::LucasPlus => FamilyKind::LucasPlus { m: value },
            FamilyName::LucasMinus => FamilyKind::LucasMinus { m: value },
            FamilyName::Polignac => FamilyKind::Polignac { k: value },
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::FibMinus { m } => write!(f, "fib m={m}"),
            FamilyKind::LucasPlus { m } => write!(f, "lucas+ m={m}"),
            FamilyKind::LucasMinus { m } => write!(f, "lucas- m={m}"),
            FamilyKind::Polignac { k } => write!(f, "polignac k={k}"),
        }
    }
}

impl FamilyKind {
    fn seq(self) -> Option<SeqKind> {
        match self {
            FamilyKind::FibMinus { .. } => Some(SeqKind::Fib),
            FamilyKind::LucasPlus { .. } | FamilyKind::LucasMinus { .. } => Some(SeqKind::Lucas),
            FamilyKind::Polignac { .. } => None,
        }
    }

    fn validate(self) -> Result<(), FamilyError> {
        match self {
            FamilyKind::FibMinus { m } | FamilyKind::LucasPlus { m } | FamilyKind::LucasMinus { m } if m == 0 => {
                Err(FamilyError::ZeroM)
            }
            FamilyKind::Polignac { k: 0 } => Err(FamilyError::ZeroGap),
            FamilyKind::Polignac { k } if k % 2 == 1 => Err(FamilyError::OddGap(k)),
            _ => Ok(()),
        }
    }
}

pub fn family_spec(kind: FamilyKind) -> Result<EquationSpec, FamilyError> {
    kind.validate()?;
    let spec = match kind {
        FamilyKind::FibMinus { m } => {
            let f = BigInt::from(fib(2 * m));
            EquationSpec::new(lucas(2 * m), -(&f * &f - 1i32))
        }
        FamilyKind::LucasPlus { m } => {
            let l = BigInt::from(lucas(2 * m));
            EquationSpec::new(l.clone(), &l * &l - 3i32)
        }
        FamilyKind::LucasMinus { m } => {
            let l = BigInt::from(lucas(2 * m));
            EquationSpec::new(l.clone(), -(&l * &l - 5i32))
        }
        FamilyKind::Polignac { k } => {
            let k = BigInt::from(k);
            EquationSpec::new(2, &k * &k + 1i32)
        }
    };
    Ok(spec)
}

/// Index pairs `(i, j)` named by the family's closed forms with both indices
/// at most `bound`, before any primality filter.
pub fn index_pairs(kind: FamilyKind, bound: Index) -> Vec<(Index, Index)> {
    let mut out = BTreeSet::new();
    let mut push = |i: Index, j: Index| {
        if i != j && i.max(j) <= bound {
            out.insert((i.min(j), i.max(j)));
        }
    };
    match kind {
        FamilyKind::FibMinus { m } => {
            // (F(2k+1), F(2k+2m+1)) for k >= 0
            for i in (1..=bound.saturating_sub(2 * m)).step_by(2) {
                push(i, i + 2 * m);
            }
            // (F(2k+1), F(2m-2k-1)) for 0 <= k < m, 2k != m - 1
            for k in 0..m {
                if 2 * k + 1 != m {
                    push(2 * k + 1, 2 * m - 2 * k - 1);
                }
            }
        }
        FamilyKind::LucasPlus { m } => {
            // (L(2k-1), L(2k+2m-1)) for k >= 1
            for i in (1..=bound.saturating_sub(2 * m)).step_by(2) {
                push(i, i + 2 * m);
            }
        }
        FamilyKind::LucasMinus { m } => {
            // (L(2k), L(2k+2m)) for k >= 0
            for i in (0..=bound.saturating_sub(2 * m)).step_by(2) {
                push(i, i + 2 * m);
            }
            // (L(2k), L(2m-2k)) for 0 <= k <= m, 2k != m
            for k in 0..=m {
                if 2 * k != m {
                    push(2 * k, 2 * m - 2 * k);
                }
            }
        }
        FamilyKind::Polignac { .. } => {}
    }
    out.into_iter().collect()
}

fn seq_value(kind: SeqKind, i: Index) -> BigUint {
    match kind {
        SeqKind::Fib => fib(i),
        SeqKind::Lucas => lucas(i),
    }
}

/// Catalog membership, re-tested when `recheck` is set or the index is small.
fn member(kind: SeqKind, i: Index, catalog: &PrimeCatalog, recheck: bool, policy: &PrimalityPolicy) -> bool {
    if !catalog.contains(kind, i) {
        return false;
    }
    if recheck || i <= ALWAYS_RECHECK_BELOW {
        is_prime(&seq_value(kind, i), policy).is_prime_like()
    } else {
        true
    }
}

fn closed_form_record(spec: &EquationSpec, seq: SeqKind, i: Index, j: Index) -> SolutionRecord {
    let (a, b) = (seq_value(seq, i), seq_value(seq, j));
    let (i, j) = if a <= b { (i, j) } else { (j, i) };
    let mut r = SolutionRecord::pair(a, b, Provenance::ClosedForm);
    if let crate::solver::SolutionForm::PrimePair(p, q) = &r.form {
        r.verified = verify_pair_trusted(p, q, spec);
    }
    r.closed_form = Some(ClosedForm { seq, i, j });
    r
}

/// Family members with indices (or, for Polignac, smaller prime) at most
/// `index_bound`, sorted by `n`.
pub fn generate(
    kind: FamilyKind,
    index_bound: Index,
    catalog: &PrimeCatalog,
    recheck: bool,
    policy: &PrimalityPolicy,
) -> Result<Vec<SolutionRecord>, FamilyError> {
    let spec = family_spec(kind)?;
    let mut by_n: BTreeMap<BigUint, SolutionRecord> = BTreeMap::new();
    match (kind, kind.seq()) {
        (FamilyKind::Polignac { k }, _) => {
            let limit = index_bound.checked_add(k).filter(|&l| l <= POLIGNAC_SCAN_LIMIT);
            let limit = limit.ok_or(FamilyError::BoundTooLarge(index_bound))?;
            let primes = primes_below(limit + 1);
            let set: BTreeSet<u64> = primes.iter().copied().collect();
            for &p in primes.iter().take_while(|&&p| p <= index_bound) {
                if set.contains(&(p + k)) {
                    let mut r = SolutionRecord::pair(BigUint::from(p), BigUint::from(p + k), Provenance::ClosedForm);
                    r.verified = spec.pair_identity_holds(&BigUint::from(p), &BigUint::from(p + k));
                    by_n.insert(r.n.clone(), r);
                }
            }
        }
        (_, Some(seq)) => {
            let candidates: Vec<(Index, Index)> = index_pairs(kind, index_bound)
                .into_iter()
                .filter(|&(i, j)| catalog.contains(seq, i) && catalog.contains(seq, j))
                .collect();
            let records: Vec<SolutionRecord> = candidates
                .par_iter()
                .filter(|&&(i, j)| member(seq, i, catalog, recheck, policy) && member(seq, j, catalog, recheck, policy))
                .map(|&(i, j)| closed_form_record(&spec, seq, i, j))
                .collect();
            for r in records {
                by_n.entry(r.n.clone()).or_insert(r);
            }
        }
        _ => unreachable!("every non-Polignac family has a sequence"),
    }
    Ok(by_n.into_values().collect())
}

/// One row of a published solution table: `S(i)·S(j)` for each listed pair.
#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub kind: FamilyKind,
    pub pairs: &'static [(Index, Index)],
}

pub const FIB_TABLE: [TableRow; 3] = [
    TableRow { kind: FamilyKind::FibMinus { m: 1 }, pairs: &[(3, 5), (5, 7), (11, 13), (431, 433), (569, 571)] },
    TableRow { kind: FamilyKind::FibMinus { m: 2 }, pairs: &[(3, 7), (7, 11), (13, 17), (43, 47)] },
    TableRow {
        kind: FamilyKind::FibMinus { m: 3 },
        pairs: &[(5, 11), (7, 13), (11, 17), (17, 23), (23, 29), (131, 137)],
    },
];

pub const LUCAS_TABLE: [TableRow; 3] = [
    TableRow { kind: FamilyKind::LucasPlus { m: 1 }, pairs: &[(5, 7), (11, 13), (17, 19)] },
    TableRow { kind: FamilyKind::LucasPlus { m: 2 }, pairs: &[(7, 11), (13, 17), (37, 41), (613, 617)] },
    TableRow {
        kind: FamilyKind::LucasPlus { m: 3 },
        pairs: &[(5, 11), (7, 13), (11, 17), (13, 19), (31, 37), (41, 47), (47, 53), (4787, 4793)],
    },
];

/// Index ranges the tables are complete for.
pub const FIB_TABLE_INDEX_BOUND: Index = 600;
pub const LUCAS_TABLE_INDEX_BOUND: Index = 4800;

/// Published decimal lengths of the largest table entries.
pub const DIGIT_CLAIMS: [(SeqKind, Index, Index, usize); 4] = [
    (SeqKind::Fib, 431, 433, 180),
    (SeqKind::Fib, 569, 571, 238),
    (SeqKind::Lucas, 613, 617, 258),
    (SeqKind::Lucas, 4787, 4793, 2003),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryStatus {
    Verified,
    /// A factor index is absent from the catalog.
    NotInCatalog { index: Index },
    /// A factor failed the primality re-test.
    NotPrime { index: Index },
    /// The pair identity does not hold.
    IdentityFails,
    /// The entry is fine but generation over the table range did not produce it.
    NotGenerated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntryReport {
    pub kind: FamilyKind,
    pub form: ClosedForm,
    pub digits: usize,
    pub status: EntryStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitCheck {
    pub form: ClosedForm,
    pub expected: usize,
    pub actual: usize,
}

impl DigitCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableReport {
    pub entries: Vec<TableEntryReport>,
    /// Generated members over a table's range that the table does not list.
    pub unlisted: Vec<(FamilyKind, SolutionRecord)>,
    pub digits: Vec<DigitCheck>,
    pub rechecked: bool,
}

impl TableReport {
    pub fn ok(&self) -> bool {
        self.entries.iter().all(|e| e.status == EntryStatus::Verified)
            && self.unlisted.is_empty()
            && self.digits.iter().all(DigitCheck::ok)
    }
}

fn decimal_digits(n: &BigUint) -> usize {
    n.to_str_radix(10).len()
}

/// Regenerates both published tables and checks every entry and digit count.
pub fn verify_tables(catalog: &PrimeCatalog, recheck: bool, policy: &PrimalityPolicy) -> Result<TableReport, FamilyError> {
    let mut report = TableReport { entries: Vec::new(), unlisted: Vec::new(), digits: Vec::new(), rechecked: recheck };
    let tables = [(SeqKind::Fib, &FIB_TABLE, FIB_TABLE_INDEX_BOUND), (SeqKind::Lucas, &LUCAS_TABLE, LUCAS_TABLE_INDEX_BOUND)];
    for (seq, rows, bound) in tables {
        for row in rows.iter() {
            let spec = family_spec(row.kind)?;
            let generated = generate(row.kind, bound, catalog, recheck, policy)?;
            let listed: BTreeSet<(Index, Index)> = row.pairs.iter().copied().collect();
            let produced: BTreeSet<(Index, Index)> =
                generated.iter().filter_map(|r| r.closed_form.map(|c| (c.i, c.j))).collect();
            let entries: Vec<TableEntryReport> = row
                .pairs
                .par_iter()
                .map(|&(i, j)| {
                    let (p, q) = (seq_value(seq, i), seq_value(seq, j));
                    let status = if let Some(&index) = [i, j].iter().find(|&&x| !catalog.contains(seq, x)) {
                        EntryStatus::NotInCatalog { index }
                    } else if let Some(&index) =
                        [i, j].iter().find(|&&x| !member(seq, x, catalog, recheck, policy))
                    {
                        EntryStatus::NotPrime { index }
                    } else if !verify_pair_trusted(&p, &q, &spec) {
                        EntryStatus::IdentityFails
                    } else if !produced.contains(&(i, j)) {
                        EntryStatus::NotGenerated
                    } else {
                        EntryStatus::Verified
                    };
                    TableEntryReport { kind: row.kind, form: ClosedForm { seq, i, j }, digits: decimal_digits(&(p * q)), status }
                })
                .collect();
            report.entries.extend(entries);
            for r in generated {
                if let Some(c) = r.closed_form {
                    if !listed.contains(&(c.i, c.j)) {
                        report.unlisted.push((row.kind, r));
                    }
                }
            }
        }
    }
    for (seq, i, j, expected) in DIGIT_CLAIMS {
        let actual = decimal_digits(&(seq_value(seq, i) * seq_value(seq, j)));
        report.digits.push(DigitCheck { form: ClosedForm { seq, i, j }, expected, actual });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub kind: FamilyKind,
    pub sweep: SweepReport,
    /// Sweep solutions the family's closed forms do not produce.
    pub unexplained: Vec<SolutionRecord>,
    /// Family members within the sweep range that the sweep missed.
    pub missed_by_sweep: Vec<SolutionRecord>,
}

impl CrossCheck {
    pub fn consistent(&self) -> bool {
        self.missed_by_sweep.is_empty()
    }
}

/// Smallest index whose sequence value exceeds `cap`.
fn index_beyond(seq: SeqKind, cap: u64) -> Index {
    let cap = BigUint::from(cap);
    (2..).find(|&i| seq_value(seq, i) > cap).expect("sequences are unbounded")
}

/// Exhaustive sweep of the family's equation up to `cap`, compared with the
/// family's closed forms over the same range.
pub fn cross_check_family(
    kind: FamilyKind,
    cap: u64,
    catalog: &PrimeCatalog,
    config: &SolverConfig,
) -> Result<CrossCheck, FamilyError> {
    let spec = family_spec(kind)?;
    let sweep = exceptional_search(&spec, cap, config)?;
    let bound = match kind {
        FamilyKind::Polignac { .. } => cap.isqrt(),
        other => {
            let seq = other.seq().expect("sequence family");
            // the smaller factor is at least 2, so the larger is at most cap / 2
            index_beyond(seq, cap / 2)
        }
    };
    let family = generate(kind, bound, catalog, false, &config.policy)?;
    let upto = BigUint::from(sweep.searched_upto);
    let family_ns: BTreeSet<&BigUint> = family.iter().map(|r| &r.n).collect();
    let sweep_ns: BTreeSet<&BigUint> = sweep.records.iter().map(|r| &r.n).collect();
    let unexplained = sweep.records.iter().filter(|r| !family_ns.contains(&r.n)).cloned().collect();
    let missed_by_sweep =
        family.iter().filter(|r| r.n <= upto && !sweep_ns.contains(&r.n)).cloned().collect();
    Ok(CrossCheck { kind, sweep, unexplained, missed_by_sweep })
}

/// Index of `value` in the sequence, if it is a member past the initial duplicates.
pub fn sequence_index(seq: SeqKind, value: &BigUint) -> Option<Index> {
    let v = value.to_u64();
    if v == Some(2) && seq == SeqKind::Lucas {
        return Some(0);
    }
    (1..).map(|i| (i, seq_value(seq, i))).take_while(|(_, s)| s <= value).find(|(_, s)| s == value).map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primality::SeqKind::{Fib, Lucas};

    fn ns(records: &[SolutionRecord]) -> Vec<BigUint> {
        records.iter().map(|r| r.n.clone()).collect()
    }

    fn products(seq: SeqKind, pairs: &[(Index, Index)]) -> Vec<BigUint> {
        let mut v: Vec<BigUint> = pairs.iter().map(|&(i, j)| seq_value(seq, i) * seq_value(seq, j)).collect();
        v.sort();
        v
    }

    #[test]
    fn specs_match_displayed_equations() {
        let s = |k| family_spec(k).unwrap();
        assert_eq!(s(FamilyKind::FibMinus { m: 1 }), EquationSpec::new(3, 0));
        assert_eq!(s(FamilyKind::FibMinus { m: 2 }), EquationSpec::new(7, -8));
        assert_eq!(s(FamilyKind::FibMinus { m: 3 }), EquationSpec::new(18, -63));
        assert_eq!(s(FamilyKind::FibMinus { m: 6 }), EquationSpec::new(322, -20735));
        assert_eq!(s(FamilyKind::LucasPlus { m: 1 }), EquationSpec::new(3, 6));
        assert_eq!(s(FamilyKind::LucasPlus { m: 2 }), EquationSpec::new(7, 46));
        assert_eq!(s(FamilyKind::LucasPlus { m: 3 }), EquationSpec::new(18, 321));
        assert_eq!(s(FamilyKind::LucasMinus { m: 1 }), EquationSpec::new(3, -4));
        assert_eq!(s(FamilyKind::Polignac { k: 2 }), EquationSpec::new(2, 5));
        assert_eq!(s(FamilyKind::Polignac { k: 4 }), EquationSpec::new(2, 17));
        assert_eq!(family_spec(FamilyKind::Polignac { k: 3 }), Err(FamilyError::OddGap(3)));
        assert_eq!(family_spec(FamilyKind::Polignac { k: 0 }), Err(FamilyError::ZeroGap));
        assert_eq!(family_spec(FamilyKind::FibMinus { m: 0 }), Err(FamilyError::ZeroM));
    }

    #[test]
    fn structural_identities() {
        for m in 1..=20u64 {
            let fm = family_spec(FamilyKind::FibMinus { m }).unwrap();
            let lp = family_spec(FamilyKind::LucasPlus { m }).unwrap();
            let lm = family_spec(FamilyKind::LucasMinus { m }).unwrap();
            for k in 0..=200u64 {
                assert!(fm.pair_identity_holds(&fib(2 * k + 1), &fib(2 * k + 2 * m + 1)), "fib m={m} k={k}");
                assert!(lm.pair_identity_holds(&lucas(2 * k), &lucas(2 * k + 2 * m)), "lucas- m={m} k={k}");
                if k >= 1 {
                    assert!(lp.pair_identity_holds(&lucas(2 * k - 1), &lucas(2 * k + 2 * m - 1)), "lucas+ m={m} k={k}");
                }
            }
            for k in 0..m {
                if 2 * k + 1 != m {
                    assert!(fm.pair_identity_holds(&fib(2 * k + 1), &fib(2 * m - 2 * k - 1)), "mirror m={m} k={k}");
                }
            }
            for k in 0..=m {
                if 2 * k != m {
                    assert!(lm.pair_identity_holds(&lucas(2 * k), &lucas(2 * m - 2 * k)), "lucas mirror m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn mirror_exclusion_is_needed() {
        // at k = (m - 1)/2 the two factors coincide
        let m = 3;
        assert_eq!(fib(2 + 1), fib(2 * m - 2 - 1));
        assert!(!index_pairs(FamilyKind::FibMinus { m }, 10).contains(&(3, 3)));
    }

    #[test]
    fn fib_row_one() {
        let catalog = PrimeCatalog::bundled();
        let got = generate(FamilyKind::FibMinus { m: 1 }, 600, &catalog, false, &PrimalityPolicy::default()).unwrap();
        assert_eq!(ns(&got), products(Fib, FIB_TABLE[0].pairs));
        assert!(got.iter().all(|r| r.verified));
        assert_eq!(got[3].closed_form.unwrap().to_string(), "F_431 · F_433");
    }

    #[test]
    fn lucas_row_two() {
        let catalog = PrimeCatalog::bundled();
        let got = generate(FamilyKind::LucasPlus { m: 2 }, 620, &catalog, false, &PrimalityPolicy::default()).unwrap();
        assert_eq!(ns(&got), products(Lucas, LUCAS_TABLE[1].pairs));
    }

    #[test]
    fn lucas_minus_small_members() {
        // m = 1: (L0, L2) = (2, 3) and (L2, L4) = (3, 7); L8 = 47 and L6 = 18
        let catalog = PrimeCatalog::bundled();
        let got = generate(FamilyKind::LucasMinus { m: 1 }, 20, &catalog, false, &PrimalityPolicy::default()).unwrap();
        let ns: Vec<u64> = got.iter().map(|r| r.n.to_u64().unwrap()).collect();
        assert_eq!(ns, vec![6, 21]);
        let spec = family_spec(FamilyKind::LucasMinus { m: 1 }).unwrap();
        for n in ns {
            assert!(spec.holds_with_sigma2(n, crate::arith::sigma2(n).unwrap()), "{n}");
        }
    }

    #[test]
    fn polignac_matches_brute_force() {
        let catalog = PrimeCatalog::bundled();
        for k in [2u64, 4, 6, 30] {
            let got = generate(FamilyKind::Polignac { k }, 5000, &catalog, false, &PrimalityPolicy::default()).unwrap();
            let oracle: Vec<BigUint> = (2..=5000u64)
                .filter(|&p| crate::primality::is_prime_u64(p) && crate::primality::is_prime_u64(p + k))
                .map(|p| BigUint::from(p * (p + k)))
                .collect();
            assert_eq!(ns(&got), oracle, "k = {k}");
        }
        let twins = generate(FamilyKind::Polignac { k: 2 }, 20, &catalog, false, &PrimalityPolicy::default()).unwrap();
        let twins: Vec<u64> = twins.iter().map(|r| r.n.to_u64().unwrap()).collect();
        assert_eq!(twins, vec![15, 35, 143, 323]);
    }

    #[test]
    fn missing_catalog_index_is_flagged() {
        let catalog = PrimeCatalog::bundled().without(Fib, 433);
        let report = verify_tables(&catalog, false, &PrimalityPolicy::default()).unwrap();
        assert!(!report.ok());
        let flagged: Vec<_> = report.entries.iter().filter(|e| e.status != EntryStatus::Verified).collect();
        assert_eq!(flagged.len(), 1);
        assert_eq!(flagged[0].form, ClosedForm { seq: Fib, i: 431, j: 433 });
        assert_eq!(flagged[0].status, EntryStatus::NotInCatalog { index: 433 });
    }

    #[test]
    fn cross_check_small_families() {
        let catalog = PrimeCatalog::bundled();
        let config = SolverConfig::default();
        let c = cross_check_family(FamilyKind::FibMinus { m: 2 }, 3375, &catalog, &config).unwrap();
        assert!(c.sweep.complete && c.unexplained.is_empty() && c.consistent());
        let c = cross_check_family(FamilyKind::FibMinus { m: 6 }, 10_000, &catalog, &config).unwrap();
        let unexplained: Vec<u64> = c.unexplained.iter().map(|r| r.n.to_u64().unwrap()).collect();
        assert_eq!(unexplained, vec![1755]);
        assert!(c.consistent());
    }

    #[test]
    fn sequence_index_examples() {
        assert_eq!(sequence_index(Fib, &BigUint::from(233u32)), Some(13));
        assert_eq!(sequence_index(Lucas, &BigUint::from(2u32)), Some(0));
        assert_eq!(sequence_index(Lucas, &BigUint::from(29u32)), Some(7));
        assert_eq!(sequence_index(Fib, &BigUint::from(4u32)), None);
    }
}
