//! Solver output against a brute-force divisor sum, plus property checks.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use sigma2_core::arith::{factor, sigma2, sigma2_range, SieveConfig};
use sigma2_core::solver::{classify, solve, Classification, EquationSpec, SolverConfig};

const LIMIT: u64 = 1_000_000;

/// σ₂ for every n ≤ LIMIT by adding d² to each multiple of d.
fn divisor_sums() -> &'static [u128] {
    static TABLE: OnceLock<Vec<u128>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0u128; LIMIT as usize + 1];
        for d in 1..=LIMIT as usize {
            let sq = (d as u128) * (d as u128);
            for m in (d..=LIMIT as usize).step_by(d) {
                t[m] += sq;
            }
        }
        t
    })
}

fn brute_force(a: i64, b: i64, limit: u64) -> BTreeSet<u64> {
    let t = divisor_sums();
    (1..=limit)
        .filter(|&n| {
            let lhs = t[n as usize] as i128 - (n as i128) * (n as i128);
            lhs == a as i128 * n as i128 + b as i128
        })
        .collect()
}

fn solved(a: i64, b: i64, limit: u64) -> BTreeSet<u64> {
    let spec = EquationSpec::new(a, b);
    let report = solve(&spec, limit, &BigUint::from(limit), &SolverConfig::default()).unwrap();
    for r in &report.records {
        assert!(r.verified, "{a},{b}: unverified record {}", r.n);
        assert!(r.recheck(&spec), "{a},{b}: record {} fails recheck", r.n);
    }
    report.records.iter().filter_map(|r| r.n.to_u64()).filter(|&n| n <= limit).collect()
}

#[test]
fn solve_matches_brute_force_to_a_million() {
    for (a, b) in [(3, 0), (7, -8), (18, -63), (2, 5), (3, 6), (7, 46)] {
        let spec = EquationSpec::new(a, b);
        assert!(matches!(classify(&spec), Classification::General { .. }));
        assert_eq!(solved(a, b, LIMIT), brute_force(a, b, LIMIT), "A = {a}, B = {b}");
    }
}

#[test]
fn twin_product_family_includes_eight() {
    // 8 = 2³ satisfies σ₂ − n² = 2n + 5 without being a twin product
    let got = solved(2, 5, 1000);
    assert!(got.contains(&8));
    assert!(got.contains(&15) && got.contains(&35) && got.contains(&143));
}

#[test]
fn symbolic_cases_agree_with_brute_force() {
    let primes: BTreeSet<u64> = (2..=10_000u64).filter(|&n| factor(n).unwrap().factors() == [(n, 1)]).collect();
    assert_eq!(brute_force(0, 1, 10_000), primes);
    let squares: BTreeSet<u64> = primes.iter().map(|p| p * p).filter(|&n| n <= 10_000).collect();
    assert_eq!(brute_force(1, 1, 10_000), squares);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn small_equations_are_complete(a in -6i64..=12, b in -40i64..=40) {
        prop_assume!(!(b == 1 && (a == 0 || a == 1)));
        prop_assert_eq!(solved(a, b, 20_000), brute_force(a, b, 20_000));
    }

    #[test]
    fn factorization_reconstructs(n in 1u64..=1u64 << 40) {
        let f = factor(n).unwrap();
        prop_assert_eq!(f.value(), n as u128);
        let mut last = 1;
        for &(p, e) in f.factors() {
            prop_assert!(p > last && e >= 1);
            prop_assert_eq!(factor(p).unwrap().factors().to_vec(), vec![(p, 1)]);
            last = p;
        }
    }

    #[test]
    fn sieve_agrees_pointwise(lo in 1u64..=990_000, len in 1u64..=5000, seg in 1024usize..=4096) {
        let hi = (lo + len).min(LIMIT);
        let config = SieveConfig { segment_size: seg, ..SieveConfig::default() };
        let t = divisor_sums();
        let mut expected = lo;
        for (n, s) in sigma2_range(lo, hi, &config).unwrap() {
            prop_assert_eq!(n, expected);
            prop_assert_eq!(s, t[n as usize]);
            prop_assert_eq!(s, sigma2(n).unwrap());
            expected += 1;
        }
        prop_assert_eq!(expected, hi + 1);
    }

    #[test]
    fn classification_partitions(a in -1000i64..=1000, b in -1000i64..=1000) {
        let class = classify(&EquationSpec::new(a, b));
        let expected = match (a, b) {
            (0, 1) => "all",
            (1, 1) => "squares",
            _ => "general",
        };
        let got = match &class {
            Classification::AllPrimes => "all",
            Classification::PrimeSquares => "squares",
            Classification::General { theoretical_bound, .. } => {
                let bound = BigInt::from(a.abs() + b.abs()).pow(3);
                prop_assert_eq!(BigInt::from(theoretical_bound.clone()), bound);
                "general"
            }
        };
        prop_assert_eq!(got, expected);
    }
}
