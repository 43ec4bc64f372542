//! Word-size factorization, divisor-square sums and a segmented sieve for σ₂.
//!
//! Every `n < 2^63` has `σ₂(n) < ζ(2)·n² < 2^127`, so σ₂ values are carried in
//! `u128` without loss; [`sigma2_pq`] is the only entry point that works on
//! arbitrary-precision factors.

mod rho;
mod sieve;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::primality::is_prime_u64;

pub use sieve::{sieving_primes, sigma2_range, sigma2_segment, Sigma2Range, SieveConfig};

/// Exclusive upper limit for word-size inputs.
pub const WORD_LIMIT: u64 = 1 << 63;

const TRIAL_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is outside the supported range 1 <= n < 2^63")]
    OutOfRange(u64),
    #[error("empty range: lo = {lo} > hi = {hi}")]
    EmptyRange { lo: u64, hi: u64 },
    #[error(
        "range [{lo}, {hi}] spans {span} integers, more than the budget of {budget}; \
         split it into {segments} runs of at most {budget}"
    )]
    BudgetExceeded { lo: u64, hi: u64, span: u64, budget: u64, segments: u64 },
}

/// Prime factorization of a word-size integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// `factors` must be sorted by prime with positive exponents.
    pub fn from_sorted(factors: Vec<(u64, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|&(_, e)| e > 0));
        Factorization { factors }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn value(&self) -> u128 {
        self.factors.iter().map(|&(p, e)| (p as u128).pow(e)).product()
    }

    /// σ₂ from the factorization: the product of `1 + p² + … + p^{2e}`.
    pub fn sigma2(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| {
                let p2 = (p as u128) * (p as u128);
                let mut term = 1u128;
                let mut power = 1u128;
                for _ in 0..e {
                    power *= p2;
                    term += power;
                }
                term
            })
            .product()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Primes below `limit` by a plain sieve of Eratosthenes.
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for i in 2..limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(TRIAL_LIMIT))
}

fn check_word(n: u64) -> Result<(), ArithError> {
    if n == 0 || n >= WORD_LIMIT {
        Err(ArithError::OutOfRange(n))
    } else {
        Ok(())
    }
}

/// Complete factorization of `1 <= n < 2^63`.
///
/// Trial division by primes below 10^6, then Pollard-Brent with fixed seeds
/// on whatever cofactor is left, so the result is reproducible.
pub fn factor(n: u64) -> Result<Factorization, ArithError> {
    check_word(n)?;
    let mut rest = n;
    let mut primes: Vec<u64> = Vec::new();
    for &p in trial_primes() {
        if p * p > rest {
            break;
        }
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    if rest > 1 {
        rho::split_completely(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    debug_assert!(factors.iter().all(|&(p, _)| is_prime_u64(p)));
    Ok(Factorization::from_sorted(factors))
}

pub fn sigma2(n: u64) -> Result<u128, ArithError> {
    Ok(factor(n)?.sigma2())
}

/// `σ₂(pq) = 1 + p² + q² + p²q²` for distinct primes; the caller vouches for primality.
pub fn sigma2_pq(p: &BigUint, q: &BigUint) -> BigUint {
    let p2 = p * p;
    let q2 = q * q;
    (BigUint::one() + &p2) * (BigUint::one() + q2)
}

pub fn omega(n: u64) -> Result<usize, ArithError> {
    Ok(factor(n)?.omega())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisor_square_sum(n: u64) -> u128 {
        let mut total = 0u128;
        let mut d = 1u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                total += (d as u128) * (d as u128);
                let e = n / d;
                if e != d {
                    total += (e as u128) * (e as u128);
                }
            }
            d += 1;
        }
        total
    }

    #[test]
    fn factor_examples() {
        assert!(factor(1).unwrap().factors().is_empty());
        assert_eq!(factor(1755).unwrap().factors(), &[(3, 3), (5, 1), (13, 1)]);
        assert_eq!(factor(20737).unwrap().factors(), &[(89, 1), (233, 1)]);
    }

    #[test]
    fn factor_rejects_out_of_range() {
        assert_eq!(factor(0), Err(ArithError::OutOfRange(0)));
        assert_eq!(factor(WORD_LIMIT), Err(ArithError::OutOfRange(WORD_LIMIT)));
    }

    #[test]
    fn factor_hard_cases() {
        // semiprimes with both factors beyond the trial-division limit
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        assert_eq!(factor(p * q).unwrap().factors(), &[(q, 1), (p, 1)]);
        let r = 2_147_483_647u64;
        assert_eq!(factor(r * r).unwrap().factors(), &[(r, 2)]);
        let big_prime = 9_223_372_036_854_775_783u64; // largest prime below 2^63
        assert_eq!(factor(big_prime).unwrap().factors(), &[(big_prime, 1)]);
        let three = 1_000_003u64 * 1_000_033 * 1_000_037;
        assert_eq!(factor(three).unwrap().factors(), &[(1_000_003, 1), (1_000_033, 1), (1_000_037, 1)]);
    }

    #[test]
    fn sigma2_examples() {
        assert_eq!(sigma2(1).unwrap(), 1);
        assert_eq!(sigma2(10).unwrap(), 130);
        assert_eq!(sigma2(1755).unwrap(), 3_624_400);
        // the exceptional identity at n = 1755
        let n = 1755i128;
        assert_eq!(3_624_400 - n * n, 322 * n - 20735);
    }

    #[test]
    fn sigma2_matches_divisor_enumeration() {
        for n in 1..=100_000u64 {
            assert_eq!(sigma2(n).unwrap(), divisor_square_sum(n), "n = {n}");
        }
    }

    #[test]
    fn sigma2_pq_examples() {
        let b = |x: u64| BigUint::from(x);
        assert_eq!(sigma2_pq(&b(2), &b(5)), b(130));
        // 1 + 9 + 49 + 441
        assert_eq!(sigma2_pq(&b(3), &b(7)), b(500));
        assert_eq!(sigma2_pq(&b(89), &b(233)), BigUint::from(sigma2(20737).unwrap()));
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(1).unwrap(), 0);
        assert_eq!(omega(1755).unwrap(), 3);
        assert_eq!(omega(20737).unwrap(), 2);
    }

    #[test]
    fn multiplicative_on_coprime_pairs() {
        use num_integer::Integer;
        for a in (1..=10_000u64).step_by(97) {
            for b in (1..=10_000u64).step_by(89) {
                if a.gcd(&b) == 1 {
                    assert_eq!(sigma2(a * b).unwrap(), sigma2(a).unwrap() * sigma2(b).unwrap());
                }
            }
        }
    }

    #[test]
    fn display_uses_exponents() {
        assert_eq!(factor(1755).unwrap().to_string(), "3^3 * 5 * 13");
        assert_eq!(factor(1).unwrap().to_string(), "1");
    }
}
