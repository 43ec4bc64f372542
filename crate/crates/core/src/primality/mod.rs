//! Primality testing and the catalog of known Fibonacci/Lucas prime indices.
//!
//! Below 2^64 the Miller-Rabin test with the first twelve prime bases is
//! deterministic, so [`is_prime`] returns `Prime` or `Composite` there. Above
//! the threshold the verdict is either `Composite` (a witness was found) or
//! `ProbablePrime`, after a configurable number of strong probable-prime
//! rounds and one strong Lucas test.

mod catalog;
mod lucas_test;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub use catalog::{catalog_load, is_fib_prime, is_lucas_prime, CatalogError, PrimeCatalog, SeqKind, BUNDLED_CATALOG};

/// Miller-Rabin bases that are deterministic for every n < 3.3 * 10^24.
pub const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const SMALL_PRIMES: [u32; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101,
    103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199,
    211, 223, 227, 229, 233, 239, 241, 251,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimalityVerdict {
    Prime,
    Composite,
    /// Passed `rounds` strong probable-prime tests plus a strong Lucas test.
    ProbablePrime { rounds: u32 },
}

impl PrimalityVerdict {
    /// True for `Prime` and `ProbablePrime`.
    pub fn is_prime_like(self) -> bool {
        !matches!(self, PrimalityVerdict::Composite)
    }

    pub fn is_deterministic(self) -> bool {
        !matches!(self, PrimalityVerdict::ProbablePrime { .. })
    }
}

/// How hard to try above the deterministic threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimalityPolicy {
    pub rounds: u32,
}

impl PrimalityPolicy {
    pub const DEFAULT_ROUNDS: u32 = 40;

    pub fn with_rounds(rounds: u32) -> Self {
        PrimalityPolicy { rounds: rounds.max(1) }
    }
}

impl Default for PrimalityPolicy {
    fn default() -> Self {
        PrimalityPolicy { rounds: Self::DEFAULT_ROUNDS }
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES[..12] {
        let p = p as u64;
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d_shift = (n - 1).trailing_zeros();
    let d = (n - 1) >> d_shift;
    'witness: for &a in &DETERMINISTIC_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..d_shift {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// One strong probable-prime round to base `a`; `n` odd and > a.
fn strong_probable_prime(n: &BigUint, a: &BigUint) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// First `count` primes, used as Miller-Rabin bases for big inputs.
fn bases(count: usize) -> impl Iterator<Item = u64> {
    (2u64..).filter(|&b| is_prime_u64(b)).take(count)
}

pub fn is_prime(n: &BigUint, policy: &PrimalityPolicy) -> PrimalityVerdict {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) { PrimalityVerdict::Prime } else { PrimalityVerdict::Composite };
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return PrimalityVerdict::Composite;
        }
    }
    for base in bases(policy.rounds.max(1) as usize) {
        if !strong_probable_prime(n, &BigUint::from(base)) {
            return PrimalityVerdict::Composite;
        }
    }
    if !lucas_test::strong_lucas_probable_prime(n) {
        return PrimalityVerdict::Composite;
    }
    PrimalityVerdict::ProbablePrime { rounds: policy.rounds.max(1) }
}

/// Convenience for callers that only need the yes/no answer.
pub fn is_probable_prime(n: &BigUint, policy: &PrimalityPolicy) -> bool {
    is_prime(n, policy).is_prime_like()
}

pub(crate) fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}
