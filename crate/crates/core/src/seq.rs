//! Exact Fibonacci and Lucas numbers.
//!
//! Everything is computed with fast doubling on [`BigUint`], so the cost of
//! `fib(n)` is `O(log n)` big-integer multiplications. Indices are plain
//! `u64`; anything past roughly 10^6 is correct but slow.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

/// Subscript of a Fibonacci or Lucas number.
pub type Index = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("identity {which} needs n >= m, got m = {m}, n = {n}")]
    IndexOrder { which: Identity, m: Index, n: Index },
    #[error("unknown identity selector {0:?} (expected one of i, ii, iii, iv, v)")]
    UnknownIdentity(String),
}

/// Returns `(F(n), F(n + 1))`.
pub fn fib_pair(n: Index) -> (BigUint, BigUint) {
    let mut a = BigUint::zero();
    let mut b = BigUint::one();
    if n == 0 {
        return (a, b);
    }
    let top = 63 - n.leading_zeros();
    for bit in (0..=top).rev() {
        // (F(k), F(k+1)) -> (F(2k), F(2k+1))
        let two_b_minus_a = (&b << 1u32) - &a;
        let c = &a * &two_b_minus_a;
        let d = &a * &a + &b * &b;
        if (n >> bit) & 1 == 1 {
            b = &c + &d;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

pub fn fib(n: Index) -> BigUint {
    fib_pair(n).0
}

/// `L(n) = 2 F(n+1) - F(n)`.
pub fn lucas(n: Index) -> BigUint {
    let (f, g) = fib_pair(n);
    (g << 1u32) - f
}

/// `(L(n), F(n))` in one fast-doubling pass.
pub fn lucas_fib(n: Index) -> (BigUint, BigUint) {
    let (f, g) = fib_pair(n);
    ((g << 1u32) - &f, f)
}

/// The five classical Fibonacci/Lucas identities used by the family proofs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `5 F(n)^2 + 4 (-1)^n = L(n)^2`
    I,
    /// `L(m) L(n) + 5 F(m) F(n) = 2 L(m+n)`
    II,
    /// `F(n) L(m) = F(n+m) + (-1)^m F(n-m)`
    III,
    /// `L(n) F(m) = F(n+m) - (-1)^m F(n-m)`
    IV,
    /// `5 F(m) F(n) = L(m+n) - (-1)^m L(n-m)`
    V,
}

impl Identity {
    pub const ALL: [Identity; 5] = [Identity::I, Identity::II, Identity::III, Identity::IV, Identity::V];
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::I => "i",
            Identity::II => "ii",
            Identity::III => "iii",
            Identity::IV => "iv",
            Identity::V => "v",
        })
    }
}

impl FromStr for Identity {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(Identity::I),
            "ii" | "2" => Ok(Identity::II),
            "iii" | "3" => Ok(Identity::III),
            "iv" | "4" => Ok(Identity::IV),
            "v" | "5" => Ok(Identity::V),
            _ => Err(SeqError::UnknownIdentity(s.to_string())),
        }
    }
}

fn signed(x: BigUint) -> BigInt {
    BigInt::from(x)
}

fn parity_sign(k: Index) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Evaluates both sides of `which` at `(m, n)` exactly and compares them.
///
/// Identity (i) only involves `n`; `m` is ignored for it. The others require
/// `n >= m` because they use the index `n - m`.
pub fn check_identity(which: Identity, m: Index, n: Index) -> Result<bool, SeqError> {
    if which != Identity::I && n < m {
        return Err(SeqError::IndexOrder { which, m, n });
    }
    let holds = match which {
        Identity::I => {
            let (l, f) = lucas_fib(n);
            let lhs = signed(&f * &f * 5u32) + parity_sign(n) * 4;
            lhs == signed(&l * &l)
        }
        Identity::II => {
            let (lm, fm) = lucas_fib(m);
            let (ln, f_n) = lucas_fib(n);
            lm * ln + fm * f_n * 5u32 == lucas(m + n) * 2u32
        }
        Identity::III => {
            let lhs = signed(fib(n) * lucas(m));
            lhs == signed(fib(n + m)) + parity_sign(m) * signed(fib(n - m))
        }
        Identity::IV => {
            let lhs = signed(lucas(n) * fib(m));
            lhs == signed(fib(n + m)) - parity_sign(m) * signed(fib(n - m))
        }
        Identity::V => {
            let lhs = signed(fib(m) * fib(n) * 5u32);
            lhs == signed(lucas(m + n)) - parity_sign(m) * signed(lucas(n - m))
        }
    };
    Ok(holds)
}
