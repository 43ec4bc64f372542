//! Solver for the divisor-sum equation `σ₂(n) − n² = A·n + B`.
//!
//! The crate is organised bottom-up:
//!
//! * [`seq`]: exact Fibonacci and Lucas numbers and their classical identities.
//! * [`primality`]: word-size deterministic and big-integer probabilistic
//!   primality, plus the catalog of known Fibonacci/Lucas prime indices.
//! * [`arith`]: factorization, σ₂ and a segmented σ₂ sieve.
//! * [`pell`]: integer points on `x² − D·y² = N` with automorph `(A, 1)`.
//! * [`solver`]: classification, bounded exhaustive search and prime-pair
//!   enumeration for arbitrary `(A, B)`.
//! * [`families`]: closed-form Fibonacci, Lucas and prime-gap solution families.
//! * [`io`]: record serialization and sweep checkpoints.

pub mod arith;
pub mod primality;
pub mod pell;
pub mod families;
pub mod io;
pub mod seq;
pub mod solver;

pub use num_bigint::{BigInt, BigUint};
