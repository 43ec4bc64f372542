use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use sigma2_core::families::FamilyName;
use sigma2_core::io::OutputFormat;

#[derive(Debug, Parser)]
#[command(name = "sigma2", version, about = "Solve sigma2(n) - n^2 = A*n + B and reproduce its closed-form families")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Exhaustive sweep limit (accepts 10^6 and 1e6 forms).
    #[arg(long, global = true, default_value = "1000000", value_parser = parse_count)]
    pub cap: u64,
    /// Largest prime q for prime-pair enumeration.
    #[arg(long = "q-bound", global = true, default_value = "1000000", value_parser = parse_nat)]
    pub q_bound: BigUint,
    /// Largest sequence index (or smaller prime, for polignac) in family generation.
    #[arg(long = "index-bound", global = true, default_value = "1000", value_parser = parse_count)]
    pub index_bound: u64,
    /// Re-test catalog entries with the primality test instead of trusting them.
    #[arg(long, global = true)]
    pub recheck: bool,
    /// Miller-Rabin rounds above 2^64.
    #[arg(long, global = true, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
    pub rounds: u32,
    /// Sieve segment size (at least 1024).
    #[arg(long, global = true, default_value = "4194304", value_parser = parse_segment)]
    pub segments: usize,
    /// Prime-index catalog file; overrides $SIGMA2_CATALOG and the bundled list.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// json-lines, csv or human
    #[arg(long, global = true, default_value = "json-lines")]
    pub format: OutputFormat,
    /// Worker threads (default: all available).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Continue a sweep from this checkpoint file (and keep updating it).
    #[arg(long, global = true)]
    pub resume: Option<PathBuf>,
    /// Write sweep progress to this checkpoint file.
    #[arg(long, global = true)]
    pub checkpoint: Option<PathBuf>,
    /// Leave the timestamp out of summaries, for byte-identical output.
    #[arg(long = "no-timestamp", global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve sigma2(n) - n^2 = A*n + B.
    Solve {
        #[arg(long = "A", allow_hyphen_values = true, value_parser = parse_int)]
        a: BigInt,
        #[arg(long = "B", allow_hyphen_values = true, value_parser = parse_int)]
        b: BigInt,
    },
    /// Generate a closed-form family: fib, lucas+, lucas- or polignac.
    Family {
        name: FamilyName,
        /// Family parameter for fib, lucas+ and lucas-
        #[arg(long, required_unless_present = "k", conflicts_with = "k")]
        m: Option<u64>,
        /// Even prime gap for polignac
        #[arg(long)]
        k: Option<u64>,
        /// Re-verify every member through the pair identity with fresh primality tests.
        #[arg(long)]
        verify: bool,
    },
    /// Integer points on x^2 - D*y^2 = N.
    Pell {
        /// Points of x^2 - 5y^2 = -4 or 4.
        #[arg(long = "fib-conic", allow_hyphen_values = true, conflicts_with_all = ["d", "n"])]
        fib_conic: Option<i64>,
        #[arg(long = "D", allow_hyphen_values = true, value_parser = parse_int, requires = "n")]
        d: Option<BigInt>,
        #[arg(long = "N", allow_hyphen_values = true, value_parser = parse_int, requires = "d")]
        n: Option<BigInt>,
        #[arg(long = "y-bound", default_value = "1000", value_parser = parse_nat)]
        y_bound: BigUint,
    },
    /// sigma2(n) and the factorization of n.
    Sigma2 {
        #[arg(value_parser = parse_count)]
        n: u64,
    },
    /// Regenerate and check the published Fibonacci and Lucas solution tables.
    VerifyTables,
}

/// Decimal, `a^b` or `aeb`.
fn parse_power(s: &str) -> Result<BigUint, String> {
    let bad = || format!("{s:?} is not a natural number (forms: 1000000, 10^6, 1e6)");
    let num = |t: &str| t.replace('_', "").parse::<BigUint>().map_err(|_| bad());
    let exp = |t: &str| t.parse::<u32>().map_err(|_| bad());
    if let Some((b, e)) = s.split_once('^') {
        Ok(num(b)?.pow(exp(e)?))
    } else if let Some((m, e)) = s.split_once(['e', 'E']) {
        Ok(num(m)? * BigUint::from(10u32).pow(exp(e)?))
    } else {
        num(s)
    }
}

pub fn parse_nat(s: &str) -> Result<BigUint, String> {
    let v = parse_power(s)?;
    if v == BigUint::from(0u32) {
        return Err("must be positive".into());
    }
    Ok(v)
}

pub fn parse_count(s: &str) -> Result<u64, String> {
    let v = parse_nat(s)?;
    u64::try_from(&v).map_err(|_| format!("{s} is larger than 2^64 - 1"))
}

fn parse_segment(s: &str) -> Result<usize, String> {
    let v = parse_count(s)?;
    if v < 1024 {
        return Err("segment size must be at least 1024".into());
    }
    usize::try_from(v).map_err(|e| e.to_string())
}

pub fn parse_int(s: &str) -> Result<BigInt, String> {
    s.parse().map_err(|_| format!("{s:?} is not an integer"))
}
