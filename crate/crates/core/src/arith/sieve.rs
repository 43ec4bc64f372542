//! Segmented sieve for σ₂ over a range.
//!
//! Each segment keeps the unfactored remainder of every entry; dividing out
//! each sieving prime `p <= sqrt(hi)` multiplies the running σ₂ by
//! `1 + p² + … + p^{2e}`. A remainder above 1 after all sieving primes is a
//! single large prime.

use num_integer::Roots;

use super::{primes_below, ArithError, WORD_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Entries per segment.
    pub segment_size: usize,
    /// Largest number of integers a single call may cover.
    pub max_span: u64,
}

impl SieveConfig {
    pub const DEFAULT_SEGMENT: usize = 1 << 22;
    pub const MIN_SEGMENT: usize = 1 << 10;
    pub const DEFAULT_MAX_SPAN: u64 = 1 << 32;
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { segment_size: Self::DEFAULT_SEGMENT, max_span: Self::DEFAULT_MAX_SPAN }
    }
}

/// σ₂(n) for every n in `[lo, hi]`, using the sieving primes in `primes`
/// (which must include every prime up to `sqrt(hi)`).
pub fn sigma2_segment(lo: u64, hi: u64, primes: &[u64]) -> Vec<u128> {
    debug_assert!(1 <= lo && lo <= hi && hi < WORD_LIMIT);
    let len = (hi - lo + 1) as usize;
    let mut rest: Vec<u64> = (lo..=hi).collect();
    let mut acc: Vec<u128> = vec![1; len];
    for &p in primes {
        if p.saturating_mul(p) > hi {
            break;
        }
        let p2 = (p as u128) * (p as u128);
        let first = lo.div_ceil(p) * p;
        let mut idx = (first - lo) as usize;
        while idx < len {
            let mut r = rest[idx] / p;
            let mut power = p2;
            let mut term = 1 + p2;
            while r.is_multiple_of(p) {
                r /= p;
                power *= p2;
                term += power;
            }
            rest[idx] = r;
            acc[idx] *= term;
            idx += p as usize;
        }
    }
    for (a, &r) in acc.iter_mut().zip(&rest) {
        if r > 1 {
            *a *= 1 + (r as u128) * (r as u128);
        }
    }
    acc
}

/// Lazy stream of `(n, σ₂(n))` for `n` in `[lo, hi]`, one segment at a time.
pub struct Sigma2Range {
    next_lo: u64,
    hi: u64,
    segment_size: u64,
    primes: Vec<u64>,
    buffer: std::vec::IntoIter<u128>,
    buffer_lo: u64,
    emitted: u64,
}

impl Iterator for Sigma2Range {
    type Item = (u64, u128);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(value) = self.buffer.next() {
                let n = self.buffer_lo + self.emitted;
                self.emitted += 1;
                return Some((n, value));
            }
            if self.next_lo > self.hi || self.next_lo == 0 {
                return None;
            }
            let seg_lo = self.next_lo;
            let seg_hi = seg_lo.saturating_add(self.segment_size - 1).min(self.hi);
            self.buffer = sigma2_segment(seg_lo, seg_hi, &self.primes).into_iter();
            self.buffer_lo = seg_lo;
            self.emitted = 0;
            // 0 marks exhaustion when seg_hi is the last word
            self.next_lo = seg_hi.checked_add(1).unwrap_or(0);
        }
    }
}

/// Sieving primes for a sweep that ends at `hi`.
///
/// These are materialized in full, which keeps sweeps practical up to roughly
/// `hi = 10^14`; the word limit itself would need every prime below 3·10^9.
pub fn sieving_primes(hi: u64) -> Vec<u64> {
    primes_below(hi.sqrt() + 2)
}

pub fn sigma2_range(lo: u64, hi: u64, config: &SieveConfig) -> Result<Sigma2Range, ArithError> {
    if lo == 0 || hi >= WORD_LIMIT {
        return Err(ArithError::OutOfRange(if lo == 0 { lo } else { hi }));
    }
    if lo > hi {
        return Err(ArithError::EmptyRange { lo, hi });
    }
    let span = hi - lo + 1;
    if span > config.max_span {
        return Err(ArithError::BudgetExceeded {
            lo,
            hi,
            span,
            budget: config.max_span,
            segments: span.div_ceil(config.max_span),
        });
    }
    Ok(Sigma2Range {
        next_lo: lo,
        hi,
        segment_size: config.segment_size.max(1) as u64,
        primes: sieving_primes(hi),
        buffer: Vec::new().into_iter(),
        buffer_lo: lo,
        emitted: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::super::sigma2;
    use super::*;

    fn direct(n: u64) -> u128 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| (d as u128) * (d as u128)).sum()
    }

    #[test]
    fn first_five() {
        let got: Vec<_> = sigma2_range(1, 5, &SieveConfig::default()).unwrap().collect();
        assert_eq!(got, vec![(1, 1), (2, 5), (3, 10), (4, 21), (5, 26)]);
    }

    #[test]
    fn single_point_and_pointwise() {
        let cfg = SieveConfig::default();
        assert_eq!(sigma2_range(10, 10, &cfg).unwrap().collect::<Vec<_>>(), vec![(10, 130)]);
        for (n, s) in sigma2_range(64, 66, &cfg).unwrap() {
            assert_eq!(s, sigma2(n).unwrap());
            assert_eq!(s, direct(n));
        }
    }

    #[test]
    fn small_segments_stitch_correctly() {
        let cfg = SieveConfig { segment_size: 7, max_span: 1 << 20 };
        let got: Vec<_> = sigma2_range(1, 2000, &cfg).unwrap().collect();
        assert_eq!(got.len(), 2000);
        for (n, s) in got {
            assert_eq!(s, direct(n), "n = {n}");
        }
    }

    #[test]
    fn far_from_the_origin() {
        let hi = 1_000_000_000_039;
        let lo = hi - 300;
        let cfg = SieveConfig { segment_size: 16, max_span: 1 << 20 };
        for (n, s) in sigma2_range(lo, hi, &cfg).unwrap() {
            assert_eq!(s, sigma2(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = SieveConfig { segment_size: 1024, max_span: 1000 };
        let err = sigma2_range(1, 2500, &cfg).err().unwrap();
        assert_eq!(err, ArithError::BudgetExceeded { lo: 1, hi: 2500, span: 2500, budget: 1000, segments: 3 });
        assert!(err.to_string().contains("split it into 3 runs"));
        assert!(sigma2_range(0, 5, &cfg).is_err());
        assert!(sigma2_range(6, 5, &cfg).is_err());
    }
}
