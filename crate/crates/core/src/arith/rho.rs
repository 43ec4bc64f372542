//! Pollard-Brent cycle finding for word-size cofactors.

use num_integer::{Integer, Roots};

use crate::primality::is_prime_u64;

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Finds a nontrivial factor of the odd composite `n`, trying the polynomial
/// `x^2 + c` for c = 1, 2, ... in order.
fn brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    const BATCH: u64 = 128;
    for c in 1..n {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // backtrack one step at a time from the last saved point
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("no factor found for composite {n}")
}

/// Appends the prime factors of `n > 1` (with multiplicity) to `out`.
pub(super) fn split_completely(n: u64, out: &mut Vec<u64>) {
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.push(m);
            continue;
        }
        let r = m.sqrt();
        if r * r == m {
            stack.push(r);
            stack.push(r);
            continue;
        }
        let d = brent(m);
        stack.push(d);
        stack.push(m / d);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_products_of_large_primes() {
        let mut out = Vec::new();
        split_completely(2_147_483_629 * 2_147_483_647, &mut out);
        out.sort_unstable();
        assert_eq!(out, vec![2_147_483_629, 2_147_483_647]);
    }
}
