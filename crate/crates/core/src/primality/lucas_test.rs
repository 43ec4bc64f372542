//! Strong Lucas probable-prime test with Selfridge's parameter choice.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::is_perfect_square;

/// Jacobi symbol `(a / n)` for odd `n`.
fn jacobi(a: &BigUint, n: &BigUint) -> i32 {
    let mut a = a % n;
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz % 2 == 1 {
            let r8 = (&n % 8u32).to_u32_digits().first().copied().unwrap_or(0);
            if r8 == 3 || r8 == 5 {
                result = -result;
            }
        }
        a >>= tz;
        std::mem::swap(&mut a, &mut n);
        let a4 = (&n % 4u32).to_u32_digits().first().copied().unwrap_or(0);
        let n4 = (&a % 4u32).to_u32_digits().first().copied().unwrap_or(0);
        if a4 == 3 && n4 == 3 {
            result = -result;
        }
        a = &a % &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn to_residue(x: i64, n: &BigUint) -> BigUint {
    let v = BigInt::from(x).mod_floor(&BigInt::from_biguint(Sign::Plus, n.clone()));
    v.to_biguint().expect("mod_floor is nonnegative")
}

/// `x / 2 mod n` for odd `n`.
fn half_mod(x: BigUint, n: &BigUint) -> BigUint {
    let x = x % n;
    if x.is_odd() {
        (x + n) >> 1u32
    } else {
        x >> 1u32
    }
}

/// `n` must be odd and greater than the small-prime table.
pub(super) fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    let mut d: i64 = 5;
    loop {
        let j = jacobi(&to_residue(d, n), n);
        if j == -1 {
            break;
        }
        if j == 0 {
            // gcd(|D|, n) > 1 and n is far larger than |D|
            return false;
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    let q = (1 - d) / 4;
    let d_mod = to_residue(d, n);
    let q_mod = to_residue(q, n);

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    // U_1 = 1, V_1 = P = 1, Q^1
    let mut u = BigUint::one();
    let mut v = BigUint::one();
    let mut qk = q_mod.clone();
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = &u * &v % n;
        let two_qk = (&qk << 1u32) % n;
        v = (&v * &v + n - two_qk) % n;
        qk = &qk * &qk % n;
        if k.bit(i) {
            let new_u = half_mod(&u + &v, n);
            let new_v = half_mod((&d_mod * &u + &v) % n, n);
            u = new_u;
            v = new_v;
            qk = &qk * &q_mod % n;
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        let two_qk = (&qk << 1u32) % n;
        v = (&v * &v + n - two_qk) % n;
        if v.is_zero() {
            return true;
        }
        qk = &qk * &qk % n;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_small_table() {
        // (a / 15) for a = 1..=14
        let expected = [1, 1, 0, 1, 0, 0, -1, 1, 0, 0, -1, 0, -1, -1];
        for (a, &e) in (1u32..15).zip(expected.iter()) {
            assert_eq!(jacobi(&BigUint::from(a), &BigUint::from(15u32)), e, "a = {a}");
        }
    }

    #[test]
    fn lucas_accepts_primes_rejects_composites() {
        for p in [257u32, 65_537, 1_000_003, 2_147_483_647] {
            assert!(strong_lucas_probable_prime(&BigUint::from(p)), "{p}");
        }
        for c in [259u32, 65_539 * 3, 1_000_001] {
            assert!(!strong_lucas_probable_prime(&BigUint::from(c)), "{c}");
        }
    }

    #[test]
    fn strong_lucas_pseudoprimes_exist_but_fail_mr() {
        // 5459 and 5777 are the smallest strong Lucas pseudoprimes; they must
        // pass this test, which confirms the implementation follows the standard
        // definition. Miller-Rabin base 2 rejects them.
        assert!(strong_lucas_probable_prime(&BigUint::from(5459u32)));
        assert!(strong_lucas_probable_prime(&BigUint::from(5777u32)));
        assert!(!super::super::is_prime_u64(5459));
    }
}
