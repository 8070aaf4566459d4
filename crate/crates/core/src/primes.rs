//! Primality testing and prime enumeration.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Bases {2, 3, 5, 7} make Miller-Rabin exact below this bound.
const DETERMINISTIC_LIMIT: u64 = 3_215_031_751;

/// Bases used above the deterministic limit. These settle every n < 3.3e24
/// and are a strong probabilistic test beyond it.
const EXTENDED_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
            if small == q {
                return true;
            }
            if small % q == 0 {
                return false;
            }
        }
        if small < 43 * 43 {
            return true;
        }
        if small < DETERMINISTIC_LIMIT {
            return miller_rabin(n, &[2, 3, 5, 7]);
        }
    } else if n.is_even() {
        return false;
    }
    miller_rabin(n, &EXTENDED_BASES)
}

fn miller_rabin(n: &BigUint, bases: &[u32]) -> bool {
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let shift = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> shift;
    'witness: for &a in bases {
        let a = BigUint::from(a) % n;
        if a.is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..shift {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Odd primes in the inclusive range `[lo, hi]`, by a sieve of Eratosthenes.
pub fn odd_primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 3 || lo > hi {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(3)..=hi)
        .filter(|&k| k % 2 == 1 && !composite[k as usize])
        .collect()
}
