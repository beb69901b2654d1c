//! Elementary number theory over machine integers, plus exact rationals.

mod primes;
mod rational;
mod sieve;

pub use primes::{
    exact_odd_prime_power_divisors, factorize, is_fermat_prime, is_prime, next_prime, PrimePower,
};
pub use rational::{rational_cmp, Rational};
pub use sieve::{
    primes_up_to, primes_up_to_with, sieve_range, PrimeTable, SieveConfig, DEFAULT_SEGMENT_BYTES,
    DEFAULT_SIEVE_LIMIT,
};

/// Errors from the number-theory layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumthError {
    #[error("{requested} exceeds the configured sieve limit {limit}")]
    LimitExceeded { requested: u64, limit: u64 },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    ParseRational(alloc::string::String),
}

/// Integer square root, rounded down.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// `base^exp mod m` with 128-bit intermediates.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular inverse of `a` modulo `m` when it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(pow_mod(2, 10, 1000), 24);
    }
}
