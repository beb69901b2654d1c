use alloc::vec::Vec;

use super::{isqrt, mul_mod, pow_mod};

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime strictly greater than `n`.
pub fn next_prime(n: u64) -> Option<u64> {
    let mut c = n.checked_add(1)?;
    while !is_prime(c) {
        c = c.checked_add(1)?;
    }
    Some(c)
}

/// True iff `p` is a prime of the form `2^(2^t) + 1`.
pub fn is_fermat_prime(p: u64) -> bool {
    if p < 3 || !is_prime(p) {
        return false;
    }
    let m = p - 1;
    m.is_power_of_two() && (m.trailing_zeros() as u64).is_power_of_two()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho; `n` must be odd and composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
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
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorization as ascending `(prime, exponent)` pairs; `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut raw = Vec::new();
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % q == 0 {
            raw.push(q);
            n /= q;
        }
    }
    if n > 1 {
        if n < 53 * 53 || isqrt(n) < 53 {
            raw.push(n);
        } else {
            split_into(n, &mut raw);
        }
    }
    raw.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in raw {
        match out.last_mut() {
            Some((p, e)) if *p == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// An odd prime power `ell^r` with `r >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    pub ell: u64,
    pub r: u32,
    pub value: u64,
}

impl PrimePower {
    /// Returns `None` unless `ell` is an odd prime, `r >= 1`, and `ell^r` fits in 64 bits.
    pub fn new(ell: u64, r: u32) -> Option<Self> {
        if r == 0 || ell == 2 || !is_prime(ell) {
            return None;
        }
        let value = ell.checked_pow(r)?;
        Some(PrimePower { ell, r, value })
    }
}

/// The `ell^r` exactly dividing `n`, over the odd primes `ell | n`, ascending by value.
pub fn exact_odd_prime_power_divisors(n: u64) -> Vec<PrimePower> {
    if n == 0 {
        return Vec::new();
    }
    let mut out: Vec<PrimePower> = factorize(n)
        .into_iter()
        .filter(|&(q, _)| q != 2)
        .map(|(q, e)| PrimePower { ell: q, r: e, value: q.pow(e) })
        .collect();
    out.sort_by_key(|pp| pp.value);
    out
}
