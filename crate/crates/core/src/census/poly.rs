//! Dense univariate polynomials over a field, constant term first, with
//! trailing zeros trimmed (the zero polynomial is empty).

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use rand_core::RngCore;

use super::field::{Field, PrimeField, Ring};

pub fn trim<F: Ring>(f: &F, a: &mut Vec<F::Elem>) {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
}

/// Degree, with `None` for the zero polynomial.
pub fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant<F: Ring>(f: &F, c: F::Elem) -> Vec<F::Elem> {
    let mut v = vec![c];
    trim(f, &mut v);
    v
}

pub fn x<F: Ring>(f: &F) -> Vec<F::Elem> {
    vec![f.zero(), f.one()]
}

pub fn add<F: Ring>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let mut out: Vec<F::Elem> = (0..n).map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(f, &mut out);
    out
}

pub fn sub<F: Ring>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let mut out: Vec<F::Elem> = (0..n).map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(f, &mut out);
    out
}

pub fn scale<F: Ring>(f: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    let mut out: Vec<F::Elem> = a.iter().map(|x| f.mul(x, c)).collect();
    trim(f, &mut out);
    out
}

pub fn mul<F: Ring>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = f.mul_series(a, b, a.len() + b.len() - 1);
    trim(f, &mut out);
    out
}

pub fn derivative<F: Ring>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let mut out: Vec<F::Elem> =
        a.iter().enumerate().skip(1).map(|(i, c)| f.mul(c, &f.from_i64(i as i64))).collect();
    trim(f, &mut out);
    out
}

pub fn eval<F: Ring>(f: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        if f.is_zero(&r[i]) {
            continue;
        }
        let c = f.mul(&r[i], &lead_inv);
        for j in 0..db {
            r[i - db + j] = f.sub(&r[i - db + j], &f.mul(&c, &b[j]));
        }
        r[i] = f.zero();
        q[i - db] = c;
    }
    trim(f, &mut q);
    trim(f, &mut r);
    (q, r)
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    divrem(f, a, b).1
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(l) => scale(f, a, &f.inv(l).expect("nonzero")),
    }
}

/// Monic greatest common divisor.
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// `(g, s, t)` with `s a + t b = g`; `g` is not normalised.
pub fn ext_gcd<F: Field>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>, Vec<F::Elem>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (constant(f, f.one()), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), constant(f, f.one()));
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
        t0 = core::mem::replace(&mut t1, t2);
    }
    (r0, s0, t0)
}

pub fn mulmod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod<F: Field>(f: &F, base: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Vec<F::Elem> {
    let base = rem(f, base, m);
    let mut result = rem(f, &constant(f, f.one()), m);
    for i in (0..e.bits()).rev() {
        result = mulmod(f, &result, &result, m);
        if e.bit(i) {
            result = mulmod(f, &result, &base, m);
        }
    }
    result
}

/// Squarefree decomposition: pairs `(g, m)` with `f = lc * prod g^m`, each `g`
/// monic and squarefree.
pub fn squarefree<F: Field>(f: &F, a: &[F::Elem]) -> Vec<(Vec<F::Elem>, u32)> {
    let a = monic(f, a);
    let mut out = Vec::new();
    if degree(&a).unwrap_or(0) == 0 {
        return out;
    }
    let mut c = gcd(f, &a, &derivative(f, &a));
    let mut w = divrem(f, &a, &c).0;
    let mut i = 1;
    while w.len() > 1 {
        let y = gcd(f, &w, &c);
        let z = divrem(f, &w, &y).0;
        if z.len() > 1 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = divrem(f, &c, &w).0;
    }
    if c.len() > 1 {
        let p = f.characteristic() as usize;
        let root: Vec<F::Elem> = c.iter().step_by(p).map(|x| f.pth_root(x)).collect();
        for (g, m) in squarefree(f, &root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorisation of a monic squarefree polynomial.
pub fn distinct_degree<F: Field>(f: &F, a: &[F::Elem]) -> Vec<(Vec<F::Elem>, usize)> {
    let q = f.size();
    let mut rest = monic(f, a);
    let mut out = Vec::new();
    let mut h = x(f);
    let mut d = 1;
    while degree(&rest).unwrap_or(0) >= 2 * d {
        h = powmod(f, &h, &q, &rest);
        let g = gcd(f, &rest, &sub(f, &h, &x(f)));
        if g.len() > 1 {
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.len() > 1 {
        let d = rest.len() - 1;
        out.push((rest, d));
    }
    out
}

/// Splits a monic squarefree product of degree-`d` irreducibles (odd
/// characteristic).
pub fn equal_degree<F: Field>(f: &F, a: &[F::Elem], d: usize, rng: &mut dyn RngCore) -> Vec<Vec<F::Elem>> {
    let n = a.len() - 1;
    if n == d {
        return vec![a.to_vec()];
    }
    let exp = (num_traits::pow(f.size(), d) - BigUint::one()) >> 1;
    loop {
        let mut r: Vec<F::Elem> = (0..n).map(|_| f.random(rng)).collect();
        trim(f, &mut r);
        if r.len() < 2 {
            continue;
        }
        let mut g = gcd(f, &r, a);
        if g.len() == 1 {
            let b = powmod(f, &r, &exp, a);
            g = gcd(f, &sub(f, &b, &constant(f, f.one())), a);
        }
        if g.len() > 1 && g.len() < a.len() {
            let h = divrem(f, a, &g).0;
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &h, d, rng));
            return out;
        }
    }
}

/// Total order on polynomials used for deterministic output: degree first,
/// then coefficients from the top down.
pub fn cmp_poly<E: Ord>(a: &[E], b: &[E]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// Monic irreducible factors with multiplicity, sorted by [`cmp_poly`].
pub fn factor<F: Field>(f: &F, a: &[F::Elem], rng: &mut dyn RngCore) -> Vec<(Vec<F::Elem>, u32)>
where
    F::Elem: Ord,
{
    let mut out = Vec::new();
    for (s, m) in squarefree(f, a) {
        for (g, d) in distinct_degree(f, &s) {
            for h in equal_degree(f, &g, d, rng) {
                out.push((h, m));
            }
        }
    }
    out.sort_by(|x, y| cmp_poly(&x.0, &y.0).then(x.1.cmp(&y.1)));
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible<F: Field>(f: &F, a: &[F::Elem]) -> bool {
    let Some(n) = degree(a) else { return false };
    if n == 0 {
        return false;
    }
    let a = monic(f, a);
    let q = f.size();
    let frob = |h: &[F::Elem], times: usize| {
        let mut h = h.to_vec();
        for _ in 0..times {
            h = powmod(f, &h, &q, &a);
        }
        h
    };
    let xn = frob(&x(f), n);
    if !sub(f, &xn, &rem(f, &x(f), &a)).is_empty() {
        return false;
    }
    for (r, _) in crate::numth::factorize(n as u64) {
        let h = frob(&x(f), n / r as usize);
        if gcd(f, &a, &sub(f, &h, &x(f))).len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically extreme monic irreducible of degree `e` over `F_p`.
/// Candidates are ordered by their coefficients from `x^(e-1)` down to the
/// constant term; `largest` selects the last one instead of the first.
pub fn extreme_irreducible(fp: &PrimeField, e: usize, largest: bool) -> Vec<u64> {
    assert!(e >= 1);
    let p = fp.p();
    // digits[0] is the coefficient of x^(e-1)
    let mut digits = vec![if largest { p - 1 } else { 0 }; e];
    loop {
        let mut poly: Vec<u64> = digits.iter().rev().copied().collect();
        poly.push(1);
        if is_irreducible(fp, &poly) {
            return poly;
        }
        // step to the next candidate in the chosen direction, last digit fastest
        let mut i = e;
        loop {
            i -= 1;
            if largest {
                if digits[i] > 0 {
                    digits[i] -= 1;
                    break;
                }
                digits[i] = p - 1;
            } else {
                if digits[i] + 1 < p {
                    digits[i] += 1;
                    break;
                }
                digits[i] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::field::ExtField;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn product(f: &PrimeField, parts: &[(Vec<u64>, u32)]) -> Vec<u64> {
        let mut acc = vec![1];
        for (g, m) in parts {
            for _ in 0..*m {
                acc = mul(f, &acc, g);
            }
        }
        acc
    }

    #[test]
    fn division_and_gcd() {
        let f = PrimeField::new(7);
        let a = vec![6, 0, 1]; // x^2 - 1
        let b = vec![1, 1]; // x + 1
        let (q, r) = divrem(&f, &a, &b);
        assert_eq!((q, r), (vec![6, 1], vec![]));
        assert_eq!(gcd(&f, &a, &vec![6, 1]), vec![6, 1]);
        let (g, s, t) = ext_gcd(&f, &a, &vec![2, 1]);
        assert_eq!(add(&f, &mul(&f, &s, &a), &mul(&f, &t, &vec![2, 1])), g);
    }

    #[test]
    fn factorisation_round_trip() {
        let f = PrimeField::new(5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x^2 + 2)^2 (x + 1)^5 (x^3 + x + 1)
        let parts = vec![(vec![2, 0, 1], 2), (vec![1, 1], 5), (vec![1, 1, 0, 1], 1)];
        let a = product(&f, &parts);
        let got = factor(&f, &a, &mut rng);
        assert_eq!(product(&f, &got), a);
        for (g, _) in &got {
            assert!(is_irreducible(&f, g));
        }
        let mults: Vec<u32> = got.iter().map(|x| x.1).collect();
        assert_eq!(mults.iter().sum::<u32>(), 8);
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn split_over_extension() {
        let fp = PrimeField::new(3);
        let m = extreme_irreducible(&fp, 2, false);
        assert_eq!(m, vec![1, 0, 1]);
        let k = ExtField::new(fp, m.clone());
        let lifted: Vec<Vec<u64>> = m.iter().map(|&c| k.lift(c)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let got = factor(&k, &lifted, &mut rng);
        assert_eq!(got.len(), 2);
        assert!(got.iter().all(|(g, e)| g.len() == 2 && *e == 1));
    }

    #[test]
    fn extreme_moduli() {
        let f = PrimeField::new(7);
        assert_eq!(extreme_irreducible(&f, 1, false), vec![0, 1]);
        assert_eq!(extreme_irreducible(&f, 1, true), vec![6, 1]);
        let lo = extreme_irreducible(&f, 3, false);
        let hi = extreme_irreducible(&f, 3, true);
        assert!(is_irreducible(&f, &lo) && is_irreducible(&f, &hi));
        assert_ne!(lo, hi);
        assert!(!is_irreducible(&f, &[6, 0, 1]));
    }

    #[test]
    fn inseparable_input() {
        let f = PrimeField::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // (x^3 + 2x + 1)^3 is a polynomial in x^3
        let g = vec![1, 2, 0, 1];
        let a = mul(&f, &mul(&f, &g, &g), &g);
        assert_eq!(factor(&f, &a, &mut rng), vec![(g, 3)]);
    }
}
