//! Coefficient rings: the integers, prime fields, and their extensions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand_core::RngCore;

use crate::numth::{inv_mod, pow_mod};

pub trait Ring: Clone + Debug + PartialEq {
    type Elem: Clone + PartialEq + Eq + Debug + Hash;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_int(&self, n: &BigInt) -> Self::Elem;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    /// Coefficients `0..n` of the product of two truncated series.
    fn mul_series(&self, a: &[Self::Elem], b: &[Self::Elem], n: usize) -> Vec<Self::Elem> {
        let mut out = vec![self.zero(); n];
        for (i, x) in a.iter().enumerate().take(n) {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(n - i) {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        out
    }
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> usize;
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Number of elements.
    fn size(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.characteristic()), self.degree())
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.mul(&result, &result);
            if e.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        self.pow(a, &BigUint::from(e))
    }

    /// Scales by a prime-field element given as an integer in `[0, p)`.
    fn scale_int(&self, a: &Self::Elem, c: u64) -> Self::Elem {
        self.mul(a, &self.from_int(&BigInt::from(c)))
    }

    /// The unique `p`-th root.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let q = self.size();
        self.pow(a, &(q / self.characteristic()))
    }
}

/// The rational integers with exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
}

/// `Z / pZ` with elements in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Panics unless `p` is prime and below `2^32`.
    pub fn new(p: u64) -> Self {
        assert!(p < 1 << 32 && crate::numth::is_prime(p), "unsupported modulus {p}");
        PrimeField { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced")
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }

    fn mul_series(&self, a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
        let p = self.p as u128;
        let mut acc = vec![0u128; n];
        for (i, &x) in a.iter().enumerate().take(n) {
            if x == 0 {
                continue;
            }
            for (slot, &y) in acc[i..].iter_mut().zip(b) {
                *slot += (x * y) as u128;
            }
            // keep accumulators far from overflow
            if i % 1024 == 1023 {
                acc.iter_mut().for_each(|s| *s %= p);
            }
        }
        acc.into_iter().map(|s| (s % p) as u64).collect()
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        inv_mod(*a, self.p)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> usize {
        1
    }
    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        rng.next_u64() % self.p
    }
    fn pow(&self, a: &u64, e: &BigUint) -> u64 {
        let e = e % BigUint::from(self.p - 1);
        if *a == 0 {
            return if e.is_zero() { 1 } else { 0 };
        }
        pow_mod(*a, e.to_u64().expect("reduced"), self.p)
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
    fn scale_int(&self, a: &u64, c: u64) -> u64 {
        a * c % self.p
    }
}

/// `F_p[x] / (m)` for a monic irreducible `m` of degree `e`; elements are
/// coefficient vectors of length `e`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtField {
    base: PrimeField,
    modulus: Vec<u64>,
}

impl ExtField {
    /// `modulus` is monic, constant term first; irreducibility is the caller's
    /// responsibility.
    pub fn new(base: PrimeField, modulus: Vec<u64>) -> Self {
        assert!(modulus.len() >= 2 && *modulus.last().expect("nonempty") == 1, "modulus must be monic of degree >= 1");
        ExtField { base, modulus }
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn e(&self) -> usize {
        self.modulus.len() - 1
    }

    /// The class of `x`.
    pub fn generator(&self) -> Vec<u64> {
        let mut g = vec![0; self.e()];
        if self.e() == 1 {
            g[0] = self.base.neg(&self.modulus[0]);
        } else {
            g[1] = 1;
        }
        g
    }

    /// Embeds a prime-field element.
    pub fn lift(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.e()];
        v[0] = c;
        v
    }

    /// Reduces a polynomial of any degree modulo the modulus.
    pub fn reduce_poly(&self, mut r: Vec<u64>) -> Vec<u64> {
        let e = self.e();
        let p = self.base.p;
        for i in (e..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            for j in 0..e {
                let t = c * self.modulus[j] % p;
                let slot = &mut r[i - e + j];
                *slot = if *slot >= t { *slot - t } else { *slot + p - t };
            }
        }
        r.resize(e, 0);
        r
    }

    /// Value of a prime-field polynomial (constant term first) at `x`.
    pub fn eval_base_poly(&self, poly: &[u64], x: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for c in poly.iter().rev() {
            acc = self.mul(&acc, &x.to_vec());
            acc[0] = self.base.add(&acc[0], c);
        }
        acc
    }
}

impl ExtField {
    /// Minimal polynomial of `y` over `F_p`, monic, constant term first.
    pub fn minpoly(&self, y: &[u64]) -> Vec<u64> {
        let e = self.e();
        let f = self.base;
        // rows: (vector, combination of powers, pivot); each row vanishes at
        // the pivots of the rows before it
        let mut rows: Vec<(Vec<u64>, Vec<u64>, usize)> = Vec::new();
        let mut power = self.one();
        for j in 0..=e {
            let mut v = power.clone();
            let mut c = vec![0u64; e + 1];
            c[j] = 1;
            for (rv, rc, piv) in &rows {
                let t = v[*piv];
                if t != 0 {
                    for (a, b) in v.iter_mut().zip(rv) {
                        *a = f.sub(a, &f.mul(&t, b));
                    }
                    for (a, b) in c.iter_mut().zip(rc) {
                        *a = f.sub(a, &f.mul(&t, b));
                    }
                }
            }
            match v.iter().position(|&a| a != 0) {
                None => {
                    c.truncate(j + 1);
                    return c;
                }
                Some(piv) => {
                    let inv = f.inv(&v[piv]).expect("nonzero");
                    v.iter_mut().for_each(|a| *a = f.mul(a, &inv));
                    c.iter_mut().for_each(|a| *a = f.mul(a, &inv));
                    rows.push((v, c, piv));
                }
            }
            power = self.mul(&power, &y.to_vec());
        }
        unreachable!("e + 1 powers are always dependent")
    }
}

impl Ring for ExtField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.e()]
    }
    fn one(&self) -> Vec<u64> {
        self.lift(1)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let e = self.e();
        let p = self.base.p as u128;
        let mut acc = vec![0u128; 2 * e - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += (x * y) as u128;
            }
        }
        self.reduce_poly(acc.into_iter().map(|s| (s % p) as u64).collect())
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn from_int(&self, n: &BigInt) -> Vec<u64> {
        self.lift(self.base.from_int(n))
    }
}

impl Field for ExtField {
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        let f = self.base;
        let mut aa = a.clone();
        crate::census::poly::trim(&f, &mut aa);
        let (g, s, _) = crate::census::poly::ext_gcd(&f, &aa, &self.modulus);
        if g.len() != 1 {
            return None;
        }
        let c = f.inv(&g[0])?;
        let mut out = crate::census::poly::scale(&f, &s, &c);
        out.resize(self.e(), 0);
        Some(out)
    }
    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn degree(&self) -> usize {
        self.e()
    }
    fn random(&self, rng: &mut dyn RngCore) -> Vec<u64> {
        (0..self.e()).map(|_| rng.next_u64() % self.base.p).collect()
    }
    fn scale_int(&self, a: &Vec<u64>, c: u64) -> Vec<u64> {
        a.iter().map(|x| x * c % self.base.p).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_ops() {
        let f = PrimeField::new(691);
        assert_eq!(f.from_i64(-24), 667);
        assert_eq!(f.mul(&f.inv(&5).unwrap(), &5), 1);
        assert_eq!(f.pow_u64(&3, 690), 1);
        assert_eq!(f.pow_u64(&0, 0), 1);
        assert_eq!(f.mul_series(&[1, 2, 3], &[4, 5], 4), vec![4, 13, 22, 15]);
    }

    #[test]
    fn extension_field_ops() {
        // F_49 = F_7[x] / (x^2 + 1)
        let k = ExtField::new(PrimeField::new(7), vec![1, 0, 1]);
        let x = k.generator();
        assert_eq!(k.mul(&x, &x), vec![6, 0]);
        let a = vec![3, 5];
        assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), k.one());
        assert_eq!(k.pow_u64(&a, 48), k.one());
        assert_eq!(k.size(), BigUint::from(49u32));
        let r = k.pth_root(&a);
        assert_eq!(k.pow_u64(&r, 7), a);
        assert_eq!(k.eval_base_poly(&[1, 0, 1], &x), k.zero());
        assert_eq!(k.minpoly(&x), vec![1, 0, 1]);
        assert_eq!(k.minpoly(&k.lift(3)), vec![4, 1]);
        assert_eq!(k.minpoly(&k.zero()), vec![0, 1]);
        let m = k.minpoly(&a);
        assert_eq!(m.len(), 3);
        assert_eq!(k.eval_base_poly(&m, &a), k.zero());
    }

    #[test]
    fn degree_one_extension() {
        let k = ExtField::new(PrimeField::new(11), vec![8, 1]);
        assert_eq!(k.generator(), vec![3]);
        assert_eq!(k.mul(&vec![4], &vec![5]), vec![9]);
    }
}
