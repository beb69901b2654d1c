//! Truncated power series in `q`.

use alloc::vec;
use alloc::vec::Vec;

use super::field::{Integers, PrimeField, Ring};

/// Coefficients `a_0..=a_N` of a series known to precision `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> QSeries<R> {
    /// Panics on an empty coefficient list.
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a_0");
        QSeries { ring, coeffs }
    }

    pub fn zero(ring: R, prec: usize) -> Self {
        let coeffs = vec![ring.zero(); prec + 1];
        QSeries { ring, coeffs }
    }

    pub fn one(ring: R, prec: usize) -> Self {
        let mut s = Self::zero(ring, prec);
        s.coeffs[0] = s.ring.one();
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `a_n`, or `None` beyond the precision.
    pub fn coeff(&self, n: usize) -> Option<&R::Elem> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let n = prec.min(self.prec()) + 1;
        QSeries { ring: self.ring.clone(), coeffs: self.coeffs[..n].to_vec() }
    }

    /// Order of vanishing at `q = 0` within the known precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.ring.is_zero(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.ring.add(a, b)).collect();
        QSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.ring.sub(a, b)).collect();
        QSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect();
        QSeries { ring: self.ring.clone(), coeffs }
    }

    /// Product truncated to the smaller precision.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = self.ring.mul_series(&self.coeffs, &other.coeffs, n);
        QSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.ring.clone(), self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Applies a ring map coefficientwise.
    pub fn map<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> QSeries<S> {
        QSeries { coeffs: self.coeffs.iter().map(f).collect(), ring: target }
    }
}

impl QSeries<Integers> {
    pub fn reduce(&self, fp: PrimeField) -> QSeries<PrimeField> {
        self.map(fp, |c| fp.from_int(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ints(v: &[i64]) -> QSeries<Integers> {
        QSeries::new(Integers, v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn arithmetic_truncates() {
        let a = ints(&[1, 1, 0, 0]);
        let b = ints(&[1, -1, 0]);
        let prod = a.mul(&b);
        assert_eq!(prod.prec(), 2);
        assert_eq!(prod, ints(&[1, 0, -1]));
        assert_eq!(a.add(&b).prec(), 2);
        assert_eq!(a.pow(3), ints(&[1, 3, 3, 1]));
        assert_eq!(a.coeff(4), None);
        assert_eq!(ints(&[0, 0, 5]).valuation(), Some(2));
    }

    #[test]
    fn reduction() {
        let f = PrimeField::new(7);
        let a = ints(&[-1, 8, 14]);
        assert_eq!(a.reduce(f).coeffs(), &[6, 1, 0]);
    }
}
