use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Num, One, Signed, Zero};

use super::NumthError;

/// Exact rational with a positive denominator, always in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigUint,
}

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, NumthError> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(NumthError::ZeroDenominator);
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        Ok(Self::reduce(num, den.into_parts().1))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational { num: n.into(), den: BigUint::one() }
    }

    fn reduce(num: BigInt, den: BigUint) -> Self {
        let g = num.magnitude().gcd(&den);
        if g.is_one() || g.is_zero() {
            return Rational { num, den };
        }
        let sign = num.sign();
        let mag = num.magnitude() / &g;
        Rational { num: BigInt::from_biguint(sign, mag), den: den / g }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    pub fn is_positive(&self) -> bool {
        self.num.sign() == Sign::Plus
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn recip(&self) -> Result<Self, NumthError> {
        Rational::new(BigInt::from(self.den.clone()), self.num.clone())
    }

    /// Largest integer not above `self`.
    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&BigInt::from(self.den.clone()))
    }

    /// Smallest integer not below `self`.
    pub fn ceil(&self) -> BigInt {
        -((-self.num.clone()).div_floor(&BigInt::from(self.den.clone())))
    }
}

/// Exact order by cross-multiplication.
pub fn rational_cmp(a: &Rational, b: &Rational) -> Ordering {
    let lhs = &a.num * BigInt::from(b.den.clone());
    let rhs = &b.num * BigInt::from(a.den.clone());
    lhs.cmp(&rhs)
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        rational_cmp(self, other)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Accepts `n`, `n/d`, and finite decimals such as `-1.2`.
impl FromStr for Rational {
    type Err = NumthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumthError::ParseRational(s.to_string());
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n = parse_int(n.trim()).ok_or_else(bad)?;
            let d = parse_int(d.trim()).ok_or_else(bad)?;
            return Rational::new(n, d);
        }
        if let Some((ip, fp)) = t.split_once('.') {
            if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = ip.starts_with('-');
            let ip = if ip.is_empty() || ip == "-" || ip == "+" {
                BigInt::zero()
            } else {
                parse_int(ip).ok_or_else(bad)?
            };
            let frac = BigInt::from_str_radix(fp, 10).map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), fp.len());
            let mag = ip.abs() * &scale + frac;
            return Rational::new(if negative { -mag } else { mag }, scale);
        }
        Ok(Rational::from_integer(parse_int(t).ok_or_else(bad)?))
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str_radix(s.strip_prefix('+').unwrap_or(s), 10).ok()
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<Rational> for String {
    fn from(r: Rational) -> String {
        r.to_string()
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, o: &Rational) -> Rational {
        let den = &self.den * &o.den;
        let num = &self.num * BigInt::from(o.den.clone()) + &o.num * BigInt::from(self.den.clone());
        Rational::reduce(num, den)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, o: &Rational) -> Rational {
        self + &(-o)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, o: &Rational) -> Rational {
        Rational::reduce(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &Rational {
    type Output = Rational;
    /// Panics on division by zero.
    fn div(self, o: &Rational) -> Rational {
        self * &o.recip().expect("division by zero rational")
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -self.num.clone(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational { (&self).$m(&o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn comparisons() {
        assert_eq!(rational_cmp(&q("44/30"), &q("3/2")), Ordering::Less);
        assert_eq!(rational_cmp(&q("6/5"), &q("12/10")), Ordering::Equal);
        assert_eq!(q("6/5"), q("1.2"));
        // (m+1)P vs (2m+1)p_n - m at (263, 251, 65)
        let r = Rational::new(66 * 263, 131 * 251 - 65).unwrap();
        assert_eq!(r, q("17358/32816"));
        assert_eq!(rational_cmp(&r, &q("1")), Ordering::Less);
    }

    #[test]
    fn normalization() {
        let r = Rational::new(4, -6).unwrap();
        assert_eq!(r.to_string(), "-2/3");
        assert_eq!(r.denom(), &BigUint::from(3u8));
        assert_eq!(Rational::new(1, 0), Err(NumthError::ZeroDenominator));
        assert_eq!(Rational::new(0, -5).unwrap().to_string(), "0");
    }

    #[test]
    fn parsing() {
        assert_eq!(q("0.921"), q("921/1000"));
        assert_eq!(q("-.5"), q("-1/2"));
        assert_eq!(q("-0.5"), q("-1/2"));
        assert_eq!(q("+7"), q("7/1"));
        assert_eq!(q(" 5526 / 5000 "), q("2763/2500"));
        for bad in ["", "1/", "/2", "a/b", "1.2.3", "1.", "--1", "1/0", "1e5"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q("1/2") + q("1/3"), q("5/6"));
        assert_eq!(q("1/2") - q("1/3"), q("1/6"));
        assert_eq!(q("2/3") * q("9/4"), q("3/2"));
        assert_eq!(q("2/3") / q("4/9"), q("3/2"));
        assert_eq!(q("-7/2").floor(), BigInt::from(-4));
        assert_eq!(q("-7/2").ceil(), BigInt::from(-3));
        assert_eq!(q("7/2").ceil(), BigInt::from(4));
    }
}
