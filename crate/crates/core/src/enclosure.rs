//! Certified real enclosures on a dyadic grid.
//!
//! An [`Enclosure`] stores integers `lo <= hi` and a precision `prec`, and
//! represents the real interval `[lo / 2^prec, hi / 2^prec]`. Every operation
//! rounds the lower endpoint down and the upper endpoint up, so the true value
//! is never lost.

use alloc::string::String;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::numth::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_shr(x: &BigInt, k: u32) -> BigInt {
    // arithmetic shift on BigInt rounds toward negative infinity
    x >> k
}

fn ceil_shr(x: &BigInt, k: u32) -> BigInt {
    -((-x) >> k)
}

fn ceil_sqrt(n: &BigUint) -> BigUint {
    let r = n.sqrt();
    if &(&r * &r) < n {
        r + 1u32
    } else {
        r
    }
}

impl Enclosure {
    /// Builds `[lo, hi] / 2^prec`; panics if `lo > hi`.
    pub fn from_parts(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        assert!(lo <= hi, "inverted enclosure");
        Enclosure { lo, hi, prec }
    }

    pub fn point(n: i64, prec: u32) -> Self {
        let v = BigInt::from(n) << prec;
        Enclosure { lo: v.clone(), hi: v, prec }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let num = q.numer() << prec;
        let den = BigInt::from(q.denom().clone());
        let (lo, rem) = num.div_mod_floor(&den);
        let hi = if rem.is_zero() { lo.clone() } else { &lo + 1 };
        Enclosure { lo, hi, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo(&self) -> Rational {
        Rational::new(self.lo.clone(), BigInt::one() << self.prec).expect("nonzero")
    }

    pub fn hi(&self) -> Rational {
        Rational::new(self.hi.clone(), BigInt::one() << self.prec).expect("nonzero")
    }

    /// Interval hull of two enclosures at the first one's precision.
    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        let o = other.with_prec(self.prec);
        Enclosure {
            lo: (&self.lo).min(&o.lo).clone(),
            hi: (&self.hi).max(&o.hi).clone(),
            prec: self.prec,
        }
    }

    /// Re-expresses the enclosure at another precision, widening outward.
    pub fn with_prec(&self, prec: u32) -> Enclosure {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let d = prec - self.prec;
                Enclosure { lo: &self.lo << d, hi: &self.hi << d, prec }
            }
            Ordering::Less => {
                let d = self.prec - prec;
                Enclosure { lo: floor_shr(&self.lo, d), hi: ceil_shr(&self.hi, d), prec }
            }
        }
    }

    /// Width `hi - lo` as an exact rational.
    pub fn width(&self) -> Rational {
        Rational::new(&self.hi - &self.lo, BigInt::one() << self.prec).expect("nonzero")
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.cmp_lo(q) != Ordering::Greater && self.cmp_hi(q) != Ordering::Less
    }

    fn cmp_lo(&self, q: &Rational) -> Ordering {
        (&self.lo * BigInt::from(q.denom().clone())).cmp(&(q.numer() << self.prec))
    }

    fn cmp_hi(&self, q: &Rational) -> Ordering {
        (&self.hi * BigInt::from(q.denom().clone())).cmp(&(q.numer() << self.prec))
    }

    /// `Some(ord)` when every point of the enclosure compares to `q` as `ord`;
    /// `None` when the enclosure straddles `q`.
    pub fn cmp_rational(&self, q: &Rational) -> Option<Ordering> {
        if self.cmp_hi(q) == Ordering::Less {
            return Some(Ordering::Less);
        }
        if self.cmp_lo(q) == Ordering::Greater {
            return Some(Ordering::Greater);
        }
        if self.cmp_lo(q) == Ordering::Equal && self.cmp_hi(q) == Ordering::Equal {
            return Some(Ordering::Equal);
        }
        None
    }

    /// Exact scaling by an integer.
    pub fn mul_int(&self, c: &BigInt) -> Enclosure {
        let (a, b) = (&self.lo * c, &self.hi * c);
        let (lo, hi) = if c.is_negative() { (b, a) } else { (a, b) };
        Enclosure { lo, hi, prec: self.prec }
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        let o = o.with_prec(self.prec);
        Enclosure { lo: &self.lo + o.lo, hi: &self.hi + o.hi, prec: self.prec }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let o = o.with_prec(self.prec);
        let products = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let min = products.iter().min().expect("four products");
        let max = products.iter().max().expect("four products");
        Enclosure { lo: floor_shr(min, self.prec), hi: ceil_shr(max, self.prec), prec: self.prec }
    }

    /// Reciprocal of an enclosure lying strictly above zero.
    pub fn recip_positive(&self) -> Option<Enclosure> {
        if self.lo.sign() != Sign::Plus {
            return None;
        }
        let one = BigInt::one() << (2 * self.prec);
        let lo = one.div_floor(&self.hi);
        let (q, r) = one.div_mod_floor(&self.lo);
        let hi = if r.is_zero() { q } else { q + 1 };
        Some(Enclosure { lo, hi, prec: self.prec })
    }

    /// Pointwise maximum with a rational.
    pub fn max_rational(&self, q: &Rational) -> Enclosure {
        let r = Enclosure::from_rational(q, self.prec);
        Enclosure {
            lo: (&self.lo).max(&r.lo).clone(),
            hi: (&self.hi).max(&r.hi).clone(),
            prec: self.prec,
        }
    }

    /// Endpoints as decimals with `digits` fractional digits, the lower one
    /// rounded down and the upper one rounded up.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let den = BigInt::one() << self.prec;
        let lo = (&self.lo * &scale).div_floor(&den);
        let (q, r) = (&self.hi * &scale).div_mod_floor(&den);
        let hi = if r.is_zero() { q } else { q + 1 };
        (format_fixed(&lo, digits), format_fixed(&hi, digits))
    }
}

fn format_fixed(v: &BigInt, digits: usize) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    let mag = v.magnitude().to_str_radix(10);
    if v.is_negative() {
        out.push('-');
    }
    if digits == 0 {
        out.push_str(&mag);
        return out;
    }
    let padded = if mag.len() <= digits {
        let mut s = String::new();
        for _ in 0..=digits - mag.len() {
            s.push('0');
        }
        s.push_str(&mag);
        s
    } else {
        mag
    };
    let (ip, fp) = padded.split_at(padded.len() - digits);
    let _ = write!(out, "{ip}.{fp}");
    out
}

/// Sum of `atanh(a/b)` to `w` fractional bits, widened by a rigorous tail
/// bound. Requires `|a/b| <= 1/2`.
fn atanh_fixed(a: &BigInt, b: &BigInt, w: u32) -> (BigInt, BigInt) {
    debug_assert!(b.is_positive() && (a.magnitude() << 1u32) <= *b.magnitude());
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let a2 = a * a;
    let b2 = b * b;
    let mut num = a << w;
    let mut den = b.clone();
    let mut i: u32 = 0;
    loop {
        let d = &den * (2 * i + 1);
        let (q, r) = num.div_mod_floor(&d);
        if num.magnitude() <= d.magnitude() {
            // the remaining terms sum to at most twice this one in magnitude
            lo -= 2;
            hi += 2 + 1;
            lo += &q;
            hi += &q;
            break;
        }
        lo += &q;
        hi += if r.is_zero() { q } else { q + 1 };
        num *= &a2;
        den *= &b2;
        i += 1;
    }
    (lo, hi)
}

/// Logarithms of positive rationals at a fixed precision, with `ln 2` computed once.
#[derive(Debug, Clone)]
pub struct LogContext {
    prec: u32,
    guard: u32,
    ln2: (BigInt, BigInt),
}

impl LogContext {
    pub fn new(prec: u32) -> Self {
        let guard = 16;
        let w = prec + guard;
        // ln 2 = 2 atanh(1/3)
        let (lo, hi) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
        LogContext { prec, guard, ln2: (lo << 1u32, hi << 1u32) }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn ln2(&self) -> Enclosure {
        let w = self.prec + self.guard;
        Enclosure { lo: self.ln2.0.clone(), hi: self.ln2.1.clone(), prec: w }.with_prec(self.prec)
    }

    /// Enclosure of `ln(n/d)` for positive integers `n`, `d`.
    pub fn ln_ratio(&self, n: &BigUint, d: &BigUint) -> Enclosure {
        assert!(!n.is_zero() && !d.is_zero(), "ln of a non-positive number");
        let w = self.prec + self.guard;
        let mut k = n.bits() as i64 - d.bits() as i64;
        let scaled = |k: i64| -> (BigUint, BigUint) {
            if k >= 0 {
                (n.clone(), d << (k as u64))
            } else {
                (n << ((-k) as u64), d.clone())
            }
        };
        let (mut u, mut v) = scaled(k);
        // move u/v into [1/sqrt 2, sqrt 2]
        if &u * &u > (&v * &v) << 1u32 {
            k += 1;
            (u, v) = scaled(k);
        } else if (&u * &u) << 1u32 < &v * &v {
            k -= 1;
            (u, v) = scaled(k);
        }
        let a = BigInt::from(u.clone()) - BigInt::from(v.clone());
        let b = BigInt::from(u) + BigInt::from(v);
        let (tlo, thi) = atanh_fixed(&a, &b, w);
        let kk = BigInt::from(k);
        let (l2lo, l2hi) = if k >= 0 {
            (&self.ln2.0 * &kk, &self.ln2.1 * &kk)
        } else {
            (&self.ln2.1 * &kk, &self.ln2.0 * &kk)
        };
        let lo = l2lo + (tlo << 1u32);
        let hi = l2hi + (thi << 1u32);
        Enclosure { lo, hi, prec: w }.with_prec(self.prec)
    }

    pub fn ln_u64(&self, x: u64) -> Enclosure {
        self.ln_ratio(&BigUint::from(x), &BigUint::one())
    }

    pub fn ln_rational(&self, q: &Rational) -> Enclosure {
        assert!(q.is_positive(), "ln of a non-positive number");
        self.ln_ratio(q.numer().magnitude(), q.denom())
    }
}

/// Enclosure of `exp(x)` at `x`'s precision.
pub fn exp(x: &Enclosure) -> Enclosure {
    let prec = x.prec;
    let lo = exp_endpoint(&x.lo, prec, false);
    let hi = exp_endpoint(&x.hi, prec, true);
    Enclosure { lo, hi, prec }
}

/// One-sided bound for `exp(m / 2^prec)`, scaled by `2^prec`.
fn exp_endpoint(m: &BigInt, prec: u32, upper: bool) -> BigInt {
    // halve until |r| < 2^-8, then square back
    let int_bits = m.magnitude().bits().saturating_sub(prec as u64) as u32;
    let s = int_bits + 8;
    let guard = 2 * s + 24;
    let w = prec + guard;
    // r = m / 2^(prec + s), held exactly as rn / 2^(prec + s)
    let rd_shift = prec + s;
    let mut sum = BigInt::one() << w;
    let mut term_num = BigInt::one() << w; // r^i / i! scaled, carried exactly as a rational
    let mut term_den = BigInt::one();
    let mut i: u32 = 1;
    loop {
        term_num *= m;
        term_den = (term_den << rd_shift) * i;
        let (q, r) = term_num.div_mod_floor(&term_den);
        if term_num.magnitude() <= term_den.magnitude() {
            sum += if upper { BigInt::from(3) } else { BigInt::from(-2) };
            sum += q;
            break;
        }
        sum += if upper && !r.is_zero() { q + 1 } else { q };
        i += 1;
    }
    if sum.sign() == Sign::Minus {
        sum = BigInt::zero();
    }
    for _ in 0..s {
        let sq = &sum * &sum;
        sum = if upper { ceil_shr(&sq, w) } else { floor_shr(&sq, w) };
    }
    if upper {
        ceil_shr(&sum, guard)
    } else {
        floor_shr(&sum, guard)
    }
}

/// Enclosure of `sqrt(q)` for a non-negative rational.
pub fn sqrt_rational(q: &Rational, prec: u32) -> Enclosure {
    assert!(!q.numer().is_negative(), "sqrt of a negative number");
    let num = q.numer().magnitude() << (2 * prec);
    let den = q.denom();
    let (fl, rem) = num.div_rem(den);
    let cl = if rem.is_zero() { fl.clone() } else { &fl + 1u32 };
    Enclosure {
        lo: BigInt::from(fl.sqrt()),
        hi: BigInt::from(ceil_sqrt(&cl)),
        prec,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    // 60-digit reference values
    const LN2: &str = "0.693147180559945309417232121458176568075500134360255254120680";
    const LN100: &str = "4.605170185988091368035982909368728415202202977257545952066655";
    const LN31: &str = "3.433987204485146245929164324542357210449938930480591971756718";
    const E: &str = "2.718281828459045235360287471352662497757247093699959574966967";

    #[test]
    fn ln_contains_reference_values() {
        for prec in [32, 64, 160] {
            let ctx = LogContext::new(prec);
            assert!(ctx.ln2().contains_rational(&q(LN2)));
            let l100 = ctx.ln_u64(100);
            assert!(l100.contains_rational(&q(LN100)), "{prec}");
            assert!(ctx.ln_u64(31).contains_rational(&q(LN31)));
            assert!(l100.width() <= Rational::new(16, BigInt::one() << prec).unwrap());
        }
    }

    #[test]
    fn ln_small_and_fractional() {
        let ctx = LogContext::new(80);
        let l1 = ctx.ln_u64(1);
        assert!(l1.contains_rational(&Rational::zero()));
        let half = ctx.ln_rational(&q("1/2"));
        assert!(half.contains_rational(&-q(LN2)));
        let sum = ctx.ln_u64(4).add(&ctx.ln_u64(25));
        assert!(sum.contains_rational(&q(LN100)));
    }

    #[test]
    fn exp_contains_e() {
        for prec in [24, 64, 128] {
            let one = Enclosure::point(1, prec);
            let e = exp(&one);
            assert!(e.contains_rational(&q(E)), "{prec}");
            let back = LogContext::new(prec).ln_u64(100);
            let hundred = exp(&back);
            assert!(hundred.contains_rational(&q("100")));
            if prec >= 64 {
                assert!(hundred.width() < q("1/1000000"));
            }
        }
        let inv = exp(&Enclosure::point(-1, 64)).mul(&exp(&Enclosure::point(1, 64)));
        assert!(inv.contains_rational(&q("1")));
    }

    #[test]
    fn sqrt_encloses() {
        let r = sqrt_rational(&q("2"), 64);
        assert!(r.mul(&r).contains_rational(&q("2")));
        let four = sqrt_rational(&q("16/9"), 10);
        assert_eq!(four.cmp_rational(&q("4/3")), None);
        assert!(four.contains_rational(&q("4/3")));
        assert_eq!(sqrt_rational(&q("4"), 8).cmp_rational(&q("2")), Some(Ordering::Equal));
    }

    #[test]
    fn tri_state_comparison() {
        let ctx = LogContext::new(64);
        let l = ctx.ln_u64(100);
        assert_eq!(l.cmp_rational(&q("46/10")), Some(Ordering::Greater));
        assert_eq!(l.cmp_rational(&q("461/100")), Some(Ordering::Less));
        let coarse = LogContext::new(4).ln_u64(100);
        assert_eq!(coarse.cmp_rational(&q(LN100)), None);
    }

    #[test]
    fn decimal_rounding_is_outward() {
        let e = Enclosure::from_rational(&q("1/3"), 40);
        let (lo, hi) = e.to_decimal(5);
        assert_eq!((lo.as_str(), hi.as_str()), ("0.33333", "0.33334"));
        let n = Enclosure::from_rational(&q("-1/3"), 40).to_decimal(3);
        assert_eq!((n.0.as_str(), n.1.as_str()), ("-0.334", "-0.333"));
        assert_eq!(Enclosure::point(30, 8).to_decimal(2).0, "30.00".to_string());
        assert_eq!(Enclosure::from_rational(&q("1/1000"), 30).to_decimal(2).0, "0.00");
    }

    #[test]
    fn reciprocal_and_hull() {
        let x = Enclosure::from_rational(&q("3"), 32);
        let r = x.recip_positive().unwrap();
        assert!(r.contains_rational(&q("1/3")));
        assert!(Enclosure::point(0, 8).recip_positive().is_none());
        let h = Enclosure::point(1, 8).hull(&Enclosure::point(2, 8));
        assert!(h.contains_rational(&q("3/2")));
    }
}
