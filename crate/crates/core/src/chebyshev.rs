//! Audits of Chebyshev-type bounds `A x / ln x <= pi(x) <= B x / ln x` and of
//! consecutive-prime ratio bounds `p_next <= a p`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::enclosure::{exp, sqrt_rational, Enclosure, LogContext};
use crate::numth::{next_prime, NumthError, PrimeTable, Rational, SieveConfig};

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriState {
    Holds,
    Fails,
    Indeterminate,
}

impl TriState {
    pub fn as_str(self) -> &'static str {
        match self {
            TriState::Holds => "holds",
            TriState::Fails => "fails",
            TriState::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiAuditRecord {
    pub x: u64,
    pub pi_x: u64,
    pub lower_ok: TriState,
    pub upper_ok: TriState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapAuditRecord {
    pub p: u64,
    pub p_next: u64,
    pub bound: Rational,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapAudit {
    /// Pair maximizing `p_next / p`; `None` when the range holds no prime.
    pub max_ratio_pair: Option<GapAuditRecord>,
    pub violations: Vec<GapAuditRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChebyshevError {
    #[error(transparent)]
    Numth(#[from] NumthError),
    #[error("bound constants must be positive")]
    NonPositiveBound,
    #[error("ratio must exceed 6/5")]
    RatioTooSmall,
    #[error("lower end of range must be at least 2")]
    RangeStart,
}

/// Bits used for per-point log enclosures before refinement.
pub const POINT_PREC: u32 = 64;
/// Audit bounds are claimed for `x` strictly above this value.
pub const AUDIT_START: u64 = 30;

/// Number of primes `<= x`.
pub fn pi(x: u64, cfg: &SieveConfig) -> Result<u64, ChebyshevError> {
    if x > cfg.limit {
        return Err(NumthError::LimitExceeded { requested: x, limit: cfg.limit }.into());
    }
    let mut n = 0u64;
    crate::numth::sieve_range(0, x, cfg.segment_bytes, |_| n += 1);
    Ok(n)
}

/// Constants of a bound pair, pre-scaled for repeated comparisons.
struct Bounds {
    a_num: BigInt,
    a_den: BigInt,
    b_num: BigInt,
    b_den: BigInt,
}

impl Bounds {
    fn new(a: &Rational, b: &Rational) -> Result<Self, ChebyshevError> {
        if !a.is_positive() || !b.is_positive() {
            return Err(ChebyshevError::NonPositiveBound);
        }
        Ok(Bounds {
            a_num: a.numer().clone(),
            a_den: BigInt::from(a.denom().clone()),
            b_num: b.numer().clone(),
            b_den: BigInt::from(b.denom().clone()),
        })
    }

    /// Tri-states of `A x <= pi ln x` and `pi ln x <= B x` given `ln x` in `ln`.
    fn judge(&self, x: u64, pi_x: u64, ln: &Enclosure) -> (TriState, TriState) {
        let prec = ln.prec();
        let pi_b = BigInt::from(pi_x);
        let lo = ln.lo_scaled() * &pi_b;
        let hi = ln.hi_scaled() * &pi_b;
        let xs = BigInt::from(x) << prec;
        // A x <= pi ln x  <=>  A.num x 2^prec <= pi ln_scaled A.den
        let ax = &self.a_num * &xs;
        let lower = if &lo * &self.a_den >= ax {
            TriState::Holds
        } else if &hi * &self.a_den < ax {
            TriState::Fails
        } else {
            TriState::Indeterminate
        };
        let bx = &self.b_num * &xs;
        let upper = if &hi * &self.b_den <= bx {
            TriState::Holds
        } else if &lo * &self.b_den > bx {
            TriState::Fails
        } else {
            TriState::Indeterminate
        };
        (lower, upper)
    }
}

/// Evaluates both bounds at a single `x` with a log enclosure of `prec` bits.
pub fn judge_point(
    x: u64,
    pi_x: u64,
    a: &Rational,
    b: &Rational,
    prec: u32,
) -> Result<(TriState, TriState), ChebyshevError> {
    let bounds = Bounds::new(a, b)?;
    Ok(bounds.judge(x, pi_x, &LogContext::new(prec).ln_u64(x)))
}

/// Block of consecutive integers sharing one coarse log enclosure. Blocks are
/// aligned to a fixed grid so results do not depend on how a range is split.
fn block_end(x: u64) -> u64 {
    let j = 63 - x.leading_zeros();
    let size = if j > 10 { 1u64 << (j - 10) } else { 1 };
    (x / size) * size + size - 1
}

/// Audits every integer `x` with `30 < x <= max_x`.
pub fn audit_pi_bounds(
    table: &PrimeTable,
    max_x: u64,
    a: &Rational,
    b: &Rational,
) -> Result<Vec<PiAuditRecord>, ChebyshevError> {
    audit_pi_bounds_range(table, AUDIT_START + 1, max_x, a, b)
}

/// Audits integers in `[from, to]` (clipped to `x > 30`); concatenating the
/// results of adjacent ranges equals the result of their union.
pub fn audit_pi_bounds_range(
    table: &PrimeTable,
    from: u64,
    to: u64,
    a: &Rational,
    b: &Rational,
) -> Result<Vec<PiAuditRecord>, ChebyshevError> {
    let bounds = Bounds::new(a, b)?;
    let from = from.max(AUDIT_START + 1);
    let mut out = Vec::new();
    if from > to {
        return Ok(out);
    }
    table.pi(to)?;
    let primes = table.primes();
    let mut idx = primes.partition_point(|&p| (p as u64) < from);
    let coarse = LogContext::new(POINT_PREC);
    let point = LogContext::new(POINT_PREC);
    let fine = LogContext::new(4 * POINT_PREC);
    let mut x0 = from;
    while x0 <= to {
        let x1 = block_end(x0).min(to);
        let block = coarse.ln_u64(x0).hull(&coarse.ln_u64(x1));
        for x in x0..=x1 {
            while idx < primes.len() && primes[idx] as u64 <= x {
                idx += 1;
            }
            let pi_x = idx as u64;
            let (l, u) = bounds.judge(x, pi_x, &block);
            if l == TriState::Holds && u == TriState::Holds {
                continue;
            }
            let mut verdict = bounds.judge(x, pi_x, &point.ln_u64(x));
            if verdict.0 == TriState::Indeterminate || verdict.1 == TriState::Indeterminate {
                verdict = bounds.judge(x, pi_x, &fine.ln_u64(x));
            }
            if verdict != (TriState::Holds, TriState::Holds) {
                out.push(PiAuditRecord { x, pi_x, lower_ok: verdict.0, upper_ok: verdict.1 });
            }
        }
        x0 = x1 + 1;
    }
    Ok(out)
}

/// Scans consecutive primes `p < p_next` with `lo <= p <= hi`.
pub fn audit_gap_ratio(
    a: &Rational,
    lo: u64,
    hi: u64,
    cfg: &SieveConfig,
) -> Result<GapAudit, ChebyshevError> {
    if lo < 2 {
        return Err(ChebyshevError::RangeStart);
    }
    if hi > cfg.limit {
        return Err(NumthError::LimitExceeded { requested: hi, limit: cfg.limit }.into());
    }
    let mut ps = Vec::new();
    crate::numth::sieve_range(lo, hi, cfg.segment_bytes, |p| ps.push(p));
    if let Some(&last) = ps.last() {
        ps.push(next_prime(last).expect("next prime fits in 64 bits"));
    }
    let num = a.numer();
    let den = BigInt::from(a.denom().clone());
    let mut violations = Vec::new();
    let mut best: Option<(u64, u64)> = None;
    for w in ps.windows(2) {
        let (p, q) = (w[0], w[1]);
        if BigInt::from(q) * &den > num * BigInt::from(p) {
            violations.push(GapAuditRecord { p, p_next: q, bound: a.clone(), violated: true });
        }
        // strict comparison keeps the smaller p on ties
        if best.is_none_or(|(bp, bq)| (q as u128) * (bp as u128) > (bq as u128) * (p as u128)) {
            best = Some((p, q));
        }
    }
    let max_ratio_pair = best.map(|(p, q)| GapAuditRecord {
        p,
        p_next: q,
        bound: a.clone(),
        violated: BigInt::from(q) * &den > num * BigInt::from(p),
    });
    Ok(GapAudit { max_ratio_pair, violations })
}

/// A ratio bound given exactly or as the square root of a rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapRatio {
    Rational(Rational),
    Sqrt(Rational),
}

impl GapRatio {
    fn exceeds_six_fifths(&self) -> bool {
        match self {
            GapRatio::Rational(a) => *a > Rational::new(6, 5).expect("constant"),
            GapRatio::Sqrt(s) => *s > Rational::new(36, 25).expect("constant"),
        }
    }
}

/// Relative width demanded of [`gap_threshold`].
pub fn threshold_tolerance() -> Rational {
    Rational::new(1, 1_000_000).expect("constant")
}

/// Enclosure of `max(30, a^(6 / (5a - 6)))` with relative width at most `10^-6`.
pub fn gap_threshold(a: &GapRatio) -> Result<Enclosure, ChebyshevError> {
    if !a.exceeds_six_fifths() {
        return Err(ChebyshevError::RatioTooSmall);
    }
    let thirty = Rational::from_integer(30);
    let mut prec = 96u32;
    loop {
        let ctx = LogContext::new(prec);
        let (ln_a, exponent) = match a {
            GapRatio::Rational(q) => {
                let e = &Rational::from_integer(6) / &(&(q * &Rational::from_integer(5)) - &Rational::from_integer(6));
                (ctx.ln_rational(q), Enclosure::from_rational(&e, prec))
            }
            GapRatio::Sqrt(s) => {
                let root = sqrt_rational(s, prec);
                let denom = root.mul_int(&BigInt::from(5)).sub(&Enclosure::point(6, prec));
                let ln_half = ctx.ln_rational(s);
                let half = Enclosure::from_rational(&Rational::new(1, 2).expect("constant"), prec);
                let e = denom.recip_positive().map(|r| r.mul_int(&BigInt::from(6)));
                match e {
                    Some(e) => (ln_half.mul(&half), e),
                    None => {
                        prec *= 2;
                        continue;
                    }
                }
            }
        };
        let value = exp(&exponent.mul(&ln_a)).max_rational(&thirty);
        // relative width against the lower endpoint, which is at least 30
        let rel = &value.width() / &value.lo();
        if rel <= threshold_tolerance() {
            return Ok(value);
        }
        prec *= 2;
        if prec > 1 << 16 {
            return Ok(value);
        }
    }
}

/// Whether `x` lies above every point of the threshold enclosure; `None` if it
/// lies inside it.
pub fn exceeds_threshold(x: u64, threshold: &Enclosure) -> Option<bool> {
    let q = Rational::new(BigInt::from(x), BigUint::one()).expect("nonzero");
    match threshold.cmp_rational(&q)? {
        Ordering::Less => Some(true),
        Ordering::Equal | Ordering::Greater => Some(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn table(n: u64) -> PrimeTable {
        PrimeTable::build(n, &SieveConfig::default()).unwrap()
    }

    #[test]
    fn pi_values() {
        let cfg = SieveConfig::default();
        assert_eq!(pi(1, &cfg).unwrap(), 0);
        assert_eq!(pi(100, &cfg).unwrap(), 25);
        let small = SieveConfig { limit: 1000, segment_bytes: 64 };
        assert!(pi(1001, &small).is_err());
    }

    #[test]
    fn upper_bound_fails_at_100() {
        let t = table(2000);
        let recs = audit_pi_bounds(&t, 2000, &q("921/1000"), &q("5526/5000")).unwrap();
        let r = recs.iter().find(|r| r.x == 100).expect("x = 100 reported");
        assert_eq!((r.pi_x, r.lower_ok, r.upper_ok), (25, TriState::Holds, TriState::Fails));
        assert!(recs.iter().all(|r| r.lower_ok == TriState::Holds));
        assert!(recs.iter().all(|r| r.x > 30));
    }

    #[test]
    fn x31_lower_bound_holds() {
        let t = table(31);
        for a in ["921/1000", "1/2", "9/10"] {
            let recs = audit_pi_bounds(&t, 31, &q(a), &q("10")).unwrap();
            assert!(recs.is_empty(), "{a}");
        }
    }

    #[test]
    fn partition_independence() {
        let t = table(5000);
        let (a, b) = (q("921/1000"), q("5526/5000"));
        let whole = audit_pi_bounds(&t, 5000, &a, &b).unwrap();
        let mut parts = Vec::new();
        for (lo, hi) in [(0, 97), (98, 1024), (1025, 3333), (3334, 5000)] {
            parts.extend(audit_pi_bounds_range(&t, lo, hi, &a, &b).unwrap());
        }
        assert_eq!(whole, parts);
    }

    #[test]
    fn gap_ratio_examples() {
        let cfg = SieveConfig::default();
        let g = audit_gap_ratio(&q("44/30"), 31, 100_000, &cfg).unwrap();
        assert!(g.violations.is_empty());
        let m = g.max_ratio_pair.unwrap();
        assert_eq!((m.p, m.p_next), (31, 37));

        let g = audit_gap_ratio(&q("6/5"), 5, 30, &cfg).unwrap();
        let pairs: Vec<(u64, u64)> = g.violations.iter().map(|r| (r.p, r.p_next)).collect();
        assert!(pairs.contains(&(7, 11)));
        // 11*5 = 55 > 6*7 = 42; every listed pair satisfies the exact test
        for &(p, n) in &pairs {
            assert!(n * 5 > 6 * p);
        }
        assert_eq!(pairs, vec![(5, 7), (7, 11), (13, 17), (19, 23), (23, 29)]);

        let g = audit_gap_ratio(&q("2"), 2, 100_000, &cfg).unwrap();
        assert!(g.violations.is_empty());
        let m = g.max_ratio_pair.unwrap();
        assert_eq!((m.p, m.p_next), (3, 5));
        assert!(audit_gap_ratio(&q("2"), 1, 10, &cfg).is_err());
    }

    #[test]
    fn gap_ratio_tie_prefers_smaller_p() {
        let g = audit_gap_ratio(&q("2"), 3, 3, &SieveConfig::default()).unwrap();
        let m = g.max_ratio_pair.unwrap();
        assert_eq!((m.p, m.p_next), (3, 5));
        let empty = audit_gap_ratio(&q("2"), 24, 28, &SieveConfig::default()).unwrap();
        assert!(empty.max_ratio_pair.is_none());
    }

    #[test]
    fn thresholds() {
        let t = gap_threshold(&GapRatio::Rational(q("44/30"))).unwrap();
        assert_eq!(t.cmp_rational(&q("30")), Some(Ordering::Equal));
        let t = gap_threshold(&GapRatio::Rational(q("2"))).unwrap();
        assert!(t.contains_rational(&q("30")));
        let t = gap_threshold(&GapRatio::Sqrt(q("1499/1000"))).unwrap();
        // 50-digit reference: 21590.412091002794...
        assert!(t.contains_rational(&q("21590.412091002794027480908061631457944218315576994")));
        assert!(&t.width() / &t.lo() <= threshold_tolerance());
        assert_eq!(exceeds_threshold(21591, &t), Some(true));
        assert_eq!(exceeds_threshold(21590, &t), Some(false));
        assert_eq!(gap_threshold(&GapRatio::Rational(q("6/5"))), Err(ChebyshevError::RatioTooSmall));
        assert_eq!(gap_threshold(&GapRatio::Sqrt(q("36/25"))), Err(ChebyshevError::RatioTooSmall));
    }
}
