//! Induction-step certificates `p_n -> P` and the nebentype-exponent window.
//!
//! A step uses an odd prime power `ell^r = 2m + 1` exactly dividing `P - 1`.
//! The characters of order dividing `ell^r` at `P` have exponents in steps of
//! `s = (P - 1) / ell^r`, and the step is admissible when the middle window
//! `(m s, (m + 1) s]` keeps both residual weights at most `p_n + 1`.

use alloc::vec::Vec;

use crate::numth::{
    exact_odd_prime_power_divisors, is_fermat_prime, is_prime, next_prime, NumthError, PrimeTable,
    Rational, SieveConfig,
};

/// One verified step of the prime ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub p_n: u64,
    pub big_p: u64,
    pub ell: u64,
    pub r: u32,
    pub m: u64,
    pub s: u64,
}

impl Certificate {
    /// `ell^r`, equal to `2m + 1`.
    pub fn prime_power(&self) -> u64 {
        2 * self.m + 1
    }

    /// Left side `(m + 1) P` of the cleared inequality.
    pub fn inequality_lhs(&self) -> u128 {
        (self.m as u128 + 1) * self.big_p as u128
    }

    /// Right side `(2m + 1) p_n - m` of the cleared inequality.
    pub fn inequality_rhs(&self) -> u128 {
        (2 * self.m as u128 + 1) * self.p_n as u128 - self.m as u128
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LadderError {
    #[error("no certificate for p_n = {p_n}")]
    NoCertificate { p_n: u64 },
    #[error("{value} does not exactly divide {n}")]
    Divisibility { value: u64, n: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime power ell^r")]
    BadPrimePower(u64),
    #[error("weight {k} must be even and at least 2")]
    BadWeight { k: u64 },
    #[error("chain must start at a prime >= 5, got {0}")]
    BadStart(u64),
    #[error(transparent)]
    Numth(#[from] NumthError),
}

/// `(m + 1) P <= (2m + 1) p_n - m`, in exact integers.
pub fn check_inequality(big_p: u64, p_n: u64, m: u64) -> bool {
    let (big_p, p_n, m) = (big_p as u128, p_n as u128, m as u128);
    (m + 1) * big_p + m <= (2 * m + 1) * p_n
}

/// `p_n + 1 >= (m+1)(P-1)/(2m+1) + 2` and `p_n + 1 >= P - m(P-1)/(2m+1)`,
/// evaluated with exact rationals. Requires `2m + 1 | P - 1`.
pub fn containment_bounds(big_p: u64, p_n: u64, m: u64) -> Result<bool, LadderError> {
    let q = 2 * m + 1;
    if big_p == 0 || (big_p - 1) % q != 0 {
        return Err(LadderError::Divisibility { value: q, n: big_p.saturating_sub(1) });
    }
    let int = |n: u64| Rational::from_integer(n);
    let block = Rational::new(big_p - 1, q).expect("odd divisor");
    let top = int(p_n + 1);
    let first = &(&int(m + 1) * &block) + &int(2);
    let second = &int(big_p) - &(&int(m) * &block);
    Ok(first <= top && second <= top)
}

fn certificate_for(p_n: u64, big_p: u64) -> Option<Certificate> {
    if is_fermat_prime(big_p) {
        return None;
    }
    exact_odd_prime_power_divisors(big_p - 1)
        .into_iter()
        .rev()
        .map(|pp| Certificate {
            p_n,
            big_p,
            ell: pp.ell,
            r: pp.r,
            m: (pp.value - 1) / 2,
            s: (big_p - 1) / pp.value,
        })
        .find(|c| check_inequality(c.big_p, c.p_n, c.m))
}

/// Least non-Fermat prime `P` in `(p_n, 2 p_n]` with an exact odd prime-power
/// divisor of `P - 1` passing the inequality; the largest such divisor is used.
pub fn find_certificate(p_n: u64) -> Result<Certificate, LadderError> {
    if !is_prime(p_n) {
        return Err(LadderError::NotPrime(p_n));
    }
    let mut big_p = p_n;
    loop {
        big_p = match next_prime(big_p) {
            Some(q) if q <= 2 * p_n => q,
            _ => return Err(LadderError::NoCertificate { p_n }),
        };
        if let Some(c) = certificate_for(p_n, big_p) {
            return Ok(c);
        }
    }
}

/// Checks that `ell^r` is an odd prime power exactly dividing `P - 1`;
/// returns `(ell^r, s)`.
fn coset_data(big_p: u64, ell: u64, r: u32) -> Result<(u64, u64), LadderError> {
    if !is_prime(big_p) {
        return Err(LadderError::NotPrime(big_p));
    }
    let pp = crate::numth::PrimePower::new(ell, r).ok_or(LadderError::BadPrimePower(ell))?;
    let n = big_p - 1;
    if n % pp.value != 0 || (n / pp.value) % ell == 0 {
        return Err(LadderError::Divisibility { value: pp.value, n });
    }
    Ok((pp.value, n / pp.value))
}

fn check_weight(k: u64) -> Result<(), LadderError> {
    if k < 2 || k % 2 != 0 {
        return Err(LadderError::BadWeight { k });
    }
    Ok(())
}

/// The `c` in `[0, P - 2]` with `c = 0 mod ell^r` and `c = k - 2 mod s`.
pub fn coset_base(k: u64, big_p: u64, ell: u64, r: u32) -> Result<u64, LadderError> {
    check_weight(k)?;
    let (q, s) = coset_data(big_p, ell, r)?;
    Ok(crt_base(k, q, s))
}

fn crt_base(k: u64, q: u64, s: u64) -> u64 {
    let target = (k - 2) % s;
    // c = q t with q t = target mod s
    let inv = crate::numth::inv_mod(q % s, s).unwrap_or(0);
    let t = ((target as u128 * inv as u128) % s.max(1) as u128) as u64;
    q * t
}

/// The exponent selected for a weight, with its window and residual weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NebentypeSelection {
    pub k: u64,
    pub big_p: u64,
    pub ell: u64,
    pub r: u32,
    pub c: u64,
    pub s: u64,
    pub m: u64,
    pub window_lo: u64,
    pub window_hi: u64,
    pub j: u64,
    /// `(j + 2, P + 1 - j)`.
    pub weights: (u64, u64),
    /// Coset elements found inside the window; always 1.
    pub window_hits: u64,
}

impl NebentypeSelection {
    /// The residual weights as an ascending set.
    pub fn weight_set(&self) -> Vec<u64> {
        let (a, b) = self.weights;
        let mut v = alloc::vec![a.min(b), a.max(b)];
        v.dedup();
        v
    }

    pub fn contained_in(&self, p_n: u64) -> bool {
        let (a, b) = self.weights;
        (2..=p_n + 1).contains(&a) && (2..=p_n + 1).contains(&b)
    }
}

/// The coset element in `(m s, (m + 1) s]` and its residual weights.
pub fn select_nebentype(k: u64, big_p: u64, ell: u64, r: u32) -> Result<NebentypeSelection, LadderError> {
    check_weight(k)?;
    let (q, s) = coset_data(big_p, ell, r)?;
    let c = crt_base(k, q, s);
    let m = (q - 1) / 2;
    let (window_lo, window_hi) = (m * s, (m + 1) * s);
    let residue = c % s;
    let j = if residue == 0 { window_hi } else { window_lo + residue };
    // integers congruent to c mod s in (lo, hi]
    let count = |x: u64| (x + s - residue) / s;
    let window_hits = count(window_hi) - count(window_lo);
    Ok(NebentypeSelection {
        k,
        big_p,
        ell,
        r,
        c,
        s,
        m,
        window_lo,
        window_hi,
        j,
        weights: (j + 2, big_p + 1 - j),
        window_hits,
    })
}

/// Every even `j` in the coset with `1 <= j <= P - 2` whose residual weights
/// are both at most `p_n + 1`, ascending.
pub fn admissible_exponents(
    k: u64,
    big_p: u64,
    p_n: u64,
    ell: u64,
    r: u32,
) -> Result<Vec<u64>, LadderError> {
    let c = coset_base(k, big_p, ell, r)?;
    let s = (big_p - 1) / ell.pow(r);
    Ok((c % s..=big_p - 2)
        .step_by(s as usize)
        .filter(|&j| j >= 1 && j % 2 == 0 && exponent_contained(j, big_p, p_n))
        .collect())
}

/// Whether `j + 2` and `P + 1 - j` both lie in `[2, p_n + 1]`.
pub fn exponent_contained(j: u64, big_p: u64, p_n: u64) -> bool {
    j + 2 <= p_n + 1 && big_p + 1 <= p_n + 1 + j && j + 1 <= big_p
}

/// The selection for one weight together with `p_n` and the admissible set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NebentypeChoice {
    pub p_n: u64,
    pub selection: NebentypeSelection,
    pub admissible: Vec<u64>,
}

pub fn nebentype_choice(k: u64, big_p: u64, p_n: u64, ell: u64, r: u32) -> Result<NebentypeChoice, LadderError> {
    Ok(NebentypeChoice {
        p_n,
        selection: select_nebentype(k, big_p, ell, r)?,
        admissible: admissible_exponents(k, big_p, p_n, ell, r)?,
    })
}

/// Why a prime failed verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepFailure {
    NoCertificate,
    WeightNotContained { k: u64 },
    WindowNotUnique { k: u64, hits: u64 },
}

/// Per-weight result inside a verified step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCheck {
    pub k: u64,
    pub c: u64,
    pub j: u64,
    pub weights: (u64, u64),
    pub contained: bool,
}

/// The outcome of verifying one prime `p_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub p_n: u64,
    pub certificate: Option<Certificate>,
    pub weights: Vec<WeightCheck>,
    pub failures: Vec<StepFailure>,
}

impl StepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Finds a certificate for `p_n` and checks every even weight in `[p_n + 2, P + 1]`.
pub fn verify_prime(p_n: u64) -> StepReport {
    let cert = match find_certificate(p_n) {
        Ok(c) => c,
        Err(_) => {
            return StepReport {
                p_n,
                certificate: None,
                weights: Vec::new(),
                failures: alloc::vec![StepFailure::NoCertificate],
            }
        }
    };
    let mut weights = Vec::new();
    let mut failures = Vec::new();
    let mut k = p_n + 2 + (p_n + 2) % 2;
    while k <= cert.big_p + 1 {
        let sel = select_nebentype(k, cert.big_p, cert.ell, cert.r).expect("certificate data is valid");
        let contained = sel.contained_in(p_n);
        if sel.window_hits != 1 {
            failures.push(StepFailure::WindowNotUnique { k, hits: sel.window_hits });
        }
        if !contained {
            failures.push(StepFailure::WeightNotContained { k });
        }
        weights.push(WeightCheck { k, c: sel.c, j: sel.j, weights: sel.weights, contained });
        k += 2;
    }
    StepReport { p_n, certificate: Some(cert), weights, failures }
}

/// Summary of [`verify_range`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeReport {
    pub lo: u64,
    pub hi: u64,
    pub checked: u64,
    pub failures: Vec<StepReport>,
}

/// Primes `p_n` with `lo <= p_n <= hi` drawn from the table.
pub fn primes_in(table: &PrimeTable, lo: u64, hi: u64) -> Result<&[u32], LadderError> {
    let all = table.primes_up_to(hi)?;
    let start = all.partition_point(|&p| (p as u64) < lo);
    Ok(&all[start..])
}

/// Runs [`verify_prime`] on every prime in `[lo, hi]`.
pub fn verify_range(lo: u64, hi: u64, cfg: &SieveConfig) -> Result<RangeReport, LadderError> {
    let table = PrimeTable::build(hi, cfg)?;
    let primes = primes_in(&table, lo, hi)?;
    let failures = primes
        .iter()
        .map(|&p| verify_prime(p as u64))
        .filter(|rep| !rep.passed())
        .collect();
    Ok(RangeReport { lo, hi, checked: primes.len() as u64, failures })
}

/// Certificates from `start` upward, stopping before the first step whose
/// `P` exceeds `limit`.
pub fn chain(start: u64, limit: u64) -> Result<Vec<Certificate>, LadderError> {
    if start < 5 || !is_prime(start) {
        return Err(LadderError::BadStart(start));
    }
    let mut out = Vec::new();
    let mut p = start;
    loop {
        let cert = find_certificate(p)?;
        if cert.big_p > limit {
            return Ok(out);
        }
        out.push(cert);
        p = cert.big_p;
    }
}

/// Verdict on one tabulated exponent choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaperVerdict {
    /// Every tabulated exponent is admissible.
    Pass,
    /// Some tabulated exponent lies outside the coset, although its residual
    /// weights are contained.
    OutsideCoset,
    /// Some tabulated exponent has residual weights above `p_n + 1`.
    NotContained,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperCase {
    pub big_p: u64,
    pub p_n: u64,
    pub k: u64,
    pub ell: u64,
    pub r: u32,
    pub tabulated: Vec<u64>,
    pub admissible: Vec<u64>,
    pub selected_j: u64,
    pub selected_weights: Vec<u64>,
    pub tabulated_contained: bool,
    pub verdict: PaperVerdict,
}

/// The hand-chosen small-weight exponents, as `(P, p_n, weights, exponents)`.
pub const SMALL_WEIGHT_TABLE: &[(u64, u64, &[u64], &[u64])] = &[
    (7, 5, &[8], &[2, 4]),
    (11, 7, &[10, 12], &[4, 6]),
    (19, 13, &[14, 16, 18, 20], &[8, 10]),
    (29, 23, &[22, 26, 30], &[16]),
    (29, 23, &[24, 28], &[14]),
    (31, 29, &[32], &[16]),
];

/// Evaluates each entry of [`SMALL_WEIGHT_TABLE`] against the coset model.
pub fn reproduce_paper_choices() -> Vec<PaperCase> {
    let mut out = Vec::new();
    for &(big_p, p_n, ks, exps) in SMALL_WEIGHT_TABLE {
        let cert = find_certificate(p_n).expect("table primes have certificates");
        debug_assert_eq!(cert.big_p, big_p);
        for &k in ks {
            let sel = select_nebentype(k, big_p, cert.ell, cert.r).expect("valid step");
            let admissible = admissible_exponents(k, big_p, p_n, cert.ell, cert.r).expect("valid step");
            let tabulated_contained = exps.iter().all(|&j| j % 2 == 0 && exponent_contained(j, big_p, p_n));
            let verdict = if exps.iter().all(|j| admissible.contains(j)) {
                PaperVerdict::Pass
            } else if tabulated_contained {
                PaperVerdict::OutsideCoset
            } else {
                PaperVerdict::NotContained
            };
            out.push(PaperCase {
                big_p,
                p_n,
                k,
                ell: cert.ell,
                r: cert.r,
                tabulated: exps.to_vec(),
                admissible,
                selected_j: sel.j,
                selected_weights: sel.weight_set(),
                tabulated_contained,
                verdict,
            });
        }
    }
    out
}
