use alloc::vec;
use alloc::vec::Vec;

use super::{isqrt, NumthError};

/// Default cap on sieve bounds.
pub const DEFAULT_SIEVE_LIMIT: u64 = 100_000_000;
/// Default segment size in bytes (one flag per odd candidate).
pub const DEFAULT_SEGMENT_BYTES: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Largest bound any sieve may be asked for.
    pub limit: u64,
    /// Memory budget for one segment.
    pub segment_bytes: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            limit: DEFAULT_SIEVE_LIMIT,
            segment_bytes: DEFAULT_SEGMENT_BYTES,
        }
    }
}

impl SieveConfig {
    fn check(&self, x: u64) -> Result<(), NumthError> {
        if x > self.limit || x > u32::MAX as u64 {
            return Err(NumthError::LimitExceeded {
                requested: x,
                limit: self.limit.min(u32::MAX as u64),
            });
        }
        Ok(())
    }
}

fn simple_sieve(n: u64) -> Vec<u32> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u32);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Calls `visit` on every prime in `[lo, hi]` in ascending order, sieving odd
/// candidates in segments of `segment_bytes` flags.
pub fn sieve_range(lo: u64, hi: u64, segment_bytes: usize, mut visit: impl FnMut(u64)) {
    if hi < 2 || lo > hi {
        return;
    }
    if lo <= 2 {
        visit(2);
    }
    let base = simple_sieve(isqrt(hi));
    let seg_len = segment_bytes.max(64);
    let mut flags = vec![true; seg_len];
    let mut start = lo.max(3) | 1;
    while start <= hi {
        let count = (((hi - start) / 2) + 1).min(seg_len as u64) as usize;
        let end = start + 2 * (count as u64 - 1);
        flags[..count].fill(true);
        for &q in base.iter().skip(1) {
            let q = q as u64;
            if q * q > end {
                break;
            }
            let mut m = (q * q).max(start.div_ceil(q) * q);
            if m % 2 == 0 {
                m += q;
            }
            while m <= end {
                flags[((m - start) / 2) as usize] = false;
                m += 2 * q;
            }
        }
        for (i, &f) in flags[..count].iter().enumerate() {
            if f {
                visit(start + 2 * i as u64);
            }
        }
        start = end + 2;
    }
}

/// Primes `<= x` with the default configuration.
pub fn primes_up_to(x: u64) -> Result<Vec<u64>, NumthError> {
    primes_up_to_with(x, &SieveConfig::default())
}

pub fn primes_up_to_with(x: u64, cfg: &SieveConfig) -> Result<Vec<u64>, NumthError> {
    cfg.check(x)?;
    let mut out = Vec::new();
    sieve_range(0, x, cfg.segment_bytes, |p| out.push(p));
    Ok(out)
}

/// All primes up to a fixed bound, built once and shared read-only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    bound: u64,
    primes: Vec<u32>,
}

impl PrimeTable {
    pub fn build(bound: u64, cfg: &SieveConfig) -> Result<Self, NumthError> {
        cfg.check(bound)?;
        let mut primes = Vec::new();
        sieve_range(0, bound, cfg.segment_bytes, |p| primes.push(p as u32));
        Ok(PrimeTable { bound, primes })
    }

    /// Rebuilds a table from a stored prime list. Returns `None` unless the list
    /// is strictly increasing and bounded; callers that load untrusted data
    /// should still spot-check it.
    pub fn from_parts(bound: u64, primes: Vec<u32>) -> Option<Self> {
        let increasing = primes.windows(2).all(|w| w[0] < w[1]);
        let bounded = primes.last().is_none_or(|&p| p as u64 <= bound);
        (increasing && bounded).then_some(PrimeTable { bound, primes })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// The primes `<= x`.
    pub fn primes_up_to(&self, x: u64) -> Result<&[u32], NumthError> {
        let n = self.pi(x)? as usize;
        Ok(&self.primes[..n])
    }

    /// Number of primes `<= x`.
    pub fn pi(&self, x: u64) -> Result<u64, NumthError> {
        if x > self.bound {
            return Err(NumthError::LimitExceeded {
                requested: x,
                limit: self.bound,
            });
        }
        Ok(self.primes.partition_point(|&p| (p as u64) <= x) as u64)
    }

    pub fn contains(&self, n: u64) -> bool {
        n <= self.bound && n <= u32::MAX as u64 && self.primes.binary_search(&(n as u32)).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_ranges() {
        assert_eq!(primes_up_to(10).unwrap(), [2, 3, 5, 7]);
        assert!(primes_up_to(1).unwrap().is_empty());
        assert!(primes_up_to(0).unwrap().is_empty());
        assert_eq!(primes_up_to(2).unwrap(), [2]);
    }

    #[test]
    fn count_to_100_matches_trial_division() {
        let oracle = (0..=100).filter(|&n| trial_division(n)).count();
        assert_eq!(oracle, 25);
        assert_eq!(primes_up_to(100).unwrap().len(), oracle);
    }

    #[test]
    fn tiny_segments_agree_with_large_ones() {
        let cfg = SieveConfig { limit: 1 << 20, segment_bytes: 7 };
        let a = primes_up_to_with(200_000, &cfg).unwrap();
        let b = primes_up_to(200_000).unwrap();
        assert_eq!(a, b);
        let oracle: Vec<u64> = (0..=3000).filter(|&n| trial_division(n)).collect();
        assert_eq!(&a[..oracle.len()], &oracle[..]);
    }

    #[test]
    fn sub_range() {
        let mut v = Vec::new();
        sieve_range(90, 110, 64, |p| v.push(p));
        assert_eq!(v, [97, 101, 103, 107, 109]);
    }

    #[test]
    fn limit_is_enforced() {
        let cfg = SieveConfig { limit: 1000, segment_bytes: 64 };
        assert_eq!(
            primes_up_to_with(1001, &cfg),
            Err(NumthError::LimitExceeded { requested: 1001, limit: 1000 })
        );
        let t = PrimeTable::build(1000, &cfg).unwrap();
        assert!(t.pi(1001).is_err());
        assert_eq!(t.pi(1000).unwrap(), 168);
        assert!(t.contains(997) && !t.contains(999));
    }
}
