//! Serre-weight twists and the dihedral criterion.

use alloc::vec::Vec;

use crate::numth::{is_prime, isqrt};

/// Local behaviour at `p` of the representation being twisted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalShape {
    OrdinaryNonsplit,
    Split,
    Irreducible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwistResult {
    /// Exponent of the cyclotomic character, reduced mod `p - 1`.
    pub twist_exponent: u64,
    pub new_weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightsError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("weight {k} outside the allowed range for p = {p}")]
    WeightOutOfRange { k: u64, p: u64 },
    #[error("class numbers are computed only for p = 3 mod 4, got {0}")]
    NotThreeModFour(u64),
}

fn odd_prime(p: u64) -> Result<(), WeightsError> {
    if p == 2 || !is_prime(p) {
        return Err(WeightsError::NotOddPrime(p));
    }
    Ok(())
}

fn twist_range(k: u64, p: u64) -> Result<(), WeightsError> {
    odd_prime(p)?;
    if k <= 2 || k >= p {
        return Err(WeightsError::WeightOutOfRange { k, p });
    }
    Ok(())
}

/// Locally irreducible case: twist by `k' = p - k + 1`, new weight `p + 3 - k`.
pub fn twist_irreducible(k: u64, p: u64) -> Result<TwistResult, WeightsError> {
    twist_range(k, p)?;
    Ok(TwistResult { twist_exponent: (p - k + 1) % (p - 1), new_weight: p + 3 - k })
}

/// Locally split case: twist by `1 - k mod p - 1`, new weight `p + 1 - k`.
pub fn twist_split(k: u64, p: u64) -> Result<TwistResult, WeightsError> {
    twist_range(k, p)?;
    let e = (p - 1 + 1 - k % (p - 1)) % (p - 1);
    Ok(TwistResult { twist_exponent: e, new_weight: p + 1 - k })
}

/// Dispatches on the local shape; the ordinary non-split case needs no twist.
pub fn twist(k: u64, p: u64, shape: LocalShape) -> Result<TwistResult, WeightsError> {
    match shape {
        LocalShape::Irreducible => twist_irreducible(k, p),
        LocalShape::Split => twist_split(k, p),
        LocalShape::OrdinaryNonsplit => {
            odd_prime(p)?;
            if k < 2 || k > p + 1 {
                return Err(WeightsError::WeightOutOfRange { k, p });
            }
            Ok(TwistResult { twist_exponent: 0, new_weight: k })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdinarityStatus {
    AlreadyOrdinary,
    ReducibleTo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinarityReduction {
    pub status: OrdinarityStatus,
    /// Twisted weights, descending: `p + 3 - k` then `p + 1 - k`. Empty when
    /// already ordinary.
    pub weights: Vec<u64>,
    /// Whether every twisted weight is at most `p_n + 1`.
    pub within_bound: bool,
}

/// Reduction of an even weight `k` in `(2, p + 1]` to the ordinary case; the
/// ladder uses `k >= p_n + 2`, but the small-weight table also starts lower.
pub fn ordinarity_reduction(k: u64, p: u64, p_n: u64) -> Result<OrdinarityReduction, WeightsError> {
    odd_prime(p)?;
    if k % 2 != 0 || k <= 2 || k > p + 1 {
        return Err(WeightsError::WeightOutOfRange { k, p });
    }
    if k == p + 1 {
        return Ok(OrdinarityReduction {
            status: OrdinarityStatus::AlreadyOrdinary,
            weights: Vec::new(),
            within_bound: true,
        });
    }
    let weights = alloc::vec![p + 3 - k, p + 1 - k];
    let within_bound = weights.iter().all(|&w| w <= p_n + 1);
    Ok(OrdinarityReduction { status: OrdinarityStatus::ReducibleTo, weights, within_bound })
}

/// Class number of `Q(sqrt(-p))` for a prime `p = 3 mod 4`, by counting
/// reduced forms `(a, b, c)` of discriminant `-p`.
pub fn class_number(p: u64) -> Result<u64, WeightsError> {
    odd_prime(p)?;
    if p % 4 != 3 {
        return Err(WeightsError::NotThreeModFour(p));
    }
    let mut h = 0;
    for a in 1..=isqrt(p / 3) {
        let mut b: i64 = -(a as i64);
        while b <= a as i64 {
            let bb = b.unsigned_abs();
            let num = bb * bb + p;
            if b % 2 != 0 && num % (4 * a) == 0 {
                let c = num / (4 * a);
                let boundary = bb == a || a == c;
                if c >= a && !(boundary && b < 0) {
                    h += 1;
                }
            }
            b += 1;
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralReport {
    pub p: u64,
    pub exists: bool,
    /// `(p + 1) / 2` when a representation exists.
    pub weight: Option<u64>,
    /// `h(-p)`, defined when `p = 3 mod 4`.
    pub class_number: Option<u64>,
}

/// Semistable dihedral case: exists iff `p = 3 mod 4` and `h(-p) > 1`.
pub fn dihedral_semistable(p: u64) -> Result<DihedralReport, WeightsError> {
    odd_prime(p)?;
    let h = if p % 4 == 3 { Some(class_number(p)?) } else { None };
    let exists = h.is_some_and(|h| h > 1);
    Ok(DihedralReport { p, exists, weight: exists.then_some(p.div_ceil(2)), class_number: h })
}

/// Weight `(p + 3) / 2` of the locally irreducible dihedral case.
pub fn dihedral_irreducible_weight(p: u64) -> Result<u64, WeightsError> {
    odd_prime(p)?;
    Ok((p + 3) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn twists() {
        assert_eq!(twist_irreducible(10, 11).unwrap().new_weight, 4);
        assert_eq!(twist_irreducible(4, 7).unwrap().new_weight, 6);
        assert_eq!(twist_irreducible(9, 13).unwrap().new_weight, 7);
        assert_eq!(twist_split(4, 7).unwrap(), TwistResult { twist_exponent: 3, new_weight: 4 });
        assert_eq!(twist_split(6, 11).unwrap().new_weight, 6);
        assert_eq!(twist_split(6, 11).unwrap().twist_exponent, 5);
        assert_eq!(twist_irreducible(10, 11).unwrap().twist_exponent, 2);
        for bad in [(2, 11), (11, 11), (12, 11), (1, 11)] {
            assert!(twist_irreducible(bad.0, bad.1).is_err());
            assert!(twist_split(bad.0, bad.1).is_err());
        }
        assert!(twist_split(4, 9).is_err());
        assert_eq!(twist(6, 7, LocalShape::OrdinaryNonsplit).unwrap().new_weight, 6);
    }

    #[test]
    fn ordinarity() {
        let r = ordinarity_reduction(8, 7, 5).unwrap();
        assert_eq!(r.status, OrdinarityStatus::AlreadyOrdinary);
        let r = ordinarity_reduction(22, 29, 23).unwrap();
        assert_eq!((r.status, r.weights.clone(), r.within_bound), (OrdinarityStatus::ReducibleTo, vec![10, 8], true));
        assert!(ordinarity_reduction(26, 23, 19).is_err());
        assert!(ordinarity_reduction(21, 29, 19).is_err());
        assert!(ordinarity_reduction(2, 29, 19).is_err());
        // k = p_n + 3 (first even weight), p <= 2 p_n
        for (p, p_n) in [(37, 31), (263, 251), (29, 23)] {
            let r = ordinarity_reduction(p_n + 3, p, p_n).unwrap();
            assert!(r.within_bound);
        }
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(23), Ok(3));
        assert_eq!(class_number(163), Ok(1));
        assert_eq!(class_number(3), Ok(1));
        assert_eq!(class_number(47), Ok(5));
        assert_eq!(class_number(13), Err(WeightsError::NotThreeModFour(13)));
        let ones: Vec<u64> = (3..200)
            .filter(|&p| is_prime(p) && p % 4 == 3 && class_number(p) == Ok(1))
            .collect();
        assert_eq!(ones, [3, 7, 11, 19, 43, 67, 163]);
    }

    #[test]
    fn dihedral() {
        let r = dihedral_semistable(23).unwrap();
        assert_eq!((r.exists, r.weight, r.class_number), (true, Some(12), Some(3)));
        assert!(!dihedral_semistable(7).unwrap().exists);
        let r = dihedral_semistable(13).unwrap();
        assert_eq!((r.exists, r.class_number), (false, None));
        assert_eq!(dihedral_irreducible_weight(23), Ok(13));
        assert_eq!(dihedral_irreducible_weight(7), Ok(5));
        assert_eq!(dihedral_irreducible_weight(3), Ok(3));
    }
}
