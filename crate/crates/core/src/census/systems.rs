//! Eigensystems with stable labels, reducibility and twisting.

use alloc::vec::Vec;

use super::eigen::{weight_orbits, BasisSource, DirectBasis, HeckeOrbit};
use super::field::{ExtField, Field, PrimeField, Ring};
use super::poly;
use super::CensusError;
use crate::numth::{is_prime, pow_mod};

/// Default separator bound `max(13, ceil((p + 1) / 6))`.
pub fn default_separator_bound(p: u64) -> u64 {
    13.max((p + 1).div_ceil(6))
}

/// Primes `l <= bound` with `l != p`.
pub fn separator_primes(p: u64, bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&l| l != p && is_prime(l)).collect()
}

/// Which irreducible polynomial names the field of degree `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Labeling {
    /// Lexicographically least monic irreducible.
    #[default]
    Canonical,
    /// Lexicographically largest monic irreducible.
    Alternative,
}

impl Labeling {
    pub fn modulus(self, p: u64, e: usize) -> Vec<u64> {
        poly::extreme_irreducible(&PrimeField::new(p), e, self == Labeling::Alternative)
    }
}

/// A mod-`p` Hecke eigensystem with values in `F_p[y] / (modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EigenSystem {
    pub p: u64,
    pub weight: u32,
    pub field_degree: usize,
    pub modulus: Vec<u64>,
    /// `(l, a_l)` in increasing `l`.
    pub eigenvalues: Vec<(u64, Vec<u64>)>,
    pub multiplicity: usize,
    pub reducible_as: Option<(u64, u64)>,
}

impl EigenSystem {
    pub fn field(&self) -> ExtField {
        ExtField::new(PrimeField::new(self.p), self.modulus.clone())
    }

    pub fn eigenvalue(&self, ell: u64) -> Option<&[u64]> {
        self.eigenvalues.iter().find(|(l, _)| *l == ell).map(|(_, a)| a.as_slice())
    }
}

/// The `e` conjugate systems of an orbit, written in the labelling field and
/// sorted so that the lexicographically least tuple comes first.
pub fn label_orbit(orbit: &HeckeOrbit, p: u64, ells: &[u64], labeling: Labeling) -> Vec<EigenSystem> {
    let e = orbit.degree();
    let fp = PrimeField::new(p);
    let target = ExtField::new(fp, labeling.modulus(p, e));
    let lifted: Vec<Vec<u64>> = orbit.modulus.iter().map(|&c| target.lift(c)).collect();
    let roots: Vec<Vec<u64>> = if e == 1 {
        alloc::vec![target.neg(&lifted[0])]
    } else {
        let mut rng = <rand_chacha::ChaCha8Rng as rand_core::SeedableRng>::seed_from_u64(p ^ ((e as u64) << 32));
        poly::equal_degree(&target, &lifted, 1, &mut rng).into_iter().map(|lin| target.neg(&lin[0])).collect()
    };
    let mut tuples: Vec<Vec<Vec<u64>>> = roots
        .iter()
        .map(|r| orbit.eigenvalues.iter().map(|h| target.eval_base_poly(h, r)).collect())
        .collect();
    tuples.sort();
    tuples
        .into_iter()
        .map(|values| {
            let mut sys = EigenSystem {
                p,
                weight: orbit.weight,
                field_degree: e,
                modulus: target.modulus().to_vec(),
                eigenvalues: ells.iter().copied().zip(values).collect(),
                multiplicity: orbit.multiplicity,
                reducible_as: None,
            };
            sys.reducible_as = is_reducible_system(&sys);
            sys
        })
        .collect()
}

/// Eigensystems of weight `k` over `F_p`-bar for the separator primes up to
/// `bound`, Galois conjugates listed separately.
pub fn eigensystems_weight(k: u32, p: u64, bound: u64) -> Result<Vec<EigenSystem>, CensusError> {
    eigensystems_weight_with(k, p, bound, Labeling::Canonical, &DirectBasis)
}

pub fn eigensystems_weight_with(
    k: u32,
    p: u64,
    bound: u64,
    labeling: Labeling,
    source: &dyn BasisSource,
) -> Result<Vec<EigenSystem>, CensusError> {
    let ells = separator_primes(p, bound);
    let orbits = weight_orbits(k, p, &ells, source)?;
    Ok(orbits.iter().flat_map(|o| label_orbit(o, p, &ells, labeling)).collect())
}

fn reducible_pair(p: u64, values: &[(u64, u64)], weight: Option<u32>) -> Option<(u64, u64)> {
    let n = p - 1;
    let matches = |a: u64, b: u64| {
        values.iter().all(|&(l, v)| (pow_mod(l % p, a, p) + pow_mod(l % p, b, p)) % p == v)
    };
    if let Some(k) = weight {
        let s = (k as u64 + n - 1) % n;
        return (0..n).map(|a| (a, (s + n - a) % n)).find(|&(a, b)| a <= b && matches(a, b));
    }
    let (l0, v0) = *values.first()?;
    let pw: Vec<u64> = (0..n).map(|a| pow_mod(l0 % p, a, p)).collect();
    for a in 0..n {
        let need = (v0 + p - pw[a as usize]) % p;
        for b in a..n {
            if pw[b as usize] == need && matches(a, b) {
                return Some((a, b));
            }
        }
    }
    None
}

/// `(a, b)` with `a <= b` and `a_l = l^a + l^b` for every stored `l`. Pairs
/// with `a + b = k - 1 mod p - 1` are preferred; twisted systems match a
/// shifted pair.
pub fn is_reducible_system(sys: &EigenSystem) -> Option<(u64, u64)> {
    if sys.field_degree != 1 || sys.p < 3 {
        return None;
    }
    let values: Vec<(u64, u64)> = sys.eigenvalues.iter().map(|(l, a)| (*l, a[0])).collect();
    reducible_pair(sys.p, &values, Some(sys.weight)).or_else(|| reducible_pair(sys.p, &values, None))
}

/// Reducibility of an orbit with rational eigenvalues, with the determinant
/// constraint `a + b = k - 1`.
pub(crate) fn orbit_reducible_as(orbit: &HeckeOrbit, p: u64, ells: &[u64]) -> Option<(u64, u64)> {
    if orbit.degree() != 1 {
        return None;
    }
    let values: Vec<(u64, u64)> = ells.iter().zip(&orbit.eigenvalues).map(|(&l, h)| (l, h[0])).collect();
    reducible_pair(p, &values, Some(orbit.weight))
}

/// `a_l -> l^i a_l`.
pub fn twist(sys: &EigenSystem, i: u64) -> EigenSystem {
    let p = sys.p;
    let n = p - 1;
    let i = i % n;
    let field = sys.field();
    let eigenvalues = sys
        .eigenvalues
        .iter()
        .map(|(l, a)| (*l, field.scale_int(a, pow_mod(l % p, i, p))))
        .collect();
    let reducible_as = sys.reducible_as.map(|(a, b)| {
        let (a, b) = ((a + i) % n, (b + i) % n);
        (a.min(b), a.max(b))
    });
    EigenSystem { eigenvalues, reducible_as, ..sys.clone() }
}
