//! Counting level-one eigensystems mod `p` up to twist.
//!
//! Orbits from all weights are grouped into classes under Galois conjugation
//! and twisting by powers of the cyclotomic character. Two orbits are in the
//! same class when some twist of one is carried onto the other by a field
//! isomorphism, which is tested directly on their Hecke fields.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::eigen::{weight_orbits, BasisSource, DirectBasis, HeckeOrbit};
use super::field::{ExtField, Field, PrimeField, Ring};
use super::systems::{default_separator_bound, orbit_reducible_as, separator_primes};
use super::CensusError;
use crate::numth::{inv_mod, is_prime, pow_mod, Rational};

pub const DEFAULT_CENSUS_CAP: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusConfig {
    /// Overrides the default separator bound.
    pub separator_bound: Option<u64>,
    /// Largest prime accepted.
    pub cap: u64,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig { separator_bound: None, cap: DEFAULT_CENSUS_CAP }
    }
}

/// Systems related by twisting and Galois conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClass {
    /// Weights in which some member occurs, ascending.
    pub weights: Vec<u32>,
    pub field_degree: usize,
    /// Number of distinct systems over `F_p`-bar.
    pub systems: u64,
    /// Number of twist orbits among them.
    pub twist_orbits: u64,
    pub reducible_as: Option<(u64, u64)>,
}

/// Two systems agreeing at every separator prime except the last.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NearCollision {
    pub weights: (u32, u32),
    pub field_degree: usize,
    pub twist: u64,
    pub differs_at: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub p: u64,
    pub separator_primes: Vec<u64>,
    pub n_irred: u64,
    pub n_red: u64,
    pub n_total: u64,
    pub max_e: usize,
    /// `48 N_total / p^3`.
    pub ratio: Rational,
    pub orbit_count: u64,
    pub classes: Vec<OrbitClass>,
    pub near_collisions: Vec<NearCollision>,
}

/// Even weights `2..=p + 1`.
pub fn census_weights(p: u64) -> Vec<u32> {
    (2..=p as u32 + 1).step_by(2).collect()
}

/// Separator primes for a census run, validating the prime and the cap.
pub fn census_separators(p: u64, config: &CensusConfig) -> Result<Vec<u64>, CensusError> {
    if p < 3 || !is_prime(p) {
        return Err(CensusError::NotPrime(p));
    }
    if p > config.cap {
        return Err(CensusError::LimitExceeded { p, cap: config.cap });
    }
    let ells = separator_primes(p, config.separator_bound.unwrap_or_else(|| default_separator_bound(p)));
    if ells.len() < 3 {
        return Err(CensusError::BadSeparator);
    }
    Ok(ells)
}

pub fn census(p: u64, config: &CensusConfig) -> Result<CensusReport, CensusError> {
    census_with(p, config, &DirectBasis)
}

/// Sequential census; callers wanting parallelism run [`weight_orbits`] per
/// weight themselves and hand the results to [`assemble_census`].
pub fn census_with(p: u64, config: &CensusConfig, source: &dyn BasisSource) -> Result<CensusReport, CensusError> {
    let ells = census_separators(p, config)?;
    let mut orbits = Vec::new();
    if p > 3 {
        for k in census_weights(p) {
            orbits.extend(weight_orbits(k, p, &ells, source)?);
        }
    }
    Ok(assemble_census(p, &ells, orbits))
}

struct OrbitData {
    orbit: HeckeOrbit,
    field: ExtField,
    /// Minimal polynomials of the first two separator eigenvalues.
    minpolys: [Vec<u64>; 2],
    reducible_as: Option<(u64, u64)>,
}

struct Matcher<'a> {
    p: u64,
    ells: &'a [u64],
    /// `ells[j]^i` as rows indexed by `j`.
    powers: Vec<Vec<u64>>,
}

/// `c^deg m(X / c)`: the minimal polynomial of `c y` when `m` is that of `y`.
fn scale_minpoly(f: &PrimeField, m: &[u64], c: u64) -> Vec<u64> {
    let r = m.len() - 1;
    let mut scaled = m.to_vec();
    let mut cp = 1;
    for j in (0..r).rev() {
        cp = f.mul(&cp, &c);
        scaled[j] = f.mul(&scaled[j], &cp);
    }
    scaled
}

impl Matcher<'_> {
    /// Looks for a field isomorphism `s` with `s(l^i a_l(a)) = a_l(b)`. The
    /// isomorphism is pinned down by the primitive element of `a`; returns the
    /// number of leading separator primes on which it works, or `None` when no
    /// candidate isomorphism exists.
    fn agreement(&self, a: &OrbitData, b: &OrbitData, i: u64) -> Option<usize> {
        if a.orbit.degree() != b.orbit.degree() {
            return None;
        }
        let f = b.field.base();
        let i = i as usize;
        for t in 0..2 {
            if scale_minpoly(&f, &a.minpolys[t], self.powers[t][i]) != b.minpolys[t] {
                return None;
            }
        }
        let field = &b.field;
        let mut u = field.zero();
        for &(l, coeff) in &a.orbit.primitive {
            let idx = self.ells.iter().position(|&x| x == l).expect("separator");
            let inv = inv_mod(self.powers[idx][i], self.p).expect("unit");
            u = field.add(&u, &field.scale_int(&b.orbit.eigenvalues[idx], f.mul(&coeff, &inv)));
        }
        let e = a.orbit.degree();
        let mut upow = alloc::vec![field.one()];
        for _ in 1..=e {
            let next = field.mul(upow.last().expect("nonempty"), &u);
            upow.push(next);
        }
        let eval = |h: &[u64]| -> Vec<u64> {
            let mut acc = alloc::vec![0u128; e];
            for (c, pw) in h.iter().zip(&upow) {
                if *c != 0 {
                    for (s, x) in acc.iter_mut().zip(pw) {
                        *s += (*c * *x) as u128;
                    }
                }
            }
            acc.into_iter().map(|s| (s % self.p as u128) as u64).collect()
        };
        if !field.is_zero(&eval(&a.orbit.modulus)) {
            return None;
        }
        Some(
            (0..self.ells.len())
                .take_while(|&j| {
                    let v = eval(&a.orbit.eigenvalues[j]);
                    field.scale_int(&v, self.powers[j][i]) == b.orbit.eigenvalues[j]
                })
                .count(),
        )
    }
}

/// Invariant of a class: degree and the minimal polynomials of `a_l^(p-1)`
/// for the first two separator primes.
fn class_key(data: &OrbitData, p: u64) -> (usize, Vec<u64>, Vec<u64>) {
    let e = data.orbit.degree();
    let inv = |j: usize| {
        let y = data.field.pow_u64(&data.orbit.eigenvalues[j], p - 1);
        data.field.minpoly(&y)
    };
    (e, inv(0), inv(1))
}

/// Groups orbits from every weight into classes and counts systems.
pub fn assemble_census(p: u64, ells: &[u64], orbits: Vec<HeckeOrbit>) -> CensusReport {
    let n = p - 1;
    let n_red = n * n / 4;
    let matcher = Matcher {
        p,
        ells,
        powers: ells.iter().map(|&l| (0..n).map(|i| pow_mod(l % p, i, p)).collect()).collect(),
    };
    let data: Vec<OrbitData> = orbits
        .into_iter()
        .map(|orbit| {
            let field = orbit.field(p);
            let minpolys = [field.minpoly(&orbit.eigenvalues[0]), field.minpoly(&orbit.eigenvalues[1])];
            let reducible_as = orbit_reducible_as(&orbit, p, ells);
            OrbitData { orbit, field, minpolys, reducible_as }
        })
        .collect();

    // class representatives and members, in order of first appearance
    let mut reps: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut buckets: BTreeMap<(usize, Vec<u64>, Vec<u64>), Vec<usize>> = BTreeMap::new();
    let full = ells.len();
    for (idx, d) in data.iter().enumerate() {
        let bucket = buckets.entry(class_key(d, p)).or_default();
        let found = bucket
            .iter()
            .copied()
            .find(|&c| (0..n).any(|i| matcher.agreement(&data[reps[c]], d, i) == Some(full)));
        match found {
            Some(c) => members[c].push(idx),
            None => {
                bucket.push(reps.len());
                reps.push(idx);
                members.push(alloc::vec![idx]);
            }
        }
    }

    let mut classes = Vec::new();
    let mut near_collisions = Vec::new();
    let (mut n_irred, mut orbit_count, mut max_e) = (0u64, 0u64, 1usize);
    for (c, &rep) in reps.iter().enumerate() {
        let d = &data[rep];
        let e = d.orbit.degree();
        max_e = max_e.max(e);
        let mut stab = 0;
        for i in 0..n {
            match matcher.agreement(d, d, i) {
                Some(m) if m == full => stab += 1,
                Some(m) if m + 1 == full => near_collisions.push(NearCollision {
                    weights: (d.orbit.weight, d.orbit.weight),
                    field_degree: e,
                    twist: i,
                    differs_at: ells[full - 1],
                }),
                _ => {}
            }
        }
        let pure = (0..n)
            .filter(|&i| {
                d.orbit.eigenvalues.iter().enumerate().all(|(j, a)| d.field.is_zero(a) || matcher.powers[j][i as usize] == 1)
            })
            .count() as u64;
        let systems = e as u64 * n / stab;
        let twist_orbits = e as u64 * pure / stab;
        let mut weights: Vec<u32> = members[c].iter().map(|&m| data[m].orbit.weight).collect();
        weights.sort_unstable();
        weights.dedup();
        let reducible_as = members[c].iter().find_map(|&m| data[m].reducible_as);
        if reducible_as.is_none() {
            n_irred += systems;
            orbit_count += twist_orbits;
        }
        classes.push(OrbitClass { weights, field_degree: e, systems, twist_orbits, reducible_as });
    }

    for bucket in buckets.values() {
        for (x, &ca) in bucket.iter().enumerate() {
            for &cb in &bucket[x + 1..] {
                let (a, b) = (&data[reps[ca]], &data[reps[cb]]);
                for i in 0..n {
                    if matcher.agreement(a, b, i).is_some_and(|m| m + 1 == full) {
                        near_collisions.push(NearCollision {
                            weights: (a.orbit.weight, b.orbit.weight),
                            field_degree: a.orbit.degree(),
                            twist: i,
                            differs_at: ells[full - 1],
                        });
                    }
                }
            }
        }
    }

    let n_total = n_irred + n_red;
    let ratio = Rational::new(BigInt::from(48 * n_total), BigInt::from(p).pow(3)).expect("nonzero denominator");
    CensusReport {
        p,
        separator_primes: ells.to_vec(),
        n_irred,
        n_red,
        n_total,
        max_e,
        ratio,
        orbit_count,
        classes,
        near_collisions,
    }
}
