use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use serrelab_core::census::{
    census, census_separators, census_weights, delta, delta_product, dim_cusp, eigensystems_weight_with, hecke_matrix,
    hecke_tn, is_reducible_system, twist, victor_miller_basis, weight_orbits, CensusConfig, DirectBasis, EigenSystem,
    Integers, Labeling, PrimeField,
};
use serrelab_core::census::linalg::mat_mul;
use serrelab_core::numth::{is_prime, primes_up_to};

/// Counts over `F_p`-bar obtained the direct way: label every system in
/// the chosen field of its degree, close under all twists, and dedupe
/// the tuples.
#[derive(Debug, PartialEq, Eq)]
struct TupleCensus {
    n_irred: u64,
    max_e: usize,
    orbit_count: u64,
}

fn census_by_tuples(p: u64, labeling: Labeling) -> TupleCensus {
    let ells = census_separators(p, &CensusConfig::default()).unwrap();
    let bound = *ells.last().unwrap();
    let mut irred: BTreeSet<(usize, Vec<(u64, Vec<u64>)>)> = BTreeSet::new();
    let mut orbits: BTreeSet<BTreeSet<Vec<(u64, Vec<u64>)>>> = BTreeSet::new();
    let mut max_e = 1;
    for k in census_weights(p) {
        for sys in eigensystems_weight_with(k, p, bound, labeling, &DirectBasis).unwrap() {
            max_e = max_e.max(sys.field_degree);
            let twists: Vec<EigenSystem> = (0..p - 1).map(|i| twist(&sys, i)).collect();
            for t in &twists {
                // reducibility is a property of the whole twist orbit
                assert_eq!(is_reducible_system(t).is_some(), sys.reducible_as.is_some());
                assert_eq!(is_reducible_system(t), t.reducible_as);
            }
            if sys.reducible_as.is_some() {
                continue;
            }
            let orbit: BTreeSet<Vec<(u64, Vec<u64>)>> = twists.iter().map(|t| t.eigenvalues.clone()).collect();
            assert_eq!((p - 1) % orbit.len() as u64, 0, "orbit size must divide p - 1");
            for t in &orbit {
                irred.insert((sys.field_degree, t.clone()));
            }
            orbits.insert(orbit);
        }
    }
    TupleCensus { n_irred: irred.len() as u64, max_e, orbit_count: orbits.len() as u64 }
}

#[test]
fn census_matches_tuple_expansion_under_both_labelings() {
    for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
        let canonical = census_by_tuples(p, Labeling::Canonical);
        let alternative = census_by_tuples(p, Labeling::Alternative);
        assert_eq!(canonical, alternative, "p = {p}");
        assert_eq!(canonical.n_irred > 0, p >= 11);
        let r = census(p, &CensusConfig::default()).unwrap();
        assert_eq!(
            TupleCensus { n_irred: r.n_irred, max_e: r.max_e, orbit_count: r.orbit_count },
            canonical,
            "p = {p}"
        );
    }
}

#[test]
fn reducible_count_and_degree_bound_to_100() {
    for p in primes_up_to(100).unwrap().into_iter().filter(|&p| p >= 3) {
        let r = census(p, &CensusConfig::default()).unwrap();
        let n = p - 1;
        let brute = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).filter(|(a, b)| (a + b) % 2 == 1).count() as u64;
        assert_eq!(r.n_red, brute, "p = {p}");
        assert!(r.max_e as u64 <= 1.max((p + 1).div_ceil(12)), "p = {p}");
        assert!(r.n_total <= p * p * p);
        assert_eq!(r.n_total, r.n_irred + r.n_red);
        for c in &r.classes {
            assert_eq!(n % (c.systems / c.twist_orbits), 0);
        }
    }
}

#[test]
fn hecke_operators_commute() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xec4e);
    let ps: Vec<u64> = primes_up_to(400).unwrap().into_iter().filter(|&p| p >= 5).collect();
    let ls = [2u64, 3, 5, 7, 11, 13];
    for _ in 0..50 {
        let k = 2 * rng.random_range(6i64..=50);
        let (l1, l2) = (ls[rng.random_range(0..ls.len())], ls[rng.random_range(0..ls.len())]);
        let p = loop {
            let p = ps[rng.random_range(0..ps.len())];
            if p != l1 && p != l2 {
                break p;
            }
        };
        let prec = l1.max(l2) as usize * (dim_cusp(k) + 1) + 1;
        let a = hecke_matrix(k, l1, p, prec).unwrap();
        let b = hecke_matrix(k, l2, p, prec).unwrap();
        let f = PrimeField::new(p);
        assert_eq!(mat_mul(&f, &a, &b), mat_mul(&f, &b, &a), "k = {k}, l = {l1}, {l2}, p = {p}");
    }
}

#[test]
fn dimensions_add_up() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xd1);
    for _ in 0..40 {
        let p = loop {
            let p = rng.random_range(13u64..140);
            if is_prime(p) {
                break p;
            }
        };
        let k = 2 * rng.random_range(6u32..=(p as u32 + 1) / 2);
        let ells = census_separators(p, &CensusConfig::default()).unwrap();
        let orbits = weight_orbits(k, p, &ells, &DirectBasis).unwrap();
        let total: usize = orbits.iter().map(|o| o.degree() * o.multiplicity).sum();
        assert_eq!(total, dim_cusp(k as i64), "p = {p}, k = {k}");
    }
}

#[test]
fn delta_two_ways() {
    assert_eq!(delta(300).unwrap(), delta_product(Integers, 300));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reduction_commutes_with_hecke(k in 6i64..40, pi in 0usize..20, li in 0usize..5) {
        let k = 2 * k;
        let p = [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79][pi];
        let ell = [2u64, 3, 5, 7, 11][li];
        let d = dim_cusp(k);
        let prec = ell as usize * (d + 2);
        let basis = victor_miller_basis(k, prec).unwrap();
        prop_assert_eq!(basis.len(), d);
        let fp = PrimeField::new(p);
        for (i, f) in basis.iter().enumerate() {
            // echelon shape with integer coefficients
            for j in 1..=d {
                prop_assert_eq!(&f.coeffs()[j], &BigInt::from((i + 1 == j) as i64));
            }
            let hecke_then_reduce = hecke_tn(f, ell, k as u32).unwrap().reduce(fp);
            let reduce_then_hecke = hecke_tn(&f.reduce(fp), ell, k as u32).unwrap();
            prop_assert_eq!(hecke_then_reduce, reduce_then_hecke);
        }
    }
}
