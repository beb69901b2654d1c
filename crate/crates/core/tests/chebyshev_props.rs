use proptest::prelude::*;
use serrelab_core::chebyshev::{audit_gap_ratio, audit_pi_bounds, audit_pi_bounds_range, judge_point, pi, TriState, POINT_PREC};
use serrelab_core::numth::{is_prime, PrimeTable, SieveConfig};
use serrelab_core::Rational;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn pi_steps_exactly_at_primes() {
    let table = PrimeTable::build(20_000, &SieveConfig::default()).unwrap();
    let mut prev = 0;
    for x in 1..=20_000u64 {
        let now = table.pi(x).unwrap();
        assert_eq!(now, prev + is_prime(x) as u64, "x = {x}");
        prev = now;
    }
    assert_eq!(pi(1_000_000, &SieveConfig::default()).unwrap(), 78_498);
}

#[test]
fn records_survive_refinement() {
    let table = PrimeTable::build(200_000, &SieveConfig::default()).unwrap();
    let (a, b) = (q("921/1000"), q("5526/5000"));
    let records = audit_pi_bounds(&table, 200_000, &a, &b).unwrap();
    assert!(!records.is_empty());
    for r in &records {
        let fine = judge_point(r.x, r.pi_x, &a, &b, 4 * POINT_PREC).unwrap();
        for (old, new) in [(r.lower_ok, fine.0), (r.upper_ok, fine.1)] {
            if old != TriState::Indeterminate {
                assert_eq!(old, new, "x = {}", r.x);
            }
        }
    }
}

#[test]
fn audit_is_independent_of_partitioning() {
    let table = PrimeTable::build(60_000, &SieveConfig::default()).unwrap();
    let (a, b) = (q("95/100"), q("11/10"));
    let whole = audit_pi_bounds(&table, 60_000, &a, &b).unwrap();
    let mut pieces = Vec::new();
    for (lo, hi) in [(0, 97), (98, 5_000), (5_001, 5_001), (5_002, 60_000)] {
        pieces.extend(audit_pi_bounds_range(&table, lo, hi, &a, &b).unwrap());
    }
    assert_eq!(whole, pieces);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pi_is_nondecreasing(x in 0u64..100_000, dx in 0u64..5_000) {
        let cfg = SieveConfig::default();
        prop_assert!(pi(x, &cfg).unwrap() <= pi(x + dx, &cfg).unwrap());
    }

    #[test]
    fn larger_ratio_has_fewer_violations(n in 11u64..40, d in 10u64..20, bump in 1u64..10,
                                         lo in 2u64..500, len in 0u64..20_000) {
        let cfg = SieveConfig::default();
        let a = Rational::new(n as i64, d as i64).unwrap();
        let b = &a + &Rational::new(bump as i64, 100).unwrap();
        let va = audit_gap_ratio(&a, lo, lo + len, &cfg).unwrap().violations;
        let vb = audit_gap_ratio(&b, lo, lo + len, &cfg).unwrap().violations;
        let pairs_a: Vec<(u64, u64)> = va.iter().map(|r| (r.p, r.p_next)).collect();
        prop_assert!(vb.iter().all(|r| pairs_a.contains(&(r.p, r.p_next))));
    }
}
