mod common;

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use proptest::prelude::*;

use numsemi::changemaking::{
    colex_compare, digit_sum, digit_sum_prefix, greedy_count, greedy_presentation, is_orderly,
    opt_count, opt_table, CoinSystem,
};
use numsemi::cli::{Decimal, InputEcho, OutputRecord, ParamsEcho};
use numsemi::closed_forms::{
    apery_closed, build_generators, frobenius_closed, genus_closed, FamilyParams,
};
use numsemi::semigroup::{apery_set, Engine, GeneratorList, OracleConfig};
use numsemi::verify::{cross_check_with_jobs, property_suite, GridSpec};

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn to_u64s(v: &[BigUint]) -> Vec<u64> {
    v.iter().map(|x| x.to_u64().unwrap()).collect()
}

fn coprime_gens() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(2u64..40, 1..5).prop_filter("gcd 1", |g| common::coprime(g))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracle_agrees_with_sieve(gens in coprime_gens()) {
        let expected = common::sieve(&gens);
        let ape = apery_set(&GeneratorList::from_u64s(&gens).unwrap()).unwrap();
        prop_assert_eq!(ape.frobenius(), BigInt::from(expected.frobenius));
        prop_assert_eq!(ape.genus().unwrap(), big(expected.genus));
        prop_assert_eq!(to_u64s(ape.minima()), expected.apery);
        prop_assert_eq!(to_u64s(&ape.gaps()), expected.gaps);
        let pf: Vec<i64> = ape.pseudo_frobenius().iter().map(|v| v.to_i64().unwrap()).collect();
        prop_assert_eq!(pf, expected.pf);
    }

    #[test]
    fn apery_and_pf_invariants(gens in coprime_gens()) {
        let ape = apery_set(&GeneratorList::from_u64s(&gens).unwrap()).unwrap();
        let a = ape.modulus().clone();
        for (r, n) in ape.minima().iter().enumerate() {
            prop_assert_eq!(n % &a, big(r as u64));
            prop_assert!(ape.contains(&BigInt::from(n.clone())));
            prop_assert!(!ape.contains(&(BigInt::from(n.clone()) - BigInt::from(a.clone()))));
        }
        prop_assert_eq!(BigUint::from(ape.gaps().len()), ape.genus().unwrap());
        let pf = ape.pseudo_frobenius();
        prop_assert_eq!(pf.last().unwrap(), &ape.frobenius());
        for u in &pf {
            prop_assert!(!ape.contains(u));
            for g in &gens {
                prop_assert!(ape.contains(&(u + BigInt::from(*g))));
            }
        }
    }

    #[test]
    fn generator_order_and_duplicates_are_irrelevant(gens in coprime_gens(), seed in any::<u64>()) {
        let mut shuffled = gens.clone();
        shuffled.extend_from_slice(&gens[..1]);
        let shift = (seed % shuffled.len() as u64) as usize;
        shuffled.rotate_left(shift);
        let lhs = apery_set(&GeneratorList::from_u64s(&gens).unwrap()).unwrap();
        let rhs = apery_set(&GeneratorList::from_u64s(&shuffled).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn opt_never_exceeds_greedy(mut coins in prop::collection::vec(2u64..30, 0..4), amount in 0u64..500) {
        coins.push(1);
        let system = CoinSystem::from_u64s(&coins).unwrap();
        let opt = opt_count(&system, &big(amount)).unwrap();
        prop_assert!(big(opt) <= greedy_count(&system, &big(amount)));
        if amount <= 120 {
            prop_assert_eq!(opt, common::brute_opt(&to_u64s(system.denominations()), amount));
        }
    }

    #[test]
    fn orderly_matches_exhaustive_scan(mut coins in prop::collection::vec(2u64..=50, 1..5)) {
        coins.push(1);
        let system = CoinSystem::from_u64s(&coins).unwrap();
        let top = system.denominations().last().unwrap().to_usize().unwrap();
        let bound = 2 * top * top;
        let table = opt_table(&system, bound);
        let first_failure = (1..=bound).find(|&m| big(table[m] as u64) < greedy_count(&system, &big(m as u64)));
        let verdict = is_orderly(&system).unwrap();
        prop_assert_eq!(verdict.orderly, first_failure.is_none());
        if let Some(c) = verdict.counterexample {
            let m = c.to_usize().unwrap();
            prop_assert!(big(table[m] as u64) < greedy_count(&system, &c));
        }
    }

    #[test]
    fn greedy_presentations_are_optimal_and_well_formed(b in 2u32..=6, k in 1u32..=5, amount in 0u64..3000) {
        let p = greedy_presentation(b, k, &big(amount)).unwrap();
        prop_assert!(p.satisfies_greedy_conditions());
        prop_assert_eq!(p.amount(), big(amount));
        let system = CoinSystem::repunit_base(b, k).unwrap();
        prop_assert_eq!(p.digit_sum(), big(opt_count(&system, &big(amount)).unwrap()));
    }

    #[test]
    fn colex_order_bounds_weight(b in 2u32..=5, k in 1u32..=5, r1 in 0u64..5000, r2 in 0u64..5000) {
        let x = greedy_presentation(b, k, &big(r1)).unwrap();
        let y = greedy_presentation(b, k, &big(r2)).unwrap();
        let order = colex_compare(x.digits(), y.digits()).unwrap();
        prop_assert_eq!(order, colex_compare(y.digits(), x.digits()).unwrap().reverse());
        if order != Ordering::Greater {
            prop_assert!(x.weight() <= y.weight());
        }
    }

    #[test]
    fn prefix_sum_matches_iteration(b in 2u32..=6, k in 1u32..=6, n in 0u64..2000) {
        let direct: BigUint = (0..=n).map(|r| digit_sum(b, k, &big(r)).unwrap()).sum();
        prop_assert_eq!(digit_sum_prefix(b, k, &big(n)).unwrap(), direct);
    }

    #[test]
    fn closed_forms_match_sieve(b in 2u32..=4, k in 1u32..=4, d in 1u64..=7, a in 2u64..=30) {
        prop_assume!(common::coprime(&[a, d]) && a + 1 >= k as u64);
        let p = FamilyParams::from_u64s(a, b, d, k).unwrap();
        let gens = to_u64s(build_generators(&p).unwrap().elements());
        let expected = common::sieve(&gens);
        prop_assert_eq!(frobenius_closed(&p).unwrap(), BigInt::from(expected.frobenius));
        prop_assert_eq!(genus_closed(&p).unwrap(), big(expected.genus));
        let ape = apery_closed(&p, &OracleConfig::default()).unwrap();
        prop_assert_eq!(to_u64s(ape.minima()), expected.apery);
    }

    #[test]
    fn output_record_round_trips(
        f in any::<i64>(),
        g in any::<u64>(),
        pf in prop::collection::vec(any::<i128>(), 1..4),
        huge in any::<bool>(),
    ) {
        let scale = if huge { BigInt::from(u128::MAX) } else { BigInt::from(1) };
        let record = OutputRecord {
            input: InputEcho {
                family: Some("repunit(b=3, n=2)".into()),
                params: Some(ParamsEcho { a: Decimal(BigInt::from(4)), b: 3, d: Decimal(BigInt::from(1)), k: 1 }),
                generators: vec![Decimal(BigInt::from(4)), Decimal(BigInt::from(13) * &scale)],
            },
            engine: Engine::ClosedForm,
            frobenius: Decimal(BigInt::from(f) * &scale),
            genus: Decimal(BigInt::from(g)),
            semigroup_type: pf.len(),
            pf: pf.iter().map(|&v| Decimal(BigInt::from(v))).collect(),
            apery: huge.then(|| vec![Decimal(BigInt::from(0))]),
            gaps: None,
        };
        let text = serde_json::to_string(&record).unwrap();
        let back: OutputRecord = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, record);
    }
}

#[test]
fn grid_report_is_independent_of_worker_count() {
    let grid = GridSpec {
        a: (2, 25),
        b: (2, 3),
        d: (1, 3),
        k: (1, 5),
        check_monotone: true,
        include_hypothesis_violations: true,
        ..GridSpec::default()
    };
    let one = cross_check_with_jobs(&grid, 1).unwrap().without_timing();
    let four = cross_check_with_jobs(&grid, 4).unwrap().without_timing();
    assert_eq!(one, four);
    assert!(one.is_clean());
    assert_eq!(one.cases_passed, one.cases_run);
}

#[test]
fn property_suite_is_reproducible() {
    let first = property_suite(42, 30).unwrap().without_timing();
    let second = property_suite(42, 30).unwrap().without_timing();
    assert_eq!(first, second);
    assert!(first.is_clean());
    assert_eq!(first.cases_run, 30);
}
