mod common;

use std::collections::BTreeSet;

use donaldson::error::Error;
use donaldson::rational::Rational;
use donaldson::recurrence::{minimal_recurrence, prony_recover, PronyDecomposition};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;

fn exp_sum(pairs: &[(Rational, i64)], len: usize) -> Vec<Rational> {
    (0..len)
        .map(|d| {
            pairs
                .iter()
                .map(|(a, s)| a * Rational::from_integer(Pow::pow(BigInt::from(*s), d as u32)))
                .fold(Rational::zero(), |acc, x| acc + x)
        })
        .collect()
}

fn instance() -> impl Strategy<Value = Vec<(Rational, i64)>> {
    prop::collection::btree_set(-50i64..=50, 1..=8).prop_flat_map(|roots| {
        let k = roots.len();
        (
            Just(roots),
            prop::collection::vec((prop_oneof![-30i64..=-1, 1i64..=30], 1i64..=12), k),
        )
            .prop_map(|(roots, coeffs)| {
                roots
                    .into_iter()
                    .zip(coeffs)
                    .map(|(s, (p, q))| (Rational::new(BigInt::from(p), BigInt::from(q)), s))
                    .collect()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn prony_is_sound(pairs in instance()) {
        let k = pairs.len();
        let seq = exp_sum(&pairs, 2 * k + 4);
        let dec = prony_recover(&seq).unwrap();
        let expect = PronyDecomposition::from_pairs(pairs.iter().map(|(a, s)| (a.clone(), BigInt::from(*s))));
        prop_assert_eq!(dec, expect);
    }

    #[test]
    fn minimal_order_matches_brute_force(pairs in instance().prop_filter("k <= 4", |p| p.len() <= 4)) {
        let k = pairs.len();
        let seq = exp_sum(&pairs, 2 * k + 4);
        let info = minimal_recurrence(&seq).unwrap();
        prop_assert_eq!(info.order, k);
        prop_assert_eq!(common::brute_force_order(&seq), k);
    }

    #[test]
    fn shift_scales_alpha_by_root(pairs in instance().prop_filter("no zero root", |p| p.iter().all(|(_, s)| *s != 0))) {
        let k = pairs.len();
        let seq = exp_sum(&pairs, 2 * k + 5);
        let base = prony_recover(&seq[..2 * k + 4]).unwrap();
        let shifted = prony_recover(&seq[1..]).unwrap();
        prop_assert_eq!(base.roots(), shifted.roots());
        for p in &base.pairs {
            let scaled = &p.alpha * Rational::from_integer(p.root.clone());
            prop_assert_eq!(shifted.alpha_for(&p.root), Some(&scaled));
        }
    }
}

#[test]
fn zero_root_and_repeated_root() {
    let seq = exp_sum(&[(Rational::one(), 0), (Rational::from_integer(3.into()), 2)], 8);
    let dec = prony_recover(&seq).unwrap();
    assert_eq!(
        dec.roots().into_iter().collect::<BTreeSet<_>>(),
        [BigInt::from(0), BigInt::from(2)].into()
    );
    // d·2^d has a double root at 2.
    let rep: Vec<Rational> = (0..10)
        .map(|d| Rational::from_integer(BigInt::from(d) * Pow::pow(BigInt::from(2), d as u32)))
        .collect();
    assert!(matches!(prony_recover(&rep), Err(Error::RepeatedRoot(_))));
    // Half-integer roots are rejected.
    let half: Vec<Rational> = (0..8)
        .map(|d| Pow::pow(Rational::new(1.into(), 2.into()), d as u32))
        .collect();
    assert!(matches!(prony_recover(&half), Err(Error::NonIntegerRoot(_))));
}

#[test]
fn bareiss_oracle_sanity() {
    let m = |v: &[&[i64]]| {
        v.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect::<Vec<Vec<BigInt>>>()
    };
    assert_eq!(common::bareiss_rank(m(&[&[1, 2], &[2, 4]])), 1);
    assert_eq!(common::bareiss_rank(m(&[&[0, 1], &[1, 0], &[1, 1]])), 2);
    assert_eq!(common::bareiss_rank(m(&[&[0, 0]])), 0);
}
