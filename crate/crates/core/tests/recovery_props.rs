mod common;

use donaldson::error::Error;
use donaldson::lattice::HClass;
use donaldson::rational::int;
use donaldson::recovery::{
    plan_rays, recover_on_ray, recover_series, recover_series_report, verify_series, RayOracle, RecoveryConfig,
};
use donaldson::series::{c_on_ray, DonaldsonSeries, Term};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg() -> RecoveryConfig {
    RecoveryConfig::new(10, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn recover_inverts_expansion(seed in any::<u64>()) {
        let s = common::random_series(seed, 5, 8, 10);
        let got = recover_series(&s, &s.lattice, &cfg()).unwrap();
        prop_assert_eq!(&got, &s.canonical());
        prop_assert!(verify_series(&got).is_empty());
    }

    #[test]
    fn recovered_series_matches_oracle_on_fresh_rays(seed in any::<u64>()) {
        let s = common::random_series(seed, 4, 6, 6);
        let got = recover_series(&s, &s.lattice, &cfg()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(7));
        for _ in 0..10 {
            let t = common::random_ray(&mut rng, s.rank(), 20);
            prop_assert_eq!(c_on_ray(&got, &t, 12).unwrap(), s.ray_sequence(&t, 12).unwrap());
        }
    }

    #[test]
    fn separating_ray_sees_every_class(seed in any::<u64>()) {
        let s = common::random_series(seed, 5, 8, 10);
        let plan = plan_rays(&s.lattice, &cfg()).unwrap();
        let on_sep = recover_on_ray(&s, &plan.separating, &cfg()).unwrap();
        prop_assert_eq!(on_sep.pairs.len(), s.terms.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..5 {
            let t = common::random_ray(&mut rng, s.rank(), 2);
            let other = recover_on_ray(&s, &t, &cfg()).unwrap();
            prop_assert!(other.pairs.len() <= on_sep.pairs.len());
        }
    }
}

#[test]
fn report_lists_every_ray() {
    let s = common::random_series(11, 4, 6, 5);
    let report = recover_series_report(&s, &s.lattice, &cfg()).unwrap();
    let plan = plan_rays(&s.lattice, &cfg()).unwrap();
    assert_eq!(report.rays.len(), 1 + s.rank());
    assert_eq!(report.verification.len(), plan.verification.len());
    assert!(report.verification.iter().all(|v| v.agrees));
    assert_eq!(report.matching.len(), s.terms.len());
    assert_eq!(report.series, s.canonical());
}

#[test]
fn too_many_classes_for_budget() {
    let s = common::random_series(5, 5, 8, 10);
    let tight = RecoveryConfig::new(10, 1);
    if s.terms.len() > 1 {
        assert!(matches!(
            recover_series(&s, &s.lattice, &tight),
            Err(Error::BudgetExceeded { .. }) | Err(Error::InsufficientData(_))
        ));
    }
}

#[test]
fn coordinates_beyond_bound_are_caught() {
    // K = (7, 7) on ⟨1⟩ ⊕ ⟨−1⟩ but the declared bound is 1.
    let l = donaldson::lattice::Lattice::diagonal(1, 1);
    let k = HClass::from_i64s(&[7, 7]);
    let s = DonaldsonSeries::new(
        l.clone(),
        vec![Term::new(int(1), k.clone()), Term::new(int(-1), k.neg())],
        donaldson::series::Parity::Odd,
    )
    .unwrap();
    let res = recover_series(&s, &l, &RecoveryConfig::new(1, 2));
    assert!(res.is_err() || res.unwrap() != s.canonical());
}
