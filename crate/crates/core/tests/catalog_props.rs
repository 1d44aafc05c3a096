use std::collections::BTreeSet;

use donaldson::catalog::{dolgachev_conjecture, elliptic, get, k3, list, sinh_quotient_expand};
use donaldson::expsum::ExpSum;
use donaldson::lattice::HClass;
use donaldson::recovery::verify_series;
use donaldson::series::blow_up;
use num_bigint::BigInt;
use num_traits::One;

#[test]
fn every_entry_is_structurally_valid() {
    for name in list() {
        let e = get(name).unwrap();
        assert!(
            verify_series(&e.series).is_empty(),
            "{name}: {:?}",
            verify_series(&e.series)
        );
        assert!(e.series.lattice.validate().iter().all(|v| v.is_warning()), "{name}");
        let sig = e.series.lattice.signature();
        assert_eq!(sig.sigma(), e.sigma, "{name}");
        assert_eq!(e.series.lattice.rank as i64, e.chi - 2, "{name}");
    }
}

#[test]
fn blow_up_matches_catalog() {
    assert_eq!(blow_up(&k3().series), get("k3#cp2bar").unwrap().series);
    assert_eq!(get("k3#cp2bar#cp2bar").unwrap().series, blow_up(&blow_up(&k3().series)));
}

#[test]
fn elliptic_classes_are_multiples_of_fibre() {
    for pg in 1..=6u32 {
        let e = elliptic(pg).unwrap();
        assert_eq!(dolgachev_conjecture(pg, &[]).unwrap().series, e.series);
        let f = e.series.terms.iter().find(|t| !t.k.is_zero()).map(|t| t.k.clone());
        let expected: BTreeSet<i64> = (-(pg as i64 - 1)..=(pg as i64 - 1)).step_by(2).collect();
        let mut got = BTreeSet::new();
        let unit = match &f {
            Some(k) => {
                let g =
                    k.0.iter()
                        .fold(BigInt::from(0), |acc, x| num_integer::Integer::gcd(&acc, x));
                HClass(k.0.iter().map(|x| x / &g).collect())
            }
            None => HClass::zero(e.series.rank()),
        };
        for t in &e.series.terms {
            let n = if unit.is_zero() {
                0
            } else {
                let i = unit.0.iter().position(|x| x != &BigInt::from(0)).unwrap();
                i64::try_from(&t.k.0[i] / &unit.0[i]).unwrap()
            };
            assert_eq!(t.k, unit.scale(&BigInt::from(n)));
            got.insert(n);
        }
        assert_eq!(got, expected, "p_g = {pg}");
    }
}

#[test]
fn sinh_quotient_times_sinh() {
    for m in 1..=12u32 {
        let q = ExpSum::from_terms(sinh_quotient_expand(m).unwrap());
        let two_sinh = ExpSum::from_terms([(donaldson::rational::int(1), 1), (donaldson::rational::int(-1), -1)]);
        let lhs = q.mul(&two_sinh);
        let rhs = ExpSum::from_terms([
            (donaldson::rational::int(1), m as i64),
            (donaldson::rational::int(-1), -(m as i64)),
        ]);
        assert_eq!(lhs, rhs, "m = {m}");
        assert!(q.terms().all(|(c, _)| c.is_one()));
    }
}

#[test]
fn unknown_names_are_rejected() {
    assert!(get("enriques").is_err());
    assert!(get("elliptic_pg0").is_err());
    assert!(get("dolgachev_pg1_m2_4").is_err());
}
