//! Geometric read-outs of the basic classes: the seminorm `J(h) = max K_s·h`,
//! the genus bound `2g − 2 ≥ Σ·Σ + J(Σ)`, the asymptotic remainder of
//! `log q`, and the (conjectural) check `K² = 2χ + 3σ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::HClass;
use crate::rational::{bigint_to_f64, rational_to_f64, serde_bigint};
use crate::series::DonaldsonSeries;

/// `J(h) = max_s K_s · h`.
pub fn j_norm(series: &DonaldsonSeries, h: &HClass) -> Result<BigInt> {
    series.pairings(h)?.into_iter().max().ok_or(Error::EmptySeries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusBoundReport {
    #[serde(rename = "Sigma")]
    pub sigma_class: HClass,
    #[serde(with = "serde_bigint")]
    pub sigma_self: BigInt,
    #[serde(with = "serde_bigint")]
    pub j_value: BigInt,
    #[serde(with = "serde_bigint")]
    pub bound_2g_minus_2: BigInt,
    #[serde(with = "serde_bigint")]
    pub min_genus: BigInt,
}

/// Lower bound on the genus of an embedded surface representing `Σ`.
/// Requires `Σ ≠ 0` and `Σ·Σ ≥ 0`.
pub fn genus_lower_bound(series: &DonaldsonSeries, sigma: &HClass) -> Result<GenusBoundReport> {
    let sigma_self = series.lattice.square(sigma)?;
    if sigma.is_zero() {
        return Err(Error::HypothesisViolated("Σ must be a nonzero class".into()));
    }
    if sigma_self.is_negative() {
        return Err(Error::HypothesisViolated(format!(
            "Σ·Σ = {sigma_self} < 0; the bound needs a normal bundle of non-negative degree"
        )));
    }
    let j_value = j_norm(series, sigma)?;
    let raw = &sigma_self + &j_value;
    let shifted: BigInt = &raw + 2;
    let min_genus = shifted.div_ceil(&BigInt::from(2)).max(BigInt::zero());
    Ok(GenusBoundReport {
        sigma_class: sigma.clone(),
        sigma_self,
        j_value,
        bound_2g_minus_2: raw,
        min_genus,
    })
}

/// `log q(tS) − t²Q(S)/2 − t·J(S)`, evaluated as
/// `log Σ a_s exp(t (K_s·S − J(S)))` so that no exponent is positive.
pub fn asymptotic_remainder(series: &DonaldsonSeries, s: &HClass, t: f64) -> Result<f64> {
    let pairings = series.pairings(s)?;
    let j = pairings.iter().max().ok_or(Error::EmptySeries)?;
    let total: f64 = series
        .terms
        .iter()
        .zip(&pairings)
        .map(|(term, p)| rational_to_f64(&term.a) * (t * bigint_to_f64(&(p - j))).exp())
        .sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::NonPositiveValue(format!("{total:e} · exp(t²Q/2 + tJ)")));
    }
    Ok(total.ln())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumerologyViolation {
    #[serde(rename = "K")]
    pub k: HClass,
    #[serde(with = "serde_bigint")]
    pub k_squared: BigInt,
    #[serde(with = "serde_bigint")]
    pub expected: BigInt,
}

/// Label attached to every numerology report: the relation is a conjecture.
pub const NUMEROLOGY_LABEL: &str = "conjectural: K_s^2 = 2 chi + 3 sigma";

/// Terms whose class violates `K² = 2χ + 3σ`.
pub fn numerology_check(series: &DonaldsonSeries, chi: i64, sigma: i64) -> Result<Vec<NumerologyViolation>> {
    let expected = BigInt::from(2 * chi + 3 * sigma);
    let mut out = Vec::new();
    for t in &series.terms {
        let k_squared = series.lattice.square(&t.k)?;
        if k_squared != expected {
            out.push(NumerologyViolation {
                k: t.k.clone(),
                k_squared,
                expected: expected.clone(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::rational::{int, ratio};
    use crate::series::{Parity, Term};

    fn pm(lattice: Lattice, k: &[i64], a: crate::Rational, parity: Parity) -> DonaldsonSeries {
        let k = HClass::from_i64s(k);
        let b = match parity {
            Parity::Even => a.clone(),
            Parity::Odd => -a.clone(),
        };
        DonaldsonSeries::new(lattice, vec![Term::new(a, k.clone()), Term::new(b, k.neg())], parity).unwrap()
    }

    #[test]
    fn j_norm_basics() {
        let s = pm(Lattice::diagonal(0, 1), &[1], ratio(1, 2), Parity::Even);
        assert_eq!(j_norm(&s, &HClass::from_i64s(&[1])).unwrap(), BigInt::from(1));
        assert_eq!(j_norm(&s, &HClass::from_i64s(&[-3])).unwrap(), BigInt::from(3));
        let empty = DonaldsonSeries::new(Lattice::diagonal(1, 0), vec![], Parity::Even).unwrap();
        assert_eq!(j_norm(&empty, &HClass::from_i64s(&[1])), Err(Error::EmptySeries));
    }

    #[test]
    fn genus_bound_arithmetic() {
        // Σ·Σ = 2 on ⟨1⟩ ⊕ ⟨1⟩ ⊕ ⟨−1⟩ via Σ = (1, 1, 0); K·Σ = 4 via K = (3, 1, 1).
        let s = pm(Lattice::diagonal(2, 1), &[3, 1, 1], int(1), Parity::Even);
        let r = genus_lower_bound(&s, &HClass::from_i64s(&[1, 1, 0])).unwrap();
        assert_eq!(r.sigma_self, BigInt::from(2));
        assert_eq!(r.j_value, BigInt::from(4));
        assert_eq!(r.bound_2g_minus_2, BigInt::from(6));
        assert_eq!(r.min_genus, BigInt::from(4));

        let neg = genus_lower_bound(&s, &HClass::from_i64s(&[0, 0, 1]));
        assert!(matches!(neg, Err(Error::HypothesisViolated(_))));
        let zero = genus_lower_bound(&s, &HClass::zero(3));
        assert!(matches!(zero, Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn min_genus_floors_at_zero() {
        let s = DonaldsonSeries::new(
            Lattice::hyperbolic(),
            vec![Term::new(int(1), HClass::zero(2))],
            Parity::Even,
        )
        .unwrap();
        let r = genus_lower_bound(&s, &HClass::from_i64s(&[1, 0])).unwrap();
        assert_eq!(r.bound_2g_minus_2, BigInt::from(0));
        assert_eq!(r.min_genus, BigInt::from(1));
        let mut far = s.clone();
        far.terms = vec![Term::new(int(1), HClass::from_i64s(&[0, -6]))];
        let r = genus_lower_bound(&far, &HClass::from_i64s(&[1, 0])).unwrap();
        assert_eq!(r.bound_2g_minus_2, BigInt::from(-6));
        assert_eq!(r.min_genus, BigInt::from(0));
    }

    #[test]
    fn remainder_closed_forms() {
        let s = pm(Lattice::diagonal(0, 1), &[1], ratio(1, 2), Parity::Even);
        let e = HClass::from_i64s(&[1]);
        let t: f64 = 20.0;
        let expected = (0.5 * (1.0 + (-2.0 * t).exp())).ln();
        let got = asymptotic_remainder(&s, &e, t).unwrap();
        assert!((got - expected).abs() < 1e-12);
        assert!((got + std::f64::consts::LN_2).abs() < 1e-12);

        let odd = pm(Lattice::hyperbolic(), &[1, 0], ratio(1, 2), Parity::Odd);
        let err = asymptotic_remainder(&odd, &HClass::from_i64s(&[1, 0]), 5.0);
        assert!(matches!(err, Err(Error::NonPositiveValue(_))));
    }

    #[test]
    fn numerology() {
        let s = pm(Lattice::diagonal(2, 1), &[3, 1, 1], int(1), Parity::Even);
        // K² = 9 + 1 − 1 = 9.
        assert!(numerology_check(&s, 0, 3).unwrap().is_empty());
        let v = numerology_check(&s, 24, -16).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].k_squared, BigInt::from(9));
    }
}
