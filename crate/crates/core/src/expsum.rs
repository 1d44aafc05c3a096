//! Finite exponential sums `Σ c_n e^{n y}` in a single variable, with exact
//! rational coefficients. Used to expand the closed-form catalog formulas.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExpSum(BTreeMap<i64, Rational>);

impl ExpSum {
    pub fn one() -> Self {
        ExpSum::monomial(Rational::one(), 0)
    }

    pub fn monomial(coeff: Rational, exponent: i64) -> Self {
        let mut s = ExpSum::default();
        s.add_term(coeff, exponent);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Rational, i64)>>(terms: I) -> Self {
        let mut s = ExpSum::default();
        for (c, e) in terms {
            s.add_term(c, e);
        }
        s
    }

    pub fn add_term(&mut self, coeff: Rational, exponent: i64) {
        let slot = self.0.entry(exponent).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.0.remove(&exponent);
        }
    }

    /// Terms ordered by decreasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, i64)> {
        self.0.iter().rev().map(|(e, c)| (c, *e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, exponent: i64) -> Rational {
        self.0.get(&exponent).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mul(&self, other: &ExpSum) -> ExpSum {
        let mut out = ExpSum::default();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &other.0 {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> ExpSum {
        (0..n).fold(ExpSum::one(), |acc, _| acc.mul(self))
    }

    /// Substitutes `y ↦ k·y`.
    pub fn dilate(&self, k: i64) -> ExpSum {
        ExpSum::from_terms(self.0.iter().map(|(e, c)| (c.clone(), e * k)))
    }

    /// `sinh(y) = ½e^{y} − ½e^{−y}`.
    pub fn sinh() -> ExpSum {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        ExpSum::from_terms([(half.clone(), 1), (-half, -1)])
    }

    /// `sinh(y)^m` by the binomial theorem:
    /// `2^{−m} Σ_j (−1)^j C(m, j) e^{(m−2j) y}`.
    pub fn sinh_pow(m: u32) -> ExpSum {
        let scale = Rational::new(BigInt::one(), BigInt::from(2).pow(m));
        ExpSum::from_terms((0..=m).map(|j| {
            let c = Rational::from_integer(binomial(BigInt::from(m), BigInt::from(j)));
            let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
            (sign * c * &scale, i64::from(m) - 2 * i64::from(j))
        }))
    }
}
