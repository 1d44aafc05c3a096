//! The structural series `q = exp(Q/2) · Σ a_s e^{K_s}` and its ray data.
//!
//! The multivariate polynomials `q_d` are never materialized; everything is
//! read off along a ray `S`, where `C_d(S) = Σ a_s (K_s·S)^d` and
//! `q = exp(Q/2)·C` converts between the two sequences.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{HClass, Lattice};
use crate::rational::{bigint_to_f64, factorial, from_bigint, rational_to_f64, serde_rational, Rational};

/// Whether `q` is an even or odd function; fixed by `½(b⁺+1) mod 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `None` when `b⁺` is even (the degree congruence is undefined there).
    pub fn from_b_plus(b_plus: usize) -> Option<Parity> {
        if b_plus.is_multiple_of(2) {
            return None;
        }
        Some(if b_plus.div_ceil(2).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        })
    }

    pub fn admits_degree(self, d: usize) -> bool {
        match self {
            Parity::Even => d.is_multiple_of(2),
            Parity::Odd => !d.is_multiple_of(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(rename = "K")]
    pub k: HClass,
}

impl Term {
    pub fn new(a: Rational, k: HClass) -> Self {
        Term { a, k }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DonaldsonSeries {
    pub lattice: Lattice,
    pub terms: Vec<Term>,
    pub parity: Parity,
}

/// Values `C_0(S), …, C_D(S)` along one ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaySequence {
    #[serde(rename = "S")]
    pub s: HClass,
    #[serde(rename = "qS", with = "serde_rational")]
    pub q_s: Rational,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub values: Vec<Rational>,
}

impl DonaldsonSeries {
    /// Checks term dimensions only; structural invariants are reported by
    /// [`crate::recovery::verify_series`].
    pub fn new(lattice: Lattice, terms: Vec<Term>, parity: Parity) -> Result<Self> {
        for t in &terms {
            check_dim(lattice.rank, t.k.len())?;
        }
        Ok(DonaldsonSeries { lattice, terms, parity })
    }

    /// Like [`DonaldsonSeries::new`] but merges repeated classes and drops
    /// zero coefficients; terms come out sorted by class.
    pub fn normalized(lattice: Lattice, terms: Vec<Term>, parity: Parity) -> Result<Self> {
        let mut acc: Vec<(HClass, Rational)> = Vec::new();
        let mut index: HashMap<HClass, usize> = HashMap::new();
        for t in terms {
            check_dim(lattice.rank, t.k.len())?;
            match index.get(&t.k) {
                Some(&i) => acc[i].1 += t.a,
                None => {
                    index.insert(t.k.clone(), acc.len());
                    acc.push((t.k, t.a));
                }
            }
        }
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, a)| Term { a, k })
            .collect();
        terms.sort_by(|x, y| x.k.cmp(&y.k));
        Ok(DonaldsonSeries { lattice, terms, parity })
    }

    /// Same series with terms in canonical (class-sorted) order.
    pub fn canonical(&self) -> DonaldsonSeries {
        let mut s = self.clone();
        s.terms.sort_by(|x, y| x.k.cmp(&y.k));
        s
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank
    }

    /// Pairings `K_s · S` for every term.
    pub fn pairings(&self, s: &HClass) -> Result<Vec<BigInt>> {
        let gs = self.lattice.dual_coords(s)?;
        Ok(self
            .terms
            .iter()
            .map(|t| t.k.0.iter().zip(&gs).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn total_mass(&self) -> Rational {
        self.terms.iter().map(|t| num_traits::Signed::abs(&t.a)).sum()
    }
}

/// `C_d(S) = Σ_s a_s (K_s·S)^d` for `d = 0..=degree`, with `0⁰ = 1`.
pub fn c_on_ray(series: &DonaldsonSeries, s: &HClass, degree: usize) -> Result<RaySequence> {
    let pairings = series.pairings(s)?;
    let q_s = from_bigint(series.lattice.square(s)?);
    let mut values = vec![Rational::zero(); degree + 1];
    for (t, p) in series.terms.iter().zip(&pairings) {
        let mut power = BigInt::one();
        for v in values.iter_mut() {
            *v += &t.a * from_bigint(power.clone());
            power *= p;
        }
    }
    Ok(RaySequence {
        s: s.clone(),
        q_s,
        values,
    })
}

/// `d! / ((d−2i)! · i! · 2^i)`.
fn conversion_coefficient(d: usize, i: usize) -> BigInt {
    factorial(d) / (factorial(d - 2 * i) * factorial(i) * BigInt::from(2).pow(i as u32))
}

/// `q = exp(Q/2)·C` along the ray:
/// `q_d = Σ_{i ≤ d/2} d!/((d−2i)! i! 2^i) · Q(S)^i · c_{d−2i}`.
pub fn q_from_c(seq: &RaySequence) -> Vec<Rational> {
    convert(&seq.values, &seq.q_s, false)
}

/// The inverse: `C_d = Σ_i (−1)^i d!/((d−2i)! i! 2^i) · Q^i · q_{d−2i}`.
pub fn c_from_q(qvals: &[Rational], q_s: &Rational) -> Vec<Rational> {
    convert(qvals, q_s, true)
}

fn convert(vals: &[Rational], q_s: &Rational, alternate: bool) -> Vec<Rational> {
    let powers: Vec<Rational> = (0..=vals.len() / 2).map(|i| Pow::pow(q_s, i)).collect();
    (0..vals.len())
        .map(|d| {
            (0..=d / 2)
                .map(|i| {
                    let mut c = from_bigint(conversion_coefficient(d, i)) * &powers[i] * &vals[d - 2 * i];
                    if alternate && i % 2 == 1 {
                        c = -c;
                    }
                    c
                })
                .sum()
        })
        .collect()
}

/// `log|x|` exponents above this overflow `f64`.
const MAX_EXPONENT: f64 = 709.0;

/// Floating evaluation of `q(h) = exp(Q(h)/2) · Σ a_s exp(K_s·h)` at a
/// rational point.
pub fn eval_q(series: &DonaldsonSeries, h: &[Rational]) -> Result<f64> {
    check_dim(series.rank(), h.len())?;
    let g = &series.lattice.gram;
    let gh: Vec<Rational> = g
        .iter()
        .map(|row| {
            row.iter()
                .zip(h)
                .map(|(&x, y)| Rational::from_integer(x.into()) * y)
                .sum()
        })
        .collect();
    let q: Rational = h.iter().zip(&gh).map(|(a, b)| a * b).sum();
    let half_q = rational_to_f64(&q) / 2.0;
    let exponents: Vec<f64> = series
        .terms
        .iter()
        .map(|t| {
            let kh: Rational = t.k.0.iter().zip(&gh).map(|(k, y)| from_bigint(k.clone()) * y).sum();
            half_q + rational_to_f64(&kh)
        })
        .collect();
    sum_exponentials(series, &exponents)
}

/// `q(tS)` for real `t`, using exact integer pairings.
pub fn eval_q_on_ray(series: &DonaldsonSeries, s: &HClass, t: f64) -> Result<f64> {
    let q_s = bigint_to_f64(&series.lattice.square(s)?);
    let pairings = series.pairings(s)?;
    let exponents: Vec<f64> = pairings
        .iter()
        .map(|p| t * t * q_s / 2.0 + t * bigint_to_f64(p))
        .collect();
    sum_exponentials(series, &exponents)
}

fn sum_exponentials(series: &DonaldsonSeries, exponents: &[f64]) -> Result<f64> {
    if let Some(x) = exponents.iter().find(|x| !x.is_finite() || **x > MAX_EXPONENT) {
        return Err(Error::Overflow(format!("{x}")));
    }
    Ok(series
        .terms
        .iter()
        .zip(exponents)
        .map(|(t, x)| rational_to_f64(&t.a) * x.exp())
        .sum())
}

/// True iff the term set is closed under `K ↦ −K` with `a(−K) = ±a(K)` as the
/// declared parity requires.
pub fn check_parity(series: &DonaldsonSeries) -> bool {
    let map: HashMap<&HClass, &Rational> = series.terms.iter().map(|t| (&t.k, &t.a)).collect();
    if map.len() != series.terms.len() {
        return false;
    }
    series.terms.iter().all(|t| {
        let partner = map.get(&t.k.neg());
        match (series.parity, partner) {
            (Parity::Even, Some(&b)) => *b == t.a,
            (Parity::Odd, Some(&b)) => *b == -t.a.clone(),
            (_, None) => false,
        }
    })
}

/// Connected sum with a negative-definite `CP²`: the lattice gains a `⟨−1⟩`
/// summand generated by `E`, and the series is multiplied by `cosh E`.
pub fn blow_up(series: &DonaldsonSeries) -> DonaldsonSeries {
    let lattice = series.lattice.direct_sum(&Lattice::diagonal(0, 1));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let terms = series
        .terms
        .iter()
        .flat_map(|t| {
            [
                Term::new(&t.a * &half, t.k.extend(1)),
                Term::new(&t.a * &half, t.k.extend(-1)),
            ]
        })
        .collect();
    DonaldsonSeries {
        lattice,
        terms,
        parity: series.parity,
    }
}
