//! Integer-root linear recurrences on exact sequences.
//!
//! A sequence `c_d = Σ α_s s^d` over finitely many distinct integers `s` is
//! annihilated by `∏ (x − s)`. This module finds the minimal annihilator with
//! Berlekamp–Massey over `ℚ`, certifies minimality by a Hankel rank, splits
//! it into integer linear factors, and solves for the weights `α_s`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{self, SturmChain};
use crate::rational::{format_rational, from_bigint, serde_bigint, serde_rational, Rational};

/// Minimal recurrence: `Σ_j charpoly[j] · c_{d+j} = 0` for every valid `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceInfo {
    pub order: usize,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub charpoly: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PronyPair {
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    #[serde(with = "serde_bigint")]
    pub root: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PronyDecomposition {
    /// Sorted by decreasing root.
    pub pairs: Vec<PronyPair>,
}

impl PronyDecomposition {
    pub fn from_pairs<I: IntoIterator<Item = (Rational, BigInt)>>(pairs: I) -> Self {
        let mut pairs: Vec<PronyPair> = pairs
            .into_iter()
            .map(|(alpha, root)| PronyPair { alpha, root })
            .collect();
        pairs.sort_by(|a, b| b.root.cmp(&a.root));
        PronyDecomposition { pairs }
    }

    /// `Σ α_s s^d` for `d < len`.
    pub fn reconstruct(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for p in &self.pairs {
            let mut power = BigInt::one();
            for v in out.iter_mut() {
                *v += &p.alpha * from_bigint(power.clone());
                power *= &p.root;
            }
        }
        out
    }

    pub fn roots(&self) -> Vec<BigInt> {
        self.pairs.iter().map(|p| p.root.clone()).collect()
    }

    pub fn alpha_for(&self, root: &BigInt) -> Option<&Rational> {
        self.pairs.iter().find(|p| &p.root == root).map(|p| &p.alpha)
    }
}

impl fmt::Display for PronyDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", format_rational(&p.alpha), p.root)?;
        }
        write!(f, "}}")
    }
}

/// Berlekamp–Massey over `ℚ`. Returns the connection polynomial
/// `C(x) = 1 + C_1 x + … ` (ascending) and the register length `L`.
fn berlekamp_massey(seq: &[Rational]) -> (Vec<Rational>, usize) {
    let mut c = vec![Rational::one()];
    let mut b = vec![Rational::one()];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut prev = Rational::one();
    for i in 0..seq.len() {
        let delta: Rational = c
            .iter()
            .enumerate()
            .filter(|(j, _)| *j <= i)
            .map(|(j, cj)| cj * &seq[i - j])
            .sum();
        if delta.is_zero() {
            shift += 1;
            continue;
        }
        let scale = &delta / &prev;
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, Rational::zero());
        }
        for (j, bj) in b.iter().enumerate() {
            next[j + shift] -= &scale * bj;
        }
        if 2 * len <= i {
            b = std::mem::replace(&mut c, next);
            len = i + 1 - len;
            prev = delta;
            shift = 1;
        } else {
            c = next;
            shift += 1;
        }
    }
    (c, len)
}

fn hankel(seq: &[Rational], n: usize) -> linalg::Matrix {
    (0..n).map(|i| (0..n).map(|j| seq[i + j].clone()).collect()).collect()
}

/// Minimal monic annihilating polynomial of `seq`, certified by a full-rank
/// leading Hankel block.
pub fn minimal_recurrence(seq: &[Rational]) -> Result<RecurrenceInfo> {
    if seq.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 terms, got {}",
            seq.len()
        )));
    }
    let (conn, order) = berlekamp_massey(seq);
    if 2 * order > seq.len() {
        return Err(Error::InsufficientData(format!(
            "shortest recurrence has order {order} > {} (half of {} terms); more terms needed",
            seq.len() / 2,
            seq.len()
        )));
    }
    let charpoly: Vec<Rational> = (0..=order)
        .map(|j| conn.get(order - j).cloned().unwrap_or_else(Rational::zero))
        .collect();
    if linalg::rank(&hankel(seq, order)) != order {
        return Err(Error::InsufficientData(format!(
            "leading {order}x{order} Hankel block is singular; minimality not certified"
        )));
    }
    for d in 0..seq.len() - order {
        let v: Rational = charpoly.iter().enumerate().map(|(j, p)| p * &seq[d + j]).sum();
        if !v.is_zero() {
            return Err(Error::InsufficientData(format!(
                "recurrence fails at index {}",
                d + order
            )));
        }
    }
    Ok(RecurrenceInfo { order, charpoly })
}

fn describe_poly(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("[{}] (constant first)", parts.join(", "))
}

/// Factors the characteristic polynomial into distinct integer linear factors.
/// Roots come back in increasing order.
pub fn integer_roots(info: &RecurrenceInfo) -> Result<Vec<BigInt>> {
    let p = poly::trim(info.charpoly.clone());
    if p.is_empty() {
        return Err(Error::InvalidParameter("zero characteristic polynomial".into()));
    }
    let zero_mult = p.iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 1 {
        return Err(Error::RepeatedRoot(format!("root 0 has multiplicity {zero_mult}")));
    }
    let mut roots = Vec::new();
    if zero_mult == 1 {
        roots.push(BigInt::zero());
    }
    let mut rest = poly::monic(p[zero_mult..].to_vec());
    if rest.len() <= 1 {
        return Ok(roots);
    }
    let g = poly::gcd(&rest, &poly::derivative(&rest));
    if g.len() > 1 {
        return Err(Error::RepeatedRoot(format!(
            "repeated factor {} of {}",
            describe_poly(&g),
            describe_poly(&rest)
        )));
    }

    // Integer roots divide the constant term of the integral form.
    let integral = poly::clear_denominators(&rest);
    let constant = integral[0].clone();
    let bound = poly::root_bound(&rest);
    let chain = SturmChain::new(&rest);
    let mut cells = Vec::new();
    poly::isolate_unit_intervals(&chain, &(-&bound), &bound, &mut cells);
    let degree = rest.len() - 1;
    for (_, hi) in cells {
        let candidate = from_bigint(hi.clone());
        let divides = !hi.is_zero() && constant.is_multiple_of(&hi);
        if !divides || !poly::eval(&rest, &candidate).is_zero() {
            return Err(Error::NonIntegerRoot(format!(
                "real root in ({}, {hi}) of {} is not an integer",
                &hi - 1,
                describe_poly(&rest)
            )));
        }
        rest = poly::deflate(&rest, &candidate);
        roots.push(hi);
    }
    if roots.len() - zero_mult < degree {
        return Err(Error::NonIntegerRoot(format!(
            "residual factor {} has no real roots",
            describe_poly(&rest)
        )));
    }
    roots.sort();
    Ok(roots)
}

/// Exact Prony decomposition `c_d = Σ α_s s^d` over integer roots `s`.
pub fn prony_recover(seq: &[Rational]) -> Result<PronyDecomposition> {
    prony_recover_with_margin(seq, 0)
}

/// As [`prony_recover`], additionally requiring `margin` verified terms past
/// `2·order`.
pub fn prony_recover_with_margin(seq: &[Rational], margin: usize) -> Result<PronyDecomposition> {
    let info = minimal_recurrence(seq)?;
    if seq.len() < 2 * info.order + margin {
        return Err(Error::InsufficientData(format!(
            "order {} needs {} terms for certification, got {}",
            info.order,
            2 * info.order + margin,
            seq.len()
        )));
    }
    let roots = integer_roots(&info)?;
    let k = roots.len();
    let vandermonde: linalg::Matrix = (0..k)
        .map(|d| roots.iter().map(|r| from_bigint(Pow::pow(r, d as u32))).collect())
        .collect();
    let alphas = linalg::solve(&vandermonde, &seq[..k])
        .ok_or_else(|| Error::RepeatedRoot("singular Vandermonde system".into()))?;
    let dec = PronyDecomposition::from_pairs(alphas.into_iter().zip(roots).filter(|(a, _)| !a.is_zero()));
    let rebuilt = dec.reconstruct(seq.len());
    if let Some(index) = rebuilt.iter().zip(seq).position(|(a, b)| a != b) {
        return Err(Error::InconsistentTail { index });
    }
    Ok(dec)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RootViolation {
    /// `s ≢ Q(S) (mod 2)`.
    ParityViolation {
        #[serde(with = "serde_bigint")]
        root: BigInt,
    },
    /// `|s| > 2g − 2 − Q(S)`.
    SupportViolation {
        #[serde(with = "serde_bigint")]
        root: BigInt,
        #[serde(with = "serde_bigint")]
        bound: BigInt,
    },
}

impl fmt::Display for RootViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootViolation::ParityViolation { root } => write!(f, "ParityViolation(s={root})"),
            RootViolation::SupportViolation { root, bound } => {
                write!(f, "SupportViolation(s={root}, |s| > {bound})")
            }
        }
    }
}

/// Checks the parity and genus-support constraints on a ray decomposition.
pub fn validate_roots(dec: &PronyDecomposition, q_s: &BigInt, genus: Option<u64>) -> Vec<RootViolation> {
    let two = BigInt::from(2);
    let bound = genus.map(|g| BigInt::from(2) * BigInt::from(g) - 2 - q_s);
    let mut out = Vec::new();
    for p in &dec.pairs {
        if (&p.root - q_s).mod_floor(&two) != BigInt::zero() {
            out.push(RootViolation::ParityViolation { root: p.root.clone() });
        }
        if let Some(b) = &bound {
            if p.root.abs() > *b {
                out.push(RootViolation::SupportViolation {
                    root: p.root.clone(),
                    bound: b.clone(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn info(charpoly: &[i64]) -> RecurrenceInfo {
        RecurrenceInfo {
            order: charpoly.len() - 1,
            charpoly: ints(charpoly),
        }
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn minimal_recurrence_examples() {
        let r = minimal_recurrence(&ints(&[1, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(r, info(&[0, 1]));
        let r = minimal_recurrence(&ints(&[4, 4, 16, 16, 64, 64, 256, 256])).unwrap();
        assert_eq!(r, info(&[-4, 0, 1]));
        let r = minimal_recurrence(&ints(&[0, 1, 0, 1, 0, 1])).unwrap();
        assert_eq!(r, info(&[-1, 0, 1]));
        let r = minimal_recurrence(&ints(&[0, 0, 0])).unwrap();
        assert_eq!(r, info(&[1]));
    }

    #[test]
    fn minimal_recurrence_needs_data() {
        assert!(matches!(
            minimal_recurrence(&ints(&[1])),
            Err(Error::InsufficientData(_))
        ));
        // A late spike needs an order-6 register.
        assert!(matches!(
            minimal_recurrence(&ints(&[0, 0, 0, 0, 0, 1])),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn integer_root_examples() {
        assert_eq!(integer_roots(&info(&[-4, 0, 1])).unwrap(), big(&[-2, 2]));
        assert_eq!(integer_roots(&info(&[0, -1, 0, 1])).unwrap(), big(&[-1, 0, 1]));
        assert!(matches!(
            integer_roots(&info(&[-2, 0, 1])),
            Err(Error::NonIntegerRoot(_))
        ));
        assert!(matches!(
            integer_roots(&info(&[1, 0, 1])),
            Err(Error::NonIntegerRoot(_))
        ));
        assert!(matches!(integer_roots(&info(&[1, -2, 1])), Err(Error::RepeatedRoot(_))));
        assert!(matches!(integer_roots(&info(&[0, 0, 1])), Err(Error::RepeatedRoot(_))));
        // (x - 1)(2x - 1) made monic: x^2 - 3/2 x + 1/2.
        let half = RecurrenceInfo {
            order: 2,
            charpoly: vec![ratio(1, 2), ratio(-3, 2), int(1)],
        };
        assert!(matches!(integer_roots(&half), Err(Error::NonIntegerRoot(_))));
    }

    #[test]
    fn large_roots() {
        let r = big(&[-987_654_321_987, 3, 1_000_000_000_007]);
        let charpoly = poly::from_roots(&r);
        let found = integer_roots(&RecurrenceInfo { order: 3, charpoly }).unwrap();
        assert_eq!(found, big(&[-987_654_321_987, 3, 1_000_000_000_007]));
    }

    #[test]
    fn prony_examples() {
        let d = prony_recover(&ints(&[4, 4, 16, 16, 64, 64])).unwrap();
        assert_eq!(
            d,
            PronyDecomposition::from_pairs([(int(3), 2.into()), (int(1), (-2).into())])
        );
        let d = prony_recover(&ints(&[1, 0, 0, 0])).unwrap();
        assert_eq!(d, PronyDecomposition::from_pairs([(int(1), 0.into())]));
        let d = prony_recover(&ints(&[0, 1, 0, 1])).unwrap();
        assert_eq!(
            d,
            PronyDecomposition::from_pairs([(ratio(1, 2), 1.into()), (ratio(-1, 2), (-1).into())])
        );
        assert_eq!(d.to_string(), "{(1/2, 1), (-1/2, -1)}");
    }

    #[test]
    fn prony_margin() {
        let seq = ints(&[4, 4, 16, 16, 64, 64]);
        assert!(matches!(
            prony_recover_with_margin(&seq, 4),
            Err(Error::InsufficientData(_))
        ));
        let seq = ints(&[4, 4, 16, 16, 64, 64, 256, 256]);
        assert!(prony_recover_with_margin(&seq, 4).is_ok());
    }

    #[test]
    fn prony_rejects_non_exponential_data() {
        // d·2^d has a repeated root.
        let seq: Vec<Rational> = (0..8).map(|d| int(d * (1 << d))).collect();
        assert!(matches!(prony_recover(&seq), Err(Error::RepeatedRoot(_))));
        // Fibonacci: golden-ratio roots.
        let seq = ints(&[0, 1, 1, 2, 3, 5, 8, 13]);
        assert!(matches!(prony_recover(&seq), Err(Error::NonIntegerRoot(_))));
    }

    #[test]
    fn root_violation_examples() {
        let q2 = BigInt::from(2);
        let d = PronyDecomposition::from_pairs([(int(3), 2.into()), (int(1), (-2).into())]);
        assert!(validate_roots(&d, &q2, None).is_empty());
        let d = PronyDecomposition::from_pairs([(int(1), 1.into())]);
        assert_eq!(
            validate_roots(&d, &q2, None),
            vec![RootViolation::ParityViolation { root: 1.into() }]
        );
        let d = PronyDecomposition::from_pairs([(int(1), 6.into())]);
        assert_eq!(
            validate_roots(&d, &q2, Some(4)),
            vec![RootViolation::SupportViolation {
                root: 6.into(),
                bound: 4.into()
            }]
        );
    }
}
