//! Dense univariate polynomials over the rationals, constant term first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{from_bigint, Rational};

pub type Poly = Vec<Rational>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Degree, with the zero polynomial reported as `None`.
pub fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &[Rational]) -> Poly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect()
}

pub fn monic(p: Poly) -> Poly {
    let p = trim(p);
    match p.last() {
        Some(lead) => {
            let inv = lead.recip();
            p.iter().map(|c| c * &inv).collect()
        }
        None => p,
    }
}

/// Remainder of `a` modulo nonzero `b`.
pub fn rem(a: &[Rational], b: &[Rational]) -> Poly {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut r = trim(a.to_vec());
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            let delta = &f * c;
            r[shift + i] -= delta;
        }
        r.pop();
        r = trim(r);
    }
    r
}

pub fn gcd(a: &[Rational], b: &[Rational]) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

/// Divides `p` by `(x − root)`; the caller guarantees `root` is a root.
pub fn deflate(p: &[Rational], root: &Rational) -> Poly {
    let n = p.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + carry * root;
        q[i] = carry.clone();
    }
    q
}

/// Multiplies by the lcm of the denominators, giving integer coefficients.
pub fn clear_denominators(p: &[Rational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.iter().map(|c| (c * from_bigint(l.clone())).to_integer()).collect()
}

pub fn from_roots(roots: &[BigInt]) -> Poly {
    roots.iter().fold(vec![Rational::one()], |acc, r| {
        let mut out = vec![Rational::zero(); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * from_bigint(r.clone());
        }
        out
    })
}

/// Sturm chain `p, p', −rem(p, p'), …` of a squarefree polynomial, kept as
/// primitive integer polynomials (positive rescaling preserves every sign).
pub struct SturmChain(Vec<Vec<BigInt>>);

fn primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let g = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in p.iter_mut() {
            *c /= &g;
        }
    }
    p
}

/// Pseudo-remainder scaled so that it is a positive multiple of `rem(a, b)`.
fn signed_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut r = a.to_vec();
    let mut steps = 0u32;
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let top = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= lead;
        }
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &top * c;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        steps += 1;
    }
    if lead.is_negative() && steps % 2 == 1 {
        for c in r.iter_mut() {
            *c = -&*c;
        }
    }
    r
}

fn sign_at(p: &[BigInt], x: &BigInt) -> i8 {
    let v = p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

impl SturmChain {
    pub fn new(p: &[Rational]) -> Self {
        let p0 = primitive(clear_denominators(&trim(p.to_vec())));
        let p1 = primitive(clear_denominators(&trim(derivative(p))));
        let mut chain = vec![p0];
        if !p1.is_empty() {
            chain.push(p1);
        }
        while chain.len() >= 2 {
            let n = chain.len();
            let r = primitive(signed_prem(&chain[n - 2], &chain[n - 1]));
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        SturmChain(chain)
    }

    fn variations(&self, x: &BigInt) -> usize {
        let signs: Vec<i8> = self.0.iter().map(|p| sign_at(p, x)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &BigInt, hi: &BigInt) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Cauchy bound: every root has absolute value below the returned integer.
pub fn root_bound(p: &[Rational]) -> BigInt {
    let p = monic(p.to_vec());
    let n = p.len() - 1;
    let m = p[..n]
        .iter()
        .map(|c| c.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    (m + Rational::one()).ceil().to_integer() + BigInt::one()
}

/// Splits `(lo, hi]` until each piece of unit length holds one root and
/// returns the right endpoints. Requires `p` squarefree.
pub fn isolate_unit_intervals(chain: &SturmChain, lo: &BigInt, hi: &BigInt, out: &mut Vec<(BigInt, BigInt)>) {
    let c = chain.count(lo, hi);
    if c == 0 {
        return;
    }
    if hi - lo == BigInt::one() {
        out.push((lo.clone(), hi.clone()));
        return;
    }
    let mid: BigInt = (lo + hi).div_floor(&BigInt::from(2));
    isolate_unit_intervals(chain, lo, &mid, out);
    isolate_unit_intervals(chain, &mid, hi, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(v: &[i64]) -> Poly {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn arithmetic() {
        // (x − 1)(x + 2) = x² + x − 2
        let f = p(&[-2, 1, 1]);
        assert_eq!(eval(&f, &int(1)), int(0));
        assert_eq!(derivative(&f), p(&[1, 2]));
        assert_eq!(deflate(&f, &int(1)), p(&[2, 1]));
        assert_eq!(rem(&f, &p(&[-1, 1])), Vec::<Rational>::new());
        assert_eq!(gcd(&f, &p(&[2, 1])), p(&[2, 1]));
        assert_eq!(from_roots(&[BigInt::from(1), BigInt::from(-2)]), f);
    }

    #[test]
    fn sturm_counts() {
        // x³ − x: roots −1, 0, 1
        let f = p(&[0, -1, 0, 1]);
        let chain = SturmChain::new(&f);
        assert_eq!(chain.count(&BigInt::from(-5), &BigInt::from(5)), 3);
        assert_eq!(chain.count(&BigInt::from(-1), &BigInt::from(0)), 1);
        assert_eq!(chain.count(&BigInt::from(0), &BigInt::from(1)), 1);
        // x² + 1 has none
        let g = p(&[1, 0, 1]);
        assert_eq!(SturmChain::new(&g).count(&BigInt::from(-9), &BigInt::from(9)), 0);
    }
}
