//! Small dense exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn from_int_rows(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Row-reduces `m` in place to echelon form and returns the pivot columns.
fn echelon(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut work = m.clone();
    echelon(&mut work).len()
}

/// Solves `a x = b` for square nonsingular `a`; `None` when singular.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Least-squares-free consistency solve: returns some `x` with `a x = b`
/// if one exists (free variables set to zero).
pub fn solve_consistent(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = echelon(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant of an integer matrix by Bareiss fraction-free elimination.
pub fn det_int(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Inertia `(positive, negative, zero)` of a symmetric rational matrix by
/// symmetric elimination. A zero diagonal with a nonzero off-diagonal entry
/// is eliminated as a 2x2 hyperbolic block, which contributes `(1, 1)`.
pub fn inertia(sym: &Matrix) -> (usize, usize, usize) {
    let mut m = sym.clone();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    while !m.is_empty() {
        let n = m.len();
        if let Some(i) = (0..n).find(|&i| !m[i][i].is_zero()) {
            let p = m[i][i].clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let col: Vec<Rational> = (0..n).map(|r| m[r][i].clone()).collect();
            let mut next = Vec::with_capacity(n - 1);
            for r in (0..n).filter(|&r| r != i) {
                let row: Vec<Rational> = (0..n)
                    .filter(|&c| c != i)
                    .map(|c| &m[r][c] - &col[r] * &col[c] / &p)
                    .collect();
                next.push(row);
            }
            m = next;
            continue;
        }
        let Some((i, j)) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !m[i][j].is_zero())
        else {
            zero += n;
            break;
        };
        pos += 1;
        neg += 1;
        let b = m[i][j].clone();
        let mut next = Vec::with_capacity(n - 2);
        for r in (0..n).filter(|&r| r != i && r != j) {
            let row: Vec<Rational> = (0..n)
                .filter(|&c| c != i && c != j)
                .map(|c| &m[r][c] - (&m[r][i] * &m[j][c] + &m[r][j] * &m[i][c]) / &b)
                .collect();
            next.push(row);
        }
        m = next;
    }
    (pos, neg, zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn determinant_and_inverse() {
        let rows = vec![vec![2, 1], vec![1, 1]];
        assert_eq!(det_int(&rows), BigInt::from(1));
        let inv = inverse(&from_int_rows(&rows)).unwrap();
        assert_eq!(inv, from_int_rows(&[vec![1, -1], vec![-1, 2]]));
        assert_eq!(det_int(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert!(inverse(&from_int_rows(&[vec![1, 2], vec![2, 4]])).is_none());
    }

    #[test]
    fn rank_and_solve() {
        let m = from_int_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        let a = from_int_rows(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(solve(&a, &[int(3), int(1)]).unwrap(), vec![int(2), int(1)]);
        assert!(solve_consistent(&m, &[int(1), int(3), int(0)]).is_none());
    }

    #[test]
    fn hyperbolic_inertia() {
        assert_eq!(inertia(&from_int_rows(&[vec![0, 1], vec![1, 0]])), (1, 1, 0));
        assert_eq!(inertia(&from_int_rows(&[vec![0, 0], vec![0, 0]])), (0, 0, 2));
        assert_eq!(
            inertia(&from_int_rows(&[vec![0, 3, 1], vec![3, 0, 2], vec![1, 2, 0]])),
            (1, 2, 0)
        );
    }
}
