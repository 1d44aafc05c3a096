//! Integer homology lattices: pairings, exact inertia, characteristic vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Result};
use crate::linalg;
use crate::rational::serde_bigint;

/// An integral class in `H_2(X)` (or `H^2(X)`; the unimodular form identifies
/// the two) as a coordinate vector in the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HClass(pub Vec<BigInt>);

impl HClass {
    pub fn new(coords: Vec<BigInt>) -> Self {
        HClass(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        HClass(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        HClass(vec![BigInt::zero(); rank])
    }

    /// The `i`-th basis vector.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut c = HClass::zero(rank);
        c.0[i] = BigInt::from(1);
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> HClass {
        HClass(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &HClass) -> HClass {
        HClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &BigInt) -> HClass {
        HClass(self.0.iter().map(|x| x * k).collect())
    }

    /// Appends one coordinate (direct sum with a rank-one lattice).
    pub fn extend(&self, last: i64) -> HClass {
        let mut c = self.0.clone();
        c.push(BigInt::from(last));
        HClass(c)
    }
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for HClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let reprs: Vec<_> = self.0.iter().map(serde_bigint::to_repr).collect();
        reprs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<serde_bigint::Repr>::deserialize(d)?
            .into_iter()
            .map(|r| serde_bigint::from_repr(r).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(HClass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub b_plus: usize,
    pub b_minus: usize,
    pub nullity: usize,
}

impl Signature {
    pub fn sigma(&self) -> i64 {
        self.b_plus as i64 - self.b_minus as i64
    }
}

/// Intersection lattice: symmetric integer Gram matrix, declared `b⁺`, and
/// `w₂` recorded as its values on the basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub b_plus: usize,
    pub w2: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum LatticeViolation {
    RankMismatch {
        rank: usize,
        rows: usize,
    },
    NotSquare {
        row: usize,
        len: usize,
    },
    NotSymmetric {
        i: usize,
        j: usize,
    },
    NotUnimodular {
        det: String,
    },
    BPlusMismatch {
        declared: usize,
        computed: usize,
    },
    W2NotBinary {
        index: usize,
    },
    W2Mismatch {
        index: usize,
    },
    /// Warning only: the invariants are classically defined for odd `b⁺ ≥ 3`.
    BPlusOutsideRange {
        b_plus: usize,
    },
}

impl LatticeViolation {
    pub fn is_warning(&self) -> bool {
        matches!(self, LatticeViolation::BPlusOutsideRange { .. })
    }
}

impl fmt::Display for LatticeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeViolation::RankMismatch { rank, rows } => {
                write!(f, "NotSquare: rank {rank} but {rows} gram rows")
            }
            LatticeViolation::NotSquare { row, len } => {
                write!(f, "NotSquare: gram row {row} has length {len}")
            }
            LatticeViolation::NotSymmetric { i, j } => {
                write!(f, "NotSymmetric: gram[{i}][{j}] != gram[{j}][{i}]")
            }
            LatticeViolation::NotUnimodular { det } => write!(f, "NotUnimodular: det = {det}"),
            LatticeViolation::BPlusMismatch { declared, computed } => {
                write!(f, "BPlusMismatch: declared {declared}, inertia gives {computed}")
            }
            LatticeViolation::W2NotBinary { index } => write!(f, "W2NotBinary: w2[{index}]"),
            LatticeViolation::W2Mismatch { index } => {
                write!(f, "W2Mismatch: w2[{index}] disagrees with gram[{index}][{index}] mod 2")
            }
            LatticeViolation::BPlusOutsideRange { b_plus } => {
                write!(f, "BPlusOutsideRange (warning): b+ = {b_plus} is not odd and >= 3")
            }
        }
    }
}

/// The E8 Cartan matrix (positive definite, even, unimodular).
pub fn e8_gram() -> Vec<Vec<i64>> {
    // Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 attached to 4.
    let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut g = vec![vec![0i64; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        g[a][b] = -1;
        g[b][a] = -1;
    }
    g
}

impl Lattice {
    /// Builds a lattice from its Gram matrix, computing `b⁺` by exact inertia
    /// and `w₂` from the diagonal parity (Wu's formula).
    pub fn from_gram(gram: Vec<Vec<i64>>) -> Self {
        let rank = gram.len();
        let w2 = (0..rank).map(|i| gram[i][i].rem_euclid(2) as u8).collect();
        let mut l = Lattice {
            rank,
            gram,
            b_plus: 0,
            w2,
        };
        l.b_plus = l.signature().b_plus;
        l
    }

    /// `⟨1⟩^pos ⊕ ⟨-1⟩^neg`.
    pub fn diagonal(pos: usize, neg: usize) -> Self {
        let n = pos + neg;
        let mut g = vec![vec![0i64; n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = if i < pos { 1 } else { -1 };
        }
        Lattice::from_gram(g)
    }

    pub fn hyperbolic() -> Self {
        Lattice::from_gram(vec![vec![0, 1], vec![1, 0]])
    }

    pub fn e8(negative: bool) -> Self {
        let s = if negative { -1 } else { 1 };
        Lattice::from_gram(
            e8_gram()
                .into_iter()
                .map(|r| r.into_iter().map(|x| s * x).collect())
                .collect(),
        )
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let n = self.rank + other.rank;
        let mut g = vec![vec![0i64; n]; n];
        for (row, src) in g.iter_mut().zip(&self.gram) {
            row[..self.rank].copy_from_slice(src);
        }
        for (row, src) in g[self.rank..].iter_mut().zip(&other.gram) {
            row[self.rank..].copy_from_slice(src);
        }
        let mut w2 = self.w2.clone();
        w2.extend_from_slice(&other.w2);
        Lattice {
            rank: n,
            gram: g,
            b_plus: self.b_plus + other.b_plus,
            w2,
        }
    }

    pub fn direct_sum_all(parts: &[Lattice]) -> Lattice {
        let empty = Lattice {
            rank: 0,
            gram: vec![],
            b_plus: 0,
            w2: vec![],
        };
        parts.iter().fold(empty, |acc, p| acc.direct_sum(p))
    }

    /// `Q(a, b) = aᵀ G b`.
    pub fn pair(&self, a: &HClass, b: &HClass) -> Result<BigInt> {
        check_dim(self.rank, a.len())?;
        check_dim(self.rank, b.len())?;
        let gb = self.dual_coords(b)?;
        Ok(a.0.iter().zip(&gb).map(|(x, y)| x * y).sum())
    }

    /// `Q(a) = Q(a, a)`.
    pub fn square(&self, a: &HClass) -> Result<BigInt> {
        self.pair(a, a)
    }

    /// The pairings `(a · e_i)_i`, i.e. `G a`.
    pub fn dual_coords(&self, a: &HClass) -> Result<Vec<BigInt>> {
        check_dim(self.rank, a.len())?;
        Ok(self
            .gram
            .iter()
            .map(|row| row.iter().zip(&a.0).map(|(&g, x)| BigInt::from(g) * x).sum())
            .collect())
    }

    /// Solves `G k = y` over the integers; `None` if `G` is singular or the
    /// solution is not integral.
    pub fn from_dual_coords(&self, y: &[BigInt]) -> Result<Option<HClass>> {
        check_dim(self.rank, y.len())?;
        let g = linalg::from_int_rows(&self.gram);
        let rhs: Vec<_> = y.iter().cloned().map(crate::rational::from_bigint).collect();
        let Some(x) = linalg::solve(&g, &rhs) else {
            return Ok(None);
        };
        if x.iter().any(|v| !v.is_integer()) {
            return Ok(None);
        }
        Ok(Some(HClass(x.into_iter().map(|v| v.to_integer()).collect())))
    }

    pub fn signature(&self) -> Signature {
        let (b_plus, b_minus, nullity) = linalg::inertia(&linalg::from_int_rows(&self.gram));
        Signature {
            b_plus,
            b_minus,
            nullity,
        }
    }

    pub fn determinant(&self) -> BigInt {
        linalg::det_int(&self.gram)
    }

    /// True iff `K · x ≡ x · x (mod 2)` for all `x` and `K` reduces to the
    /// declared `w₂`. Checking basis vectors suffices by bilinearity mod 2.
    pub fn is_characteristic(&self, k: &HClass) -> Result<bool> {
        let y = self.dual_coords(k)?;
        let two = BigInt::from(2);
        Ok(y.iter().enumerate().all(|(i, yi)| {
            let parity = yi.mod_floor(&two);
            parity == BigInt::from(self.gram[i][i].rem_euclid(2))
                && parity == BigInt::from(self.w2.get(i).copied().unwrap_or(0))
        }))
    }

    pub fn validate(&self) -> Vec<LatticeViolation> {
        let mut out = Vec::new();
        if self.gram.len() != self.rank {
            out.push(LatticeViolation::RankMismatch {
                rank: self.rank,
                rows: self.gram.len(),
            });
            return out;
        }
        for (row, r) in self.gram.iter().enumerate() {
            if r.len() != self.rank {
                out.push(LatticeViolation::NotSquare { row, len: r.len() });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if self.gram[i][j] != self.gram[j][i] {
                    out.push(LatticeViolation::NotSymmetric { i, j });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        let det = self.determinant();
        if det.abs() != BigInt::from(1) {
            out.push(LatticeViolation::NotUnimodular { det: det.to_string() });
        }
        let computed = self.signature().b_plus;
        if computed != self.b_plus {
            out.push(LatticeViolation::BPlusMismatch {
                declared: self.b_plus,
                computed,
            });
        }
        if self.w2.len() != self.rank {
            out.push(LatticeViolation::RankMismatch {
                rank: self.rank,
                rows: self.w2.len(),
            });
        } else {
            for (index, &w) in self.w2.iter().enumerate() {
                if w > 1 {
                    out.push(LatticeViolation::W2NotBinary { index });
                } else if i64::from(w) != self.gram[index][index].rem_euclid(2) {
                    out.push(LatticeViolation::W2Mismatch { index });
                }
            }
        }
        if self.b_plus.is_multiple_of(2) || self.b_plus < 3 {
            out.push(LatticeViolation::BPlusOutsideRange { b_plus: self.b_plus });
        }
        out
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank).all(|i| self.gram[i][i] % 2 == 0)
    }
}
