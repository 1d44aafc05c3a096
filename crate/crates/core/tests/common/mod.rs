#![allow(dead_code)]

use std::collections::BTreeMap;

use donaldson::lattice::{HClass, Lattice};
use donaldson::rational::Rational;
use donaldson::series::{DonaldsonSeries, Parity, Term};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub enum Block {
    Plus,
    Minus,
    Hyp,
}

/// Random lattice from ⟨1⟩, ⟨−1⟩ and H blocks with `rank ≤ max_rank` and odd b⁺.
pub fn random_blocks(rng: &mut ChaCha8Rng, max_rank: usize) -> Vec<Block> {
    loop {
        let mut blocks = Vec::new();
        let target = rng.gen_range(1..=max_rank);
        let mut rank = 0;
        while rank < target {
            let b = match rng.gen_range(0..3) {
                0 => Block::Plus,
                1 => Block::Minus,
                _ if rank + 2 <= target => Block::Hyp,
                _ => Block::Minus,
            };
            rank += if matches!(b, Block::Hyp) { 2 } else { 1 };
            blocks.push(b);
        }
        let b_plus: usize = blocks.iter().map(|b| !matches!(b, Block::Minus) as usize).sum();
        if b_plus % 2 == 1 {
            return blocks;
        }
    }
}

pub fn lattice_of(blocks: &[Block]) -> Lattice {
    let parts: Vec<Lattice> = blocks
        .iter()
        .map(|b| match b {
            Block::Plus => Lattice::diagonal(1, 0),
            Block::Minus => Lattice::diagonal(0, 1),
            Block::Hyp => Lattice::hyperbolic(),
        })
        .collect();
    Lattice::direct_sum_all(&parts)
}

/// Characteristic vector with every coordinate in `[-bound, bound]`.
/// Diagonal coordinates are odd, hyperbolic ones even.
pub fn random_characteristic(rng: &mut ChaCha8Rng, blocks: &[Block], bound: i64) -> HClass {
    let odd = |rng: &mut ChaCha8Rng| {
        let top = if bound % 2 == 0 { bound - 1 } else { bound };
        2 * rng.gen_range(-(top + 1) / 2..=(top - 1) / 2) + 1
    };
    let even = |rng: &mut ChaCha8Rng| 2 * rng.gen_range(-bound / 2..=bound / 2);
    let mut v = Vec::new();
    for b in blocks {
        match b {
            Block::Plus | Block::Minus => v.push(odd(rng)),
            Block::Hyp => {
                v.push(even(rng));
                v.push(even(rng));
            }
        }
    }
    HClass::from_i64s(&v)
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let p: i64 = rng.gen_range(-9..=9);
        if p != 0 {
            return Rational::new(BigInt::from(p), BigInt::from(rng.gen_range(1..=6)));
        }
    }
}

/// Valid series: characteristic classes, ±K pairs obeying the parity that
/// b⁺ dictates, at most `max_classes` classes with coordinates bounded by `bound`.
pub fn random_series(seed: u64, max_rank: usize, max_classes: usize, bound: i64) -> DonaldsonSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = random_blocks(&mut rng, max_rank);
    let lattice = lattice_of(&blocks);
    let parity = Parity::from_b_plus(lattice.b_plus).unwrap();
    let mut terms: BTreeMap<HClass, Rational> = BTreeMap::new();
    let pairs = rng.gen_range(1..=max_classes.max(2) / 2);
    for _ in 0..pairs * 4 {
        if terms.len() + 2 > max_classes {
            break;
        }
        let k = random_characteristic(&mut rng, &blocks, bound);
        if terms.contains_key(&k) {
            continue;
        }
        let a = random_coeff(&mut rng);
        if k.is_zero() {
            if parity == Parity::Even {
                terms.insert(k, a);
            }
            continue;
        }
        let partner = match parity {
            Parity::Even => a.clone(),
            Parity::Odd => -a.clone(),
        };
        terms.insert(k.neg(), partner);
        terms.insert(k, a);
        if terms.len() >= 2 * pairs {
            break;
        }
    }
    if terms.is_empty() {
        let mut k = random_characteristic(&mut rng, &blocks, bound);
        while k.is_zero() && parity == Parity::Odd {
            k = random_characteristic(&mut rng, &blocks, bound);
        }
        let a = random_coeff(&mut rng);
        if k.is_zero() {
            terms.insert(k, a);
        } else {
            let partner = if parity == Parity::Even { a.clone() } else { -a.clone() };
            terms.insert(k.neg(), partner);
            terms.insert(k, a);
        }
    }
    let terms = terms.into_iter().map(|(k, a)| Term::new(a, k)).collect();
    DonaldsonSeries::normalized(lattice, terms, parity).unwrap()
}

pub fn random_ray(rng: &mut ChaCha8Rng, rank: usize, bound: i64) -> HClass {
    HClass::from_i64s(&(0..rank).map(|_| rng.gen_range(-bound..=bound)).collect::<Vec<_>>())
}

/// Ray with `Q(S) > 0`: a multiple of a small positive class plus noise.
pub fn positive_ray(rng: &mut ChaCha8Rng, lattice: &Lattice, noise: i64) -> HClass {
    use num_traits::Signed;
    let n = lattice.rank;
    let g = &lattice.gram;
    let mut candidates = Vec::new();
    for i in 0..n {
        for j in i..n {
            // (e_i + e_j)² read off the Gram matrix; e_i² when j = i.
            let square = if i == j {
                g[i][i]
            } else {
                g[i][i] + 2 * g[i][j] + g[j][j]
            };
            if square > 0 {
                let mut v = vec![0i64; n];
                v[i] += 1;
                if j != i {
                    v[j] += 1;
                }
                candidates.push(HClass::from_i64s(&v));
            }
        }
    }
    assert!(!candidates.is_empty(), "lattice has no small positive class");
    let p = candidates[rng.gen_range(0..candidates.len())].clone();
    let r = random_ray(rng, n, noise);
    let mut k = 1i64;
    loop {
        let s = p.scale(&BigInt::from(k)).add(&r);
        if lattice.square(&s).unwrap().is_positive() {
            return s;
        }
        k += 1;
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let v = &m[rank][c] * &m[r][j] - &m[r][c] * &m[rank][j];
                m[r][j] = v / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Smallest `r` such that some nonzero `(c_0..c_r)` annihilates every window of
/// length `r+1`. Each candidate order is tested by the rank of its window matrix.
pub fn brute_force_order(seq: &[Rational]) -> usize {
    let lcm = seq.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = seq
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    for r in 0..=seq.len() / 2 {
        let windows: Vec<Vec<BigInt>> = (0..seq.len() - r).map(|n| ints[n..=n + r].to_vec()).collect();
        if bareiss_rank(windows) < r + 1 {
            return r;
        }
    }
    usize::MAX
}
