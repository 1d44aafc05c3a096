//! Mixed invariants `⟨μ(S)^a ν^b⟩` and their reduction to `q_d(S)` under the
//! simple-type relation `⟨μ^a ν^{b+2}⟩ = 4⟨μ^a ν^b⟩`.
//!
//! With the `b = 1` convention `2 q_a = ⟨μ^a ν⟩`, an entry at `b = 2k + ε`
//! determines `q_a = entry / (4^k · 2^ε)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::HClass;
use crate::rational::{format_rational, serde_rational, Rational};
use crate::series::Parity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedInvariantTable {
    pub s: HClass,
    pub entries: BTreeMap<(u32, u32), Rational>,
    pub b_plus: usize,
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    a: u32,
    b: u32,
    #[serde(with = "serde_rational")]
    value: Rational,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    #[serde(rename = "S")]
    s: HClass,
    entries: Vec<EntryRepr>,
    b_plus: usize,
}

impl Serialize for MixedInvariantTable {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        TableRepr {
            s: self.s.clone(),
            entries: self
                .entries
                .iter()
                .map(|(&(a, b), v)| EntryRepr { a, b, value: v.clone() })
                .collect(),
            b_plus: self.b_plus,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MixedInvariantTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TableRepr::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for e in repr.entries {
            if entries.insert((e.a, e.b), e.value).is_some() {
                return Err(serde::de::Error::custom(format!(
                    "duplicate entry (a={}, b={})",
                    e.a, e.b
                )));
            }
        }
        Ok(MixedInvariantTable {
            s: repr.s,
            entries,
            b_plus: repr.b_plus,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SimpleTypeReport {
    pub holds: bool,
    /// Pairs `(a, b, b+2)` where the relation failed.
    pub failures: Vec<(u32, u32)>,
    /// Keys `(a, b)` with `b ≥ 2` whose counterpart `(a, b−2)` is absent.
    pub missing_counterparts: Vec<(u32, u32)>,
}

fn four() -> Rational {
    Rational::from_integer(BigInt::from(4))
}

impl MixedInvariantTable {
    pub fn new(s: HClass, b_plus: usize) -> Self {
        MixedInvariantTable {
            s,
            entries: BTreeMap::new(),
            b_plus,
        }
    }

    pub fn insert(&mut self, a: u32, b: u32, value: Rational) {
        self.entries.insert((a, b), value);
    }

    pub fn get(&self, a: u32, b: u32) -> Option<&Rational> {
        self.entries.get(&(a, b))
    }

    /// Checks `entry(a, b+2) = 4·entry(a, b)` on every pair present.
    pub fn simple_type_report(&self) -> SimpleTypeReport {
        let mut report = SimpleTypeReport::default();
        for (&(a, b), v) in &self.entries {
            if let Some(upper) = self.get(a, b + 2) {
                if *upper != four() * v {
                    report.failures.push((a, b));
                }
            }
            if b >= 2 && self.get(a, b - 2).is_none() {
                report.missing_counterparts.push((a, b));
            }
        }
        report.holds = report.failures.is_empty();
        report
    }

    pub fn is_simple_type(&self) -> bool {
        self.simple_type_report().holds
    }

    /// Reduces the table to `q_0(S), …, q_A(S)` where `A` is the largest `a`
    /// present. The `b = 0` entry is preferred; every other entry is divided
    /// down to `q_a` and must agree with it.
    pub fn reduce(&self) -> Result<Vec<Rational>> {
        let report = self.simple_type_report();
        if let Some(&(a, b)) = report.failures.first() {
            return Err(Error::SimpleTypeViolation(format!(
                "entry(a={a}, b={}) != 4 * entry(a={a}, b={b})",
                b + 2
            )));
        }
        let parity = Parity::from_b_plus(self.b_plus);
        let max_a = self.entries.keys().map(|&(a, _)| a).max();
        let Some(max_a) = max_a else {
            return Ok(Vec::new());
        };
        let mut q = vec![Rational::zero(); max_a as usize + 1];
        for (a, slot) in q.iter_mut().enumerate() {
            let a = a as u32;
            let mut routes = self.entries.range((a, 0)..=(a, u32::MAX)).map(|(&(_, b), v)| {
                let divisor = Pow::pow(four(), b / 2) * Rational::from_integer(BigInt::from(1 + b % 2));
                (b, v / divisor)
            });
            let Some((b0, first)) = routes.next() else {
                continue;
            };
            for (b, other) in routes {
                if other != first {
                    let msg = format!(
                        "a={a}: b={b0} gives q={}, b={b} gives q={}",
                        format_rational(&first),
                        format_rational(&other)
                    );
                    return Err(if b % 2 != b0 % 2 {
                        Error::InconsistentRoutes(msg)
                    } else {
                        Error::SimpleTypeViolation(msg)
                    });
                }
            }
            if let Some(p) = parity {
                if !first.is_zero() && !p.admits_degree(a as usize) {
                    return Err(Error::DegreeParity(format!(
                        "q_{a} = {} but b+ = {} forces q_{a} = 0",
                        format_rational(&first),
                        self.b_plus
                    )));
                }
            }
            *slot = first;
        }
        Ok(q)
    }
}

pub fn is_simple_type(table: &MixedInvariantTable) -> bool {
    table.is_simple_type()
}

pub fn reduce_table(table: &MixedInvariantTable) -> Result<Vec<Rational>> {
    table.reduce()
}
