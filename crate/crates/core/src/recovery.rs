//! Reconstruction of a full series from ray data.
//!
//! With every basic class satisfying `|K·e_i| ≤ B`, the ray
//! `w = (M, M², …, Mⁿ)` with `M = 2nB + 1` separates classes: `K ↦ K·w` is a
//! base-`M` encoding of the dual coordinates. Recovering on `w` gives the
//! class count and coefficients; recovering on `M·w + e_i` shifts each root to
//! `M·(K·w) + K·e_i`, from which the `i`-th dual coordinate is read off by
//! rounding to the nearest multiple of `M`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{HClass, Lattice};
use crate::rational::{format_rational, serde_bigint, serde_rational, Rational};
use crate::recurrence::{minimal_recurrence, prony_recover_with_margin, PronyDecomposition};
use crate::series::{c_from_q, c_on_ray, check_parity, DonaldsonSeries, Parity, RaySequence, Term};

/// Anything that can produce `C_0(S), …, C_D(S)` on request.
pub trait RayOracle: Sync {
    fn ray_sequence(&self, s: &HClass, degree: usize) -> Result<RaySequence>;

    /// Serial oracles are queried one ray at a time.
    fn is_serial(&self) -> bool {
        false
    }
}

/// The forward expander.
impl RayOracle for DonaldsonSeries {
    fn ray_sequence(&self, s: &HClass, degree: usize) -> Result<RaySequence> {
        c_on_ray(self, s, degree)
    }
}

/// Externally supplied `q_d(S)` values, converted to `C_d(S)` on demand.
#[derive(Debug, Clone)]
pub struct TableOracle {
    pub lattice: Lattice,
    pub rows: HashMap<HClass, Vec<Option<Rational>>>,
}

impl TableOracle {
    pub fn new(lattice: Lattice) -> Self {
        TableOracle {
            lattice,
            rows: HashMap::new(),
        }
    }

    pub fn insert(&mut self, s: HClass, d: usize, q_d: Rational) {
        let row = self.rows.entry(s).or_default();
        if row.len() <= d {
            row.resize(d + 1, None);
        }
        row[d] = Some(q_d);
    }

    /// Rays in a stable order.
    pub fn rays(&self) -> Vec<HClass> {
        let mut r: Vec<HClass> = self.rows.keys().cloned().collect();
        r.sort();
        r
    }

    pub fn max_degree(&self, s: &HClass) -> Option<usize> {
        self.rows.get(s).map(|r| r.len().saturating_sub(1))
    }
}

impl RayOracle for TableOracle {
    fn ray_sequence(&self, s: &HClass, degree: usize) -> Result<RaySequence> {
        let row = self.rows.get(s).ok_or_else(|| Error::MissingRay(s.to_string()))?;
        let q: Vec<Rational> = (0..=degree)
            .map(|d| {
                row.get(d)
                    .cloned()
                    .flatten()
                    .ok_or_else(|| Error::InsufficientData(format!("no q_{d} for ray {s}")))
            })
            .collect::<Result<_>>()?;
        let q_s = Rational::from_integer(self.lattice.square(s)?);
        Ok(RaySequence {
            s: s.clone(),
            values: c_from_q(&q, &q_s),
            q_s,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    /// Declared bound `B` on `|K_s · e_i|`.
    pub coord_bound: u64,
    /// Upper bound on the number of basic classes.
    pub max_classes: usize,
    /// Terms requested beyond `2 · max_classes`.
    pub degree_margin: usize,
    /// Independent rays used to check the assembled series.
    pub verify_rays: usize,
    pub seed: u64,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        RecoveryConfig {
            coord_bound: 10,
            max_classes: 8,
            degree_margin: 4,
            verify_rays: 2,
            seed: 0x5eed,
        }
    }
}

impl RecoveryConfig {
    pub fn new(coord_bound: u64, max_classes: usize) -> Self {
        RecoveryConfig {
            coord_bound,
            max_classes,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.coord_bound == 0 || self.max_classes == 0 || self.degree_margin == 0 {
            return Err(Error::InvalidParameter(
                "coord_bound, max_classes and degree_margin must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Highest degree requested from the oracle.
    pub fn degree(&self) -> usize {
        2 * self.max_classes + self.degree_margin - 1
    }
}

/// Every ray the reconstruction will query, in query order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayPlan {
    #[serde(with = "serde_bigint")]
    pub modulus: BigInt,
    pub separating: HClass,
    pub basis_rays: Vec<HClass>,
    pub verification: Vec<HClass>,
    pub degree: usize,
}

impl RayPlan {
    pub fn all_rays(&self) -> Vec<HClass> {
        let mut v = vec![self.separating.clone()];
        v.extend(self.basis_rays.iter().cloned());
        v.extend(self.verification.iter().cloned());
        v
    }
}

pub fn plan_rays(lattice: &Lattice, cfg: &RecoveryConfig) -> Result<RayPlan> {
    cfg.validate()?;
    let n = lattice.rank;
    let modulus = BigInt::from(2 * n as u64 * cfg.coord_bound + 1);
    let separating = HClass((1..=n).map(|i| Pow::pow(&modulus, i as u32)).collect());
    let basis_rays = (0..n)
        .map(|i| separating.scale(&modulus).add(&HClass::basis(n, i)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let verification = (0..cfg.verify_rays)
        .map(|_| HClass::from_i64s(&(0..n).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>()))
        .collect();
    Ok(RayPlan {
        modulus,
        separating,
        basis_rays,
        verification,
        degree: cfg.degree(),
    })
}

fn decompose(seq: &RaySequence, cfg: &RecoveryConfig) -> Result<PronyDecomposition> {
    let info = minimal_recurrence(&seq.values)?;
    if info.order > cfg.max_classes {
        return Err(Error::BudgetExceeded {
            order: info.order,
            max: cfg.max_classes,
        });
    }
    prony_recover_with_margin(&seq.values, cfg.degree_margin)
}

/// Decomposition on a single ray: roots are the distinct pairings `K_s·S`,
/// weights the summed coefficients of classes sharing a pairing.
pub fn recover_on_ray<O: RayOracle + ?Sized>(
    oracle: &O,
    s: &HClass,
    cfg: &RecoveryConfig,
) -> Result<PronyDecomposition> {
    cfg.validate()?;
    decompose(&oracle.ray_sequence(s, cfg.degree())?, cfg)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayRecord {
    pub role: String,
    pub ray: HClass,
    #[serde(rename = "qS", with = "serde_bigint")]
    pub q_s: BigInt,
    pub paper_backed: bool,
    pub decomposition: PronyDecomposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchRow {
    #[serde(with = "serde_bigint")]
    pub separating_value: BigInt,
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    /// `(K · e_i)_i`.
    pub dual_coords: HClass,
    #[serde(rename = "K")]
    pub k: HClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub ray: HClass,
    #[serde(rename = "qS", with = "serde_bigint")]
    pub q_s: BigInt,
    pub paper_backed: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub config: RecoveryConfig,
    #[serde(with = "serde_bigint")]
    pub modulus: BigInt,
    pub separating_ray: HClass,
    pub rays: Vec<RayRecord>,
    pub matching: Vec<MatchRow>,
    pub verification: Vec<VerificationRecord>,
    pub series: DonaldsonSeries,
}

impl RecoveryReport {
    /// True when every queried ray has `Q(S) > 0`.
    pub fn paper_backed(&self) -> bool {
        self.rays.iter().all(|r| r.paper_backed) && self.verification.iter().all(|r| r.paper_backed)
    }
}

fn query_all<O: RayOracle + ?Sized>(oracle: &O, rays: &[HClass], degree: usize) -> Result<Vec<RaySequence>> {
    if oracle.is_serial() {
        rays.iter().map(|s| oracle.ray_sequence(s, degree)).collect()
    } else {
        rays.par_iter().map(|s| oracle.ray_sequence(s, degree)).collect()
    }
}

pub fn recover_series<O: RayOracle + ?Sized>(
    oracle: &O,
    lattice: &Lattice,
    cfg: &RecoveryConfig,
) -> Result<DonaldsonSeries> {
    recover_series_report(oracle, lattice, cfg).map(|r| r.series)
}

pub fn recover_series_report<O: RayOracle + ?Sized>(
    oracle: &O,
    lattice: &Lattice,
    cfg: &RecoveryConfig,
) -> Result<RecoveryReport> {
    let plan = plan_rays(lattice, cfg)?;
    let n = lattice.rank;
    let m = &plan.modulus;
    let bound = BigInt::from(cfg.coord_bound);

    let mut rays = vec![plan.separating.clone()];
    rays.extend(plan.basis_rays.iter().cloned());
    let seqs = query_all(oracle, &rays, plan.degree)?;
    let decs: Vec<PronyDecomposition> = if oracle.is_serial() {
        seqs.iter().map(|s| decompose(s, cfg)).collect::<Result<_>>()?
    } else {
        seqs.par_iter().map(|s| decompose(s, cfg)).collect::<Result<_>>()?
    };

    let records: Vec<RayRecord> = rays
        .iter()
        .zip(&seqs)
        .zip(&decs)
        .enumerate()
        .map(|(i, ((ray, seq), dec))| {
            let q_s = seq.q_s.to_integer();
            RayRecord {
                role: if i == 0 {
                    "separating".into()
                } else {
                    format!("basis e{i}")
                },
                ray: ray.clone(),
                paper_backed: q_s.is_positive(),
                q_s,
                decomposition: dec.clone(),
            }
        })
        .collect();

    let sep = &decs[0];
    let index: HashMap<&BigInt, usize> = sep.pairs.iter().enumerate().map(|(i, p)| (&p.root, i)).collect();
    let mut dual = vec![vec![BigInt::zero(); n]; sep.pairs.len()];
    let half = (m - BigInt::one()) / 2;

    for (i, dec) in decs[1..].iter().enumerate() {
        if dec.pairs.len() != sep.pairs.len() {
            return Err(Error::InconsistentMatching(format!(
                "separating ray has {} classes but ray e{} has {}",
                sep.pairs.len(),
                i + 1,
                dec.pairs.len()
            )));
        }
        let mut seen = vec![false; sep.pairs.len()];
        for p in &dec.pairs {
            let shifted: BigInt = &p.root + &half;
            let v = shifted.div_floor(m);
            let offset = &p.root - m * &v;
            let Some(&s) = index.get(&v) else {
                return Err(Error::BoundExceeded(format!(
                    "root {} on ray e{} is not within {} of M times a separating value",
                    p.root,
                    i + 1,
                    cfg.coord_bound
                )));
            };
            if offset.abs() > bound {
                return Err(Error::BoundExceeded(format!(
                    "|K·e{}| = {} exceeds the declared bound {}",
                    i + 1,
                    offset.abs(),
                    cfg.coord_bound
                )));
            }
            if seen[s] {
                return Err(Error::InconsistentMatching(format!(
                    "two roots on ray e{} match separating value {v}",
                    i + 1
                )));
            }
            seen[s] = true;
            if p.alpha != sep.pairs[s].alpha {
                return Err(Error::InconsistentMatching(format!(
                    "class with K·w = {v}: coefficient {} on the separating ray, {} on ray e{}",
                    format_rational(&sep.pairs[s].alpha),
                    format_rational(&p.alpha),
                    i + 1
                )));
            }
            dual[s][i] = offset;
        }
    }

    let mut matching = Vec::with_capacity(sep.pairs.len());
    for (p, y) in sep.pairs.iter().zip(dual) {
        let encoded: BigInt = y.iter().zip(&plan.separating.0).map(|(a, b)| a * b).sum();
        if encoded != p.root {
            return Err(Error::BoundExceeded(format!(
                "dual coordinates {} re-encode to {encoded}, not {}",
                HClass(y.clone()),
                p.root
            )));
        }
        let k = lattice.from_dual_coords(&y)?.ok_or_else(|| {
            Error::VerificationFailed(format!(
                "dual coordinates {} do not come from an integral class; the lattice must be unimodular",
                HClass(y.clone())
            ))
        })?;
        if !lattice.is_characteristic(&k)? {
            return Err(Error::CharacteristicViolation(k.to_string()));
        }
        matching.push(MatchRow {
            separating_value: p.root.clone(),
            alpha: p.alpha.clone(),
            dual_coords: HClass(y),
            k,
        });
    }

    let terms: Vec<Term> = matching
        .iter()
        .map(|r| Term::new(r.alpha.clone(), r.k.clone()))
        .collect();
    let parity = Parity::from_b_plus(lattice.b_plus).unwrap_or_else(|| infer_parity(lattice, &terms));
    let series = DonaldsonSeries::normalized(lattice.clone(), terms, parity)?;

    let violations = verify_series(&series);
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Error::VerificationFailed(text.join("; ")));
    }

    let checks = query_all(oracle, &plan.verification, plan.degree)?;
    let mut verification = Vec::with_capacity(checks.len());
    for seq in checks {
        let expected = c_on_ray(&series, &seq.s, plan.degree)?;
        if expected.values != seq.values {
            return Err(Error::VerificationFailed(format!(
                "recovered series disagrees with the oracle on ray {}",
                seq.s
            )));
        }
        let q_s = seq.q_s.to_integer();
        verification.push(VerificationRecord {
            ray: seq.s,
            paper_backed: q_s.is_positive(),
            q_s,
            agrees: true,
        });
    }

    Ok(RecoveryReport {
        config: cfg.clone(),
        modulus: plan.modulus,
        separating_ray: plan.separating,
        rays: records,
        matching,
        verification,
        series,
    })
}

fn infer_parity(lattice: &Lattice, terms: &[Term]) -> Parity {
    let probe = DonaldsonSeries {
        lattice: lattice.clone(),
        terms: terms.to_vec(),
        parity: Parity::Odd,
    };
    if check_parity(&probe) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SeriesViolation {
    DimensionMismatch { term: usize },
    ZeroCoefficient { class: HClass },
    DuplicateClass { class: HClass },
    CharacteristicViolation { class: HClass },
    PairingViolation { class: HClass },
    ParityMismatch { declared: Parity, expected: Parity },
}

impl fmt::Display for SeriesViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesViolation::DimensionMismatch { term } => write!(f, "DimensionMismatch(term {term})"),
            SeriesViolation::ZeroCoefficient { class } => write!(f, "ZeroCoefficient({class})"),
            SeriesViolation::DuplicateClass { class } => write!(f, "DuplicateClass({class})"),
            SeriesViolation::CharacteristicViolation { class } => {
                write!(f, "CharacteristicViolation({class})")
            }
            SeriesViolation::PairingViolation { class } => write!(f, "PairingViolation({class})"),
            SeriesViolation::ParityMismatch { declared, expected } => {
                write!(f, "ParityMismatch(declared {declared:?}, b+ gives {expected:?})")
            }
        }
    }
}

/// Structural checks on a series: characteristic classes, `±K` pairing with
/// the declared parity, distinct classes, nonzero coefficients.
pub fn verify_series(series: &DonaldsonSeries) -> Vec<SeriesViolation> {
    let mut out = Vec::new();
    let lattice = &series.lattice;
    if let Some(expected) = Parity::from_b_plus(lattice.b_plus) {
        if expected != series.parity {
            out.push(SeriesViolation::ParityMismatch {
                declared: series.parity,
                expected,
            });
        }
    }
    let mut seen: HashMap<&HClass, &Rational> = HashMap::new();
    for (i, t) in series.terms.iter().enumerate() {
        if t.k.len() != lattice.rank {
            out.push(SeriesViolation::DimensionMismatch { term: i });
            continue;
        }
        if t.a.is_zero() {
            out.push(SeriesViolation::ZeroCoefficient { class: t.k.clone() });
        }
        if seen.insert(&t.k, &t.a).is_some() {
            out.push(SeriesViolation::DuplicateClass { class: t.k.clone() });
        }
        if !lattice.is_characteristic(&t.k).unwrap_or(false) {
            out.push(SeriesViolation::CharacteristicViolation { class: t.k.clone() });
        }
    }
    for t in &series.terms {
        let partner = seen.get(&t.k.neg());
        let ok = match (series.parity, partner) {
            (Parity::Even, Some(&b)) => *b == t.a,
            (Parity::Odd, Some(&b)) => *b == -t.a.clone(),
            (_, None) => false,
        };
        if !ok {
            out.push(SeriesViolation::PairingViolation { class: t.k.clone() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn blown_up_point() -> DonaldsonSeries {
        // b⁺ = 3, so even parity; (1,1,1,1) is characteristic on ⟨1⟩³ ⊕ ⟨−1⟩.
        let l = Lattice::diagonal(3, 1);
        let k = HClass::from_i64s(&[1, 1, 1, 1]);
        DonaldsonSeries::new(
            l,
            vec![Term::new(ratio(1, 2), k.clone()), Term::new(ratio(1, 2), k.neg())],
            Parity::Even,
        )
        .unwrap()
    }

    #[test]
    fn plan_is_deterministic() {
        let l = Lattice::diagonal(1, 2);
        let cfg = RecoveryConfig::new(1, 2);
        let a = plan_rays(&l, &cfg).unwrap();
        assert_eq!(a, plan_rays(&l, &cfg).unwrap());
        assert_eq!(a.modulus, BigInt::from(7));
        assert_eq!(a.separating, HClass::from_i64s(&[7, 49, 343]));
        assert_eq!(a.basis_rays[1], HClass::from_i64s(&[49, 344, 2401]));
        assert_eq!(a.degree, 7);
    }

    #[test]
    fn round_trip_small() {
        let s = blown_up_point();
        let got = recover_series(&s, &s.lattice, &RecoveryConfig::new(1, 4)).unwrap();
        assert_eq!(got, s.canonical());
    }

    #[test]
    fn single_ray_recovery() {
        let s = blown_up_point();
        let ray = HClass::from_i64s(&[2, 1, 1, 0]);
        let dec = recover_on_ray(&s, &ray, &RecoveryConfig::new(1, 4)).unwrap();
        assert_eq!(
            dec,
            PronyDecomposition::from_pairs([(ratio(1, 2), 4.into()), (ratio(1, 2), (-4).into())])
        );
    }

    #[test]
    fn bound_too_small_is_reported() {
        let l = Lattice::diagonal(3, 1);
        let k = HClass::from_i64s(&[5, 1, 1, 1]);
        let s = DonaldsonSeries::new(
            l.clone(),
            vec![Term::new(int(1), k.clone()), Term::new(int(1), k.neg())],
            Parity::Even,
        )
        .unwrap();
        let err = recover_series(&s, &l, &RecoveryConfig::new(1, 4)).unwrap_err();
        assert!(
            matches!(err, Error::BoundExceeded(_) | Error::InconsistentMatching(_)),
            "{err:?}"
        );
        assert_eq!(
            recover_series(&s, &l, &RecoveryConfig::new(5, 4)).unwrap(),
            s.canonical()
        );
    }

    #[test]
    fn budget_is_enforced() {
        let l = Lattice::diagonal(3, 1);
        let terms = (1..=3)
            .flat_map(|n| {
                let k = HClass::from_i64s(&[2 * n - 1, 1, 1, 1]);
                [Term::new(int(1), k.clone()), Term::new(int(1), k.neg())]
            })
            .collect();
        let s = DonaldsonSeries::new(l.clone(), terms, Parity::Even).unwrap();
        let err = recover_series(&s, &l, &RecoveryConfig::new(5, 2)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }), "{err:?}");
    }

    #[test]
    fn non_characteristic_data_is_rejected() {
        let l = Lattice::diagonal(3, 1);
        let k = HClass::from_i64s(&[2, 1, 1, 1]);
        let s = DonaldsonSeries::new(
            l.clone(),
            vec![Term::new(int(1), k.clone()), Term::new(int(1), k.neg())],
            Parity::Even,
        )
        .unwrap();
        let err = recover_series(&s, &l, &RecoveryConfig::new(2, 4)).unwrap_err();
        assert!(matches!(err, Error::CharacteristicViolation(_)), "{err:?}");
    }

    #[test]
    fn table_oracle_converts_q_to_c() {
        let s = blown_up_point();
        let ray = HClass::from_i64s(&[1, 1, 0, 0]);
        let c = c_on_ray(&s, &ray, 5).unwrap();
        let q = crate::series::q_from_c(&c);
        let mut oracle = TableOracle::new(s.lattice.clone());
        for (d, v) in q.into_iter().enumerate() {
            oracle.insert(ray.clone(), d, v);
        }
        assert_eq!(oracle.ray_sequence(&ray, 5).unwrap(), c);
        assert!(matches!(oracle.ray_sequence(&ray, 6), Err(Error::InsufficientData(_))));
        assert!(matches!(
            oracle.ray_sequence(&HClass::zero(4), 1),
            Err(Error::MissingRay(_))
        ));
    }

    #[test]
    fn verify_examples() {
        assert!(verify_series(&blown_up_point()).is_empty());

        let even = Lattice::hyperbolic();
        let odd_class = HClass::from_i64s(&[1, 0]);
        let s = DonaldsonSeries::new(
            even,
            vec![Term::new(int(1), odd_class.clone()), Term::new(int(1), odd_class.neg())],
            Parity::Odd,
        )
        .unwrap();
        let v = verify_series(&s);
        assert!(v.contains(&SeriesViolation::CharacteristicViolation { class: odd_class }));

        let mut lone = blown_up_point();
        lone.terms.pop();
        let k = lone.terms[0].k.clone();
        assert_eq!(
            verify_series(&lone),
            vec![SeriesViolation::PairingViolation { class: k }]
        );
    }
}
