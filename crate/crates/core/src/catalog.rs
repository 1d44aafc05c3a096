//! Built-in manifolds with closed-form series.
//!
//! | entry | series |
//! |---|---|
//! | `k3` | `exp(Q/2)` |
//! | `octic_double_cover` | `2 exp(Q/2) cosh K_X` |
//! | `elliptic_pg<n>` | `exp(Q/2) sinh(F)^{n−1}` |
//! | `dolgachev_pg<n>_m<a>[_<b>]` | `exp(Q/2) sinh(F)^{n−1+r} / ∏ sinh(F/m_i)` (conjectural) |
//! | `<entry>#cp2bar` | blow-up: lattice `⊕ ⟨−1⟩`, series `· cosh E` |
//!
//! The octic double cover uses `⟨1⟩⁷ ⊕ ⟨−1⟩³⁷` with
//! `K_X = (5,3,1,1,1,1,1; 1,…,1)`, a characteristic vector of square 2.
//! Elliptic surfaces with even exponents live on `(2p_g+1)H ⊕ (p_g+1)(−E8)`
//! with the fibre class in the first `H`; odd exponents need the fibre class
//! characteristic, so those use `⟨1⟩^{2p_g+1} ⊕ ⟨−1⟩^{10p_g+9}` with the
//! primitive isotropic characteristic vector `(3^{p_g+1}, 1^{p_g}; 1, …, 1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expsum::ExpSum;
use crate::lattice::{HClass, Lattice};
use crate::rational::{int, Rational};
use crate::series::{blow_up, DonaldsonSeries, Parity, Term};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(flatten)]
    pub series: DonaldsonSeries,
    pub chi: i64,
    pub sigma: i64,
    pub conjectural: bool,
    pub provenance: String,
}

impl CatalogEntry {
    /// The entry after a connected sum with a negative-definite `CP²`.
    pub fn blown_up(&self) -> CatalogEntry {
        CatalogEntry {
            name: format!("{}#cp2bar", self.name),
            series: blow_up(&self.series),
            chi: self.chi + 1,
            sigma: self.sigma - 1,
            conjectural: self.conjectural,
            provenance: format!("{}; blow-up factor cosh E", self.provenance),
        }
    }
}

fn k3_lattice() -> Lattice {
    let h = Lattice::hyperbolic();
    let e = Lattice::e8(true);
    Lattice::direct_sum_all(&[h.clone(), h.clone(), h, e.clone(), e])
}

pub fn k3() -> CatalogEntry {
    let series =
        DonaldsonSeries::new(k3_lattice(), vec![Term::new(int(1), HClass::zero(22))], Parity::Even).expect("rank 22");
    CatalogEntry {
        name: "k3".into(),
        series,
        chi: 24,
        sigma: -16,
        conjectural: false,
        provenance: "q_{2i} = (2i)!/(2^i i!) Q^i, i.e. q = exp(Q/2)".into(),
    }
}

/// `K_X` for the double plane branched along an octic, in `⟨1⟩⁷ ⊕ ⟨−1⟩³⁷`.
pub fn octic_canonical_class() -> HClass {
    let mut k = vec![5, 3, 1, 1, 1, 1, 1];
    k.extend(std::iter::repeat_n(1, 37));
    HClass::from_i64s(&k)
}

pub fn branched_octic_cover() -> CatalogEntry {
    let k = octic_canonical_class();
    let series = DonaldsonSeries::new(
        Lattice::diagonal(7, 37),
        vec![Term::new(int(1), k.clone()), Term::new(int(1), k.neg())],
        Parity::Even,
    )
    .expect("rank 44");
    CatalogEntry {
        name: "octic_double_cover".into(),
        series,
        chi: 46,
        sigma: -30,
        conjectural: false,
        provenance: "q = 2 exp(Q/2) cosh K_X".into(),
    }
}

/// Lattice of `E(p_g + 1)` together with a primitive isotropic class that is
/// characteristic when `odd` (and lies in a hyperbolic summand otherwise).
fn elliptic_lattice(p_g: u32, odd: bool) -> (Lattice, HClass) {
    let pg = p_g as usize;
    if odd {
        let lattice = Lattice::diagonal(2 * pg + 1, 10 * pg + 9);
        let mut k = vec![3i64; pg + 1];
        k.extend(std::iter::repeat_n(1, pg + 10 * pg + 9));
        (lattice, HClass::from_i64s(&k))
    } else {
        let mut parts = vec![Lattice::hyperbolic(); 2 * pg + 1];
        parts.extend(std::iter::repeat_n(Lattice::e8(true), pg + 1));
        let lattice = Lattice::direct_sum_all(&parts);
        let k = HClass::basis(lattice.rank, 0);
        (lattice, k)
    }
}

/// `sinh(m y) / sinh(y) = Σ_{j<m} e^{(m−1−2j) y}` as (coefficient, exponent).
pub fn sinh_quotient_expand(m: u32) -> Result<Vec<(Rational, i64)>> {
    if m == 0 {
        return Err(Error::InvalidParameter("sinh quotient needs m >= 1".into()));
    }
    let m = i64::from(m);
    Ok((0..m).map(|j| (Rational::one(), m - 1 - 2 * j)).collect())
}

/// `sinh(F)^{p_g−1} ∏_i sinh(F)/sinh(F/m_i)` in units of `κ = F / ∏ m_i`.
fn elliptic_exponential_sum(p_g: u32, multiplicities: &[u32]) -> Result<ExpSum> {
    let product: i64 = multiplicities.iter().map(|&m| i64::from(m)).product();
    let mut sum = ExpSum::sinh_pow(p_g - 1).dilate(product);
    for &m in multiplicities {
        let quotient = ExpSum::from_terms(sinh_quotient_expand(m)?);
        sum = sum.mul(&quotient.dilate(product / i64::from(m)));
    }
    Ok(sum)
}

fn elliptic_entry(p_g: u32, multiplicities: &[u32], name: String, provenance: String) -> Result<CatalogEntry> {
    let sum = elliptic_exponential_sum(p_g, multiplicities)?;
    let odd = sum.terms().any(|(_, e)| e.is_odd());
    debug_assert!(sum.terms().all(|(_, e)| e.is_odd() == odd));
    let (lattice, kappa) = elliptic_lattice(p_g, odd);
    let terms = sum
        .terms()
        .map(|(c, e)| Term::new(c.clone(), kappa.scale(&BigInt::from(e))))
        .collect();
    let parity = Parity::from_b_plus(lattice.b_plus).expect("b+ = 2 p_g + 1 is odd");
    let n = i64::from(p_g) + 1;
    Ok(CatalogEntry {
        name,
        series: DonaldsonSeries::new(lattice, terms, parity)?,
        chi: 12 * n,
        sigma: -8 * n,
        conjectural: !multiplicities.is_empty(),
        provenance,
    })
}

/// Minimal elliptic surface with geometric genus `p_g` and no multiple fibres.
pub fn elliptic(p_g: u32) -> Result<CatalogEntry> {
    if p_g < 1 {
        return Err(Error::InvalidParameter("elliptic surfaces need p_g >= 1".into()));
    }
    elliptic_entry(
        p_g,
        &[],
        format!("elliptic_pg{p_g}"),
        format!("q = exp(Q/2) sinh(F)^{}", p_g - 1),
    )
}

/// The conjectured series of an elliptic surface with multiple fibres of
/// multiplicities `m_i`; flagged conjectural whenever `r ≥ 1`.
pub fn dolgachev_conjecture(p_g: u32, multiplicities: &[u32]) -> Result<CatalogEntry> {
    if p_g < 1 {
        return Err(Error::InvalidParameter("p_g must be >= 1".into()));
    }
    if multiplicities.len() > 2 {
        return Err(Error::InvalidParameter(format!(
            "simply connected surfaces have at most 2 multiple fibres, got {}",
            multiplicities.len()
        )));
    }
    if multiplicities.iter().any(|&m| m < 2) {
        return Err(Error::InvalidParameter("multiplicities must be >= 2".into()));
    }
    if let [a, b] = multiplicities {
        if a.gcd(b) != 1 {
            return Err(Error::InvalidParameter(format!(
                "multiplicities {a} and {b} are not coprime"
            )));
        }
    }
    if multiplicities.is_empty() {
        return elliptic(p_g);
    }
    let tag: Vec<String> = multiplicities.iter().map(u32::to_string).collect();
    elliptic_entry(
        p_g,
        multiplicities,
        format!("dolgachev_pg{p_g}_m{}", tag.join("_")),
        format!(
            "conjecture: q = exp(Q/2) sinh(F)^{} / prod_i sinh(F/m_i), m = ({})",
            p_g as usize - 1 + multiplicities.len(),
            tag.join(",")
        ),
    )
}

const LISTED: &[&str] = &[
    "k3",
    "k3#cp2bar",
    "octic_double_cover",
    "octic_double_cover#cp2bar",
    "elliptic_pg1",
    "elliptic_pg2",
    "elliptic_pg3",
    "elliptic_pg4",
    "dolgachev_pg1_m2_3",
    "dolgachev_pg2_m2",
];

pub fn list() -> Vec<&'static str> {
    LISTED.to_vec()
}

/// Looks up a listed entry, or any name of the forms `elliptic_pg<n>`,
/// `dolgachev_pg<n>_m<a>[_<b>]`, optionally followed by `#cp2bar` suffixes.
pub fn get(name: &str) -> Result<CatalogEntry> {
    let unknown = || Error::UnknownEntry(name.to_string());
    if let Some(base) = name.strip_suffix("#cp2bar") {
        return get(base).map(|e| e.blown_up()).map_err(|_| unknown());
    }
    match name {
        "k3" => return Ok(k3()),
        "octic_double_cover" => return Ok(branched_octic_cover()),
        _ => {}
    }
    if let Some(pg) = name.strip_prefix("elliptic_pg") {
        let pg: u32 = pg.parse().map_err(|_| unknown())?;
        return elliptic(pg).map_err(|_| unknown());
    }
    if let Some(rest) = name.strip_prefix("dolgachev_pg") {
        let (pg, mults) = rest.split_once("_m").ok_or_else(unknown)?;
        let pg: u32 = pg.parse().map_err(|_| unknown())?;
        let mults: Vec<u32> = mults
            .split('_')
            .map(|m| m.parse().map_err(|_| unknown()))
            .collect::<Result<_>>()?;
        return dolgachev_conjecture(pg, &mults);
    }
    Err(unknown())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::recovery::verify_series;
    use crate::series::c_on_ray;

    fn class_set(e: &CatalogEntry, kappa: &HClass) -> Vec<(Rational, i64)> {
        // Express each class as a multiple of kappa.
        let mut out: Vec<(Rational, i64)> = e
            .series
            .terms
            .iter()
            .map(|t| {
                let i = kappa.0.iter().position(|x| *x != BigInt::from(0)).unwrap();
                let n = &t.k.0[i] / &kappa.0[i];
                assert_eq!(kappa.scale(&n), t.k);
                (t.a.clone(), i64::try_from(n).unwrap())
            })
            .collect();
        out.sort_by_key(|x| -x.1);
        out
    }

    #[test]
    fn k3_entry() {
        let e = k3();
        assert_eq!(e.series.lattice.rank, 22);
        assert_eq!(e.series.lattice.b_plus, 3);
        assert!(e.series.lattice.w2.iter().all(|&w| w == 0));
        assert!(verify_series(&e.series).is_empty());
        let c = c_on_ray(&e.series, &HClass::basis(22, 5), 6).unwrap();
        assert_eq!(c.values[0], int(1));
        assert!(c.values[1..].iter().all(|v| *v == int(0)));
    }

    #[test]
    fn octic_entry() {
        let e = branched_octic_cover();
        let k = octic_canonical_class();
        assert_eq!(e.series.lattice.square(&k).unwrap(), BigInt::from(2));
        assert_eq!(e.series.lattice.rank as i64, e.chi - 2);
        assert!(verify_series(&e.series).is_empty());
    }

    #[test]
    fn elliptic_entries() {
        assert!(matches!(elliptic(0), Err(Error::InvalidParameter(_))));
        let e1 = elliptic(1).unwrap();
        assert_eq!(e1.series.terms.len(), 1);
        assert!(e1.series.terms[0].k.is_zero());

        let e2 = elliptic(2).unwrap();
        let (_, f) = elliptic_lattice(2, true);
        assert_eq!(class_set(&e2, &f), vec![(ratio(1, 2), 1), (ratio(-1, 2), -1)]);
        assert_eq!(e2.series.parity, Parity::Odd);

        let e3 = elliptic(3).unwrap();
        let (_, f) = elliptic_lattice(3, false);
        assert_eq!(
            class_set(&e3, &f),
            vec![(ratio(1, 4), 2), (ratio(-1, 2), 0), (ratio(1, 4), -2)]
        );
        for pg in 1..=4 {
            let e = elliptic(pg).unwrap();
            assert_eq!(e.series.lattice.rank as i64, e.chi - 2, "p_g = {pg}");
            assert_eq!(e.series.lattice.signature().sigma(), e.sigma);
            assert!(verify_series(&e.series).is_empty(), "p_g = {pg}");
            assert!(e.series.lattice.validate().is_empty(), "p_g = {pg}");
        }
    }

    #[test]
    fn sinh_quotients() {
        assert_eq!(sinh_quotient_expand(1).unwrap(), vec![(int(1), 0)]);
        assert_eq!(sinh_quotient_expand(2).unwrap(), vec![(int(1), 1), (int(1), -1)]);
        assert_eq!(
            sinh_quotient_expand(3).unwrap(),
            vec![(int(1), 2), (int(1), 0), (int(1), -2)]
        );
        assert!(sinh_quotient_expand(0).is_err());
    }

    #[test]
    fn dolgachev_entries() {
        let d = dolgachev_conjecture(2, &[2]).unwrap();
        assert!(d.conjectural);
        let (_, kappa) = elliptic_lattice(2, true);
        assert_eq!(
            class_set(&d, &kappa),
            vec![
                (ratio(1, 2), 3),
                (ratio(1, 2), 1),
                (ratio(-1, 2), -1),
                (ratio(-1, 2), -3)
            ]
        );
        assert_eq!(d.series.parity, Parity::Odd);
        assert!(verify_series(&d.series).is_empty());

        assert!(dolgachev_conjecture(1, &[2, 4]).is_err());
        assert!(dolgachev_conjecture(1, &[2, 3, 5]).is_err());
        assert!(dolgachev_conjecture(1, &[1]).is_err());
        assert!(dolgachev_conjecture(0, &[]).is_err());
        assert!(!dolgachev_conjecture(3, &[]).unwrap().conjectural);
    }

    #[test]
    fn lookup() {
        let e = get("k3#cp2bar").unwrap();
        assert_eq!(e.series.lattice.rank, 23);
        assert_eq!(e.series.terms.len(), 2);
        assert!(e.series.terms.iter().all(|t| t.a == ratio(1, 2)));
        assert_eq!(get("nope"), Err(Error::UnknownEntry("nope".into())));
        assert!(get("elliptic_pgx").is_err());
        for name in list() {
            assert_eq!(get(name).unwrap().name, name);
        }
    }

    #[test]
    fn entry_json() {
        let e = get("k3#cp2bar").unwrap();
        let v: serde_json::Value = serde_json::to_value(&e).unwrap();
        assert_eq!(v["chi"], 25);
        assert_eq!(v["conjectural"], false);
        assert_eq!(v["parity"], "even");
        assert_eq!(v["lattice"]["rank"], 23);
        let back: CatalogEntry = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
    }
}
