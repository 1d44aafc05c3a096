//! Python bindings. Rationals cross the boundary as `fractions.Fraction`
//! (ints and `"p/q"` strings are accepted on input); classes are lists of
//! ints or ray expressions such as `"e1+2*e3"`. Structured reports come back
//! as plain dicts with the same layout as the JSON documents.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde::Serialize;

use donaldson::geometry;
use donaldson::io;
use donaldson::rational::parse_rational;
use donaldson::recovery::{self, RayOracle};
use donaldson::recurrence;
use donaldson::series::{self as dseries, RaySequence};
use donaldson::{catalog, DonaldsonSeries, Error, HClass, Parity, Rational, RecoveryConfig, Term};

create_exception!(pydonaldson, DonaldsonError, PyValueError);

fn err(e: Error) -> PyErr {
    DonaldsonError::new_err(format!("{}: {e}", e.name()))
}

fn to_fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

fn fractions<'py>(py: Python<'py>, rs: &[Rational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    rs.iter().map(|r| to_fraction(py, r)).collect()
}

fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = obj.cast::<PyString>() {
        return parse_rational(s.to_str()?).map_err(err);
    }
    if let Ok(n) = obj.extract::<BigInt>() {
        return Ok(Rational::from_integer(n));
    }
    let p: BigInt = obj.getattr("numerator")?.extract()?;
    let q: BigInt = obj.getattr("denominator")?.extract()?;
    if q == BigInt::from(0) {
        return Err(err(Error::InvalidParameter("zero denominator".into())));
    }
    Ok(Rational::new(p, q))
}

fn rationals(obj: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    obj.try_iter()?.map(|x| to_rational(&x?)).collect()
}

fn to_class(obj: &Bound<'_, PyAny>, rank: usize) -> PyResult<HClass> {
    if let Ok(s) = obj.cast::<PyString>() {
        return io::parse_ray(s.to_str()?, rank).map_err(err);
    }
    let coords: Vec<BigInt> = obj.extract()?;
    if coords.len() != rank {
        return Err(err(Error::DimensionMismatch {
            expected: rank,
            got: coords.len(),
        }));
    }
    Ok(HClass::new(coords))
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(|e| err(Error::Format(e.to_string())))
}

fn to_json<T: Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn parse_parity(text: &str) -> PyResult<Parity> {
    match text {
        "even" => Ok(Parity::Even),
        "odd" => Ok(Parity::Odd),
        _ => Err(err(Error::InvalidParameter(format!(
            "parity must be 'even' or 'odd', got {text:?}"
        )))),
    }
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

#[pyclass(name = "Lattice", module = "pydonaldson", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyLattice {
    inner: donaldson::Lattice,
}

#[pymethods]
impl PyLattice {
    /// Lattice from a symmetric Gram matrix; `b+` and `w2` are computed.
    #[new]
    fn new(gram: Vec<Vec<i64>>) -> PyResult<Self> {
        let n = gram.len();
        if let Some((i, row)) = gram.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(err(Error::Format(format!(
                "gram row {i} has length {}, expected {n}",
                row.len()
            ))));
        }
        Ok(PyLattice {
            inner: donaldson::Lattice::from_gram(gram),
        })
    }

    #[staticmethod]
    fn diagonal(pos: usize, neg: usize) -> Self {
        PyLattice {
            inner: donaldson::Lattice::diagonal(pos, neg),
        }
    }

    #[staticmethod]
    fn hyperbolic() -> Self {
        PyLattice {
            inner: donaldson::Lattice::hyperbolic(),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (negative = false))]
    fn e8(negative: bool) -> Self {
        PyLattice {
            inner: donaldson::Lattice::e8(negative),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyLattice {
            inner: from_json(text)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&self.inner)
    }

    fn direct_sum(&self, other: &PyLattice) -> Self {
        PyLattice {
            inner: self.inner.direct_sum(&other.inner),
        }
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank
    }

    #[getter]
    fn gram(&self) -> Vec<Vec<i64>> {
        self.inner.gram.clone()
    }

    #[getter]
    fn b_plus(&self) -> usize {
        self.inner.b_plus
    }

    #[getter]
    fn w2(&self) -> Vec<u8> {
        self.inner.w2.clone()
    }

    /// `(b+, b-, nullity)`.
    fn signature(&self) -> (usize, usize, usize) {
        let s = self.inner.signature();
        (s.b_plus, s.b_minus, s.nullity)
    }

    fn determinant(&self) -> BigInt {
        self.inner.determinant()
    }

    fn is_even(&self) -> bool {
        self.inner.is_even()
    }

    fn pair(&self, a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<BigInt> {
        let n = self.inner.rank;
        self.inner.pair(&to_class(a, n)?, &to_class(b, n)?).map_err(err)
    }

    fn square(&self, a: &Bound<'_, PyAny>) -> PyResult<BigInt> {
        self.inner.square(&to_class(a, self.inner.rank)?).map_err(err)
    }

    fn is_characteristic(&self, k: &Bound<'_, PyAny>) -> PyResult<bool> {
        self.inner
            .is_characteristic(&to_class(k, self.inner.rank)?)
            .map_err(err)
    }

    /// Violations as human-readable strings; empty when the lattice is valid.
    fn validate(&self) -> Vec<String> {
        self.inner.validate().iter().map(|v| v.to_string()).collect()
    }

    fn __repr__(&self) -> String {
        let s = self.inner.signature();
        format!(
            "Lattice(rank={}, b_plus={}, b_minus={})",
            self.inner.rank, s.b_plus, s.b_minus
        )
    }
}

#[pyclass(name = "Series", module = "pydonaldson", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySeries {
    inner: DonaldsonSeries,
}

impl PySeries {
    fn class(&self, obj: &Bound<'_, PyAny>) -> PyResult<HClass> {
        to_class(obj, self.inner.rank())
    }

    fn sequence(&self, ray: &Bound<'_, PyAny>, degree: usize) -> PyResult<RaySequence> {
        dseries::c_on_ray(&self.inner, &self.class(ray)?, degree).map_err(err)
    }
}

#[pymethods]
impl PySeries {
    /// `terms` is a list of `(coefficient, class)` pairs. Repeated classes are
    /// merged. Parity defaults to the one fixed by `b+`.
    #[new]
    #[pyo3(signature = (lattice, terms, parity = None))]
    fn new(lattice: &PyLattice, terms: &Bound<'_, PyAny>, parity: Option<&str>) -> PyResult<Self> {
        let rank = lattice.inner.rank;
        let mut out = Vec::new();
        for item in terms.try_iter()? {
            let (a, k): (Bound<'_, PyAny>, Bound<'_, PyAny>) = item?.extract()?;
            out.push(Term::new(to_rational(&a)?, to_class(&k, rank)?));
        }
        let parity = match parity {
            Some(p) => parse_parity(p)?,
            None => Parity::from_b_plus(lattice.inner.b_plus).ok_or_else(|| {
                err(Error::HypothesisViolated(format!(
                    "b+ = {} is even; pass parity explicitly",
                    lattice.inner.b_plus
                )))
            })?,
        };
        let inner = DonaldsonSeries::normalized(lattice.inner.clone(), out, parity).map_err(err)?;
        Ok(PySeries { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySeries {
            inner: from_json(text)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&self.inner)
    }

    #[getter]
    fn lattice(&self) -> PyLattice {
        PyLattice {
            inner: self.inner.lattice.clone(),
        }
    }

    #[getter]
    fn parity(&self) -> &'static str {
        parity_name(self.inner.parity)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Bound<'py, PyAny>, Vec<BigInt>)>> {
        self.inner
            .terms
            .iter()
            .map(|t| Ok((to_fraction(py, &t.a)?, t.k.0.clone())))
            .collect()
    }

    /// `C_0(S), …, C_degree(S)`.
    fn ray_sequence<'py>(
        &self,
        py: Python<'py>,
        ray: &Bound<'py, PyAny>,
        degree: usize,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.sequence(ray, degree)?.values)
    }

    /// `q_0(S), …, q_degree(S)`.
    fn q_values<'py>(
        &self,
        py: Python<'py>,
        ray: &Bound<'py, PyAny>,
        degree: usize,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &dseries::q_from_c(&self.sequence(ray, degree)?))
    }

    fn eval_q(&self, h: Vec<f64>) -> PyResult<f64> {
        let h: Vec<Rational> = h
            .iter()
            .map(|x| Rational::from_float(*x).ok_or_else(|| err(Error::InvalidParameter(format!("{x} is not finite")))))
            .collect::<PyResult<_>>()?;
        dseries::eval_q(&self.inner, &h).map_err(err)
    }

    fn eval_q_on_ray(&self, ray: &Bound<'_, PyAny>, t: f64) -> PyResult<f64> {
        dseries::eval_q_on_ray(&self.inner, &self.class(ray)?, t).map_err(err)
    }

    fn j_norm(&self, h: &Bound<'_, PyAny>) -> PyResult<BigInt> {
        geometry::j_norm(&self.inner, &self.class(h)?).map_err(err)
    }

    fn genus_bound<'py>(&self, py: Python<'py>, sigma: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let report = geometry::genus_lower_bound(&self.inner, &self.class(sigma)?).map_err(err)?;
        to_dict(py, &report)
    }

    fn asymptotic_remainder(&self, ray: &Bound<'_, PyAny>, t: f64) -> PyResult<f64> {
        geometry::asymptotic_remainder(&self.inner, &self.class(ray)?, t).map_err(err)
    }

    fn numerology<'py>(&self, py: Python<'py>, chi: i64, sigma: i64) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &geometry::numerology_check(&self.inner, chi, sigma).map_err(err)?)
    }

    /// Structural violations (symmetry, characteristic classes, parity).
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &recovery::verify_series(&self.inner))
    }

    fn blow_up(&self) -> Self {
        PySeries {
            inner: dseries::blow_up(&self.inner),
        }
    }

    /// Equal when lattice, parity and the multiset of terms agree.
    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        other
            .cast::<PySeries>()
            .is_ok_and(|o| o.get().inner.canonical() == self.inner.canonical())
    }

    fn __len__(&self) -> usize {
        self.inner.terms.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Series(rank={}, terms={}, parity={})",
            self.inner.rank(),
            self.inner.terms.len(),
            parity_name(self.inner.parity)
        )
    }
}

/// A Python callable `f(ray: list[int], degree: int) -> list[q_d]`.
struct CallableOracle {
    f: Py<PyAny>,
    lattice: donaldson::Lattice,
}

impl RayOracle for CallableOracle {
    fn ray_sequence(&self, s: &HClass, degree: usize) -> donaldson::Result<RaySequence> {
        let q = Python::attach(|py| -> PyResult<Vec<Rational>> {
            let out = self.f.bind(py).call1((s.0.clone(), degree))?;
            rationals(&out)
        })
        .map_err(|e| Error::Format(format!("oracle raised for ray {s}: {e}")))?;
        if q.len() <= degree {
            return Err(Error::InsufficientData(format!(
                "oracle returned {} values for ray {s}, need {}",
                q.len(),
                degree + 1
            )));
        }
        let q_s = Rational::from_integer(self.lattice.square(s)?);
        Ok(RaySequence {
            s: s.clone(),
            values: dseries::c_from_q(&q[..=degree], &q_s),
            q_s,
        })
    }

    fn is_serial(&self) -> bool {
        true
    }
}

#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    catalog::list()
}

/// The series of a catalog entry, e.g. `"k3"` or `"elliptic_pg2#cp2bar"`.
#[pyfunction]
fn catalog_series(name: &str) -> PyResult<PySeries> {
    Ok(PySeries {
        inner: catalog::get(name).map_err(err)?.series,
    })
}

/// The full catalog entry (series, chi, sigma, provenance) as a dict.
#[pyfunction]
fn catalog_entry<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &catalog::get(name).map_err(err)?)
}

#[pyfunction]
fn parse_ray(expr: &str, rank: usize) -> PyResult<Vec<BigInt>> {
    Ok(io::parse_ray(expr, rank).map_err(err)?.0)
}

#[pyfunction]
fn q_from_c<'py>(py: Python<'py>, c: &Bound<'py, PyAny>, q_s: &Bound<'py, PyAny>) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let seq = RaySequence {
        s: HClass::zero(0),
        q_s: to_rational(q_s)?,
        values: rationals(c)?,
    };
    fractions(py, &dseries::q_from_c(&seq))
}

#[pyfunction]
fn c_from_q<'py>(py: Python<'py>, q: &Bound<'py, PyAny>, q_s: &Bound<'py, PyAny>) -> PyResult<Vec<Bound<'py, PyAny>>> {
    fractions(py, &dseries::c_from_q(&rationals(q)?, &to_rational(q_s)?))
}

/// Coefficients `[p_0, …, p_L]` of the minimal recurrence `Σ p_j c_{d+j} = 0`.
#[pyfunction]
fn minimal_recurrence<'py>(py: Python<'py>, seq: &Bound<'py, PyAny>) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let info = recurrence::minimal_recurrence(&rationals(seq)?).map_err(err)?;
    fractions(py, &info.charpoly)
}

/// Pairs `(alpha, root)` with `seq[d] = Σ alpha · root^d`, by decreasing root.
#[pyfunction]
#[pyo3(signature = (seq, margin = 0))]
fn prony<'py>(py: Python<'py>, seq: &Bound<'py, PyAny>, margin: usize) -> PyResult<Vec<(Bound<'py, PyAny>, BigInt)>> {
    let dec = recurrence::prony_recover_with_margin(&rationals(seq)?, margin).map_err(err)?;
    dec.pairs
        .iter()
        .map(|p| Ok((to_fraction(py, &p.alpha)?, p.root.clone())))
        .collect()
}

fn config(bound: u64, max_classes: usize, degree_margin: usize, verify_rays: usize, seed: u64) -> RecoveryConfig {
    RecoveryConfig {
        coord_bound: bound,
        max_classes,
        degree_margin,
        verify_rays,
        seed,
    }
}

/// Rays queried by `recover`, as a dict with the separating ray, basis rays,
/// verification rays, modulus and degree.
#[pyfunction]
#[pyo3(signature = (lattice, bound, max_classes, degree_margin = 4, verify_rays = 2, seed = 0x5eed))]
fn plan_rays<'py>(
    py: Python<'py>,
    lattice: &PyLattice,
    bound: u64,
    max_classes: usize,
    degree_margin: usize,
    verify_rays: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(bound, max_classes, degree_margin, verify_rays, seed);
    to_dict(py, &recovery::plan_rays(&lattice.inner, &cfg).map_err(err)?)
}

/// Reconstructs a series from an oracle: either a `Series` or a callable
/// `f(ray, degree) -> [q_0, …, q_degree]`. With `report=True` the full
/// recovery report is returned as a dict.
#[pyfunction]
#[pyo3(signature = (oracle, lattice, bound, max_classes, degree_margin = 4, verify_rays = 2, seed = 0x5eed, report = false))]
#[allow(clippy::too_many_arguments)]
fn recover<'py>(
    py: Python<'py>,
    oracle: &Bound<'py, PyAny>,
    lattice: &PyLattice,
    bound: u64,
    max_classes: usize,
    degree_margin: usize,
    verify_rays: usize,
    seed: u64,
    report: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(bound, max_classes, degree_margin, verify_rays, seed);
    let lat = lattice.inner.clone();
    let result = if let Ok(series) = oracle.cast::<PySeries>() {
        let series = series.get().inner.clone();
        py.detach(|| recovery::recover_series_report(&series, &lat, &cfg))
    } else if oracle.is_callable() {
        let o = CallableOracle {
            f: oracle.clone().unbind(),
            lattice: lat.clone(),
        };
        py.detach(|| recovery::recover_series_report(&o, &lat, &cfg))
    } else {
        return Err(PyValueError::new_err("oracle must be a Series or a callable"));
    };
    let r = result.map_err(err)?;
    if report {
        to_dict(py, &r)
    } else {
        Ok(Bound::new(py, PySeries { inner: r.series })?.into_any())
    }
}

/// Reduces a mixed-invariant table (JSON text) to `q_0(S), …, q_A(S)`.
#[pyfunction]
fn reduce_table<'py>(py: Python<'py>, table_json: &str) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let table: donaldson::MixedInvariantTable = from_json(table_json)?;
    fractions(py, &table.reduce().map_err(err)?)
}

#[pymodule]
fn pydonaldson(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DonaldsonError", m.py().get_type::<DonaldsonError>())?;
    m.add_class::<PyLattice>()?;
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_series, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_entry, m)?)?;
    m.add_function(wrap_pyfunction!(parse_ray, m)?)?;
    m.add_function(wrap_pyfunction!(q_from_c, m)?)?;
    m.add_function(wrap_pyfunction!(c_from_q, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_recurrence, m)?)?;
    m.add_function(wrap_pyfunction!(prony, m)?)?;
    m.add_function(wrap_pyfunction!(plan_rays, m)?)?;
    m.add_function(wrap_pyfunction!(recover, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_table, m)?)?;
    Ok(())
}
