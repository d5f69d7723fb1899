//! Python bindings. Exact values cross the boundary as `fractions.Fraction`;
//! inputs may be `int`, `str` (`"p/q"` or decimal), `Fraction` or `float`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyFloat, PyList};

use symm_core::extension;
use symm_core::hilbert_scale::{self, HilbertScalePoint, ScaleIndex};
use symm_core::modules2d::{self, CertificateJson, PowerModule, SearchOutcome};
use symm_core::moments::{self, AtomicMeasure, MomentTable, TableJson};
use symm_core::rational::{self, Rational, Real};
use symm_core::seminorm::Seminorm;
use symm_core::spectrum::{self, SpectrumBall};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if obj.is_instance_of::<PyFloat>() {
        let x: f64 = obj.extract()?;
        return rational::from_f64(x).ok_or_else(|| value_error(format!("{x} is not finite")));
    }
    rational::parse_rational(&obj.str()?.to_cow()?).map_err(value_error)
}

fn to_rationals(items: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    items.iter().map(to_rational).collect()
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((rational::format_rational(q),))
}

fn real<'py>(py: Python<'py>, r: &Real) -> PyResult<Bound<'py, PyAny>> {
    match r {
        Real::Exact(q) => fraction(py, q),
        Real::Approx(x) => Ok(PyFloat::new(py, *x).into_any()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((v.to_string(),))
}

/// Polynomial with exact rational coefficients.
#[pyclass(name = "Polynomial", module = "symm", frozen, from_py_object)]
#[derive(Clone)]
struct PyPolynomial {
    inner: symm_core::Polynomial,
}

#[pymethods]
impl PyPolynomial {
    /// Parses text such as `"x1*x2 + 2*x1 - 1/3"` in `nvars` variables.
    #[new]
    fn new(nvars: usize, text: &str) -> PyResult<Self> {
        Ok(PyPolynomial { inner: symm_core::Polynomial::parse(nvars, text).map_err(value_error)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPolynomial { inner: serde_json::from_str(text).map_err(value_error)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("polynomials serialize")
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    #[getter]
    fn degree(&self) -> Option<u32> {
        self.inner.degree()
    }

    /// Exact value at a rational point.
    fn evaluate<'py>(&self, py: Python<'py>, point: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let p = to_rationals(&point)?;
        fraction(py, &self.inner.evaluate(&p).map_err(value_error)?)
    }

    /// Homogeneous components keyed by degree.
    fn graded_parts(&self) -> Vec<(u32, PyPolynomial)> {
        self.inner.graded_parts().iter().map(|(k, p)| (k, PyPolynomial { inner: p.clone() })).collect()
    }

    fn __add__(&self, other: &PyPolynomial) -> PyResult<PyPolynomial> {
        Ok(PyPolynomial { inner: self.inner.checked_add(&other.inner).map_err(value_error)? })
    }

    fn __sub__(&self, other: &PyPolynomial) -> PyResult<PyPolynomial> {
        Ok(PyPolynomial { inner: self.inner.checked_sub(&other.inner).map_err(value_error)? })
    }

    fn __mul__(&self, other: &PyPolynomial) -> PyResult<PyPolynomial> {
        Ok(PyPolynomial { inner: self.inner.checked_mul(&other.inner).map_err(value_error)? })
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> PyPolynomial {
        PyPolynomial { inner: self.inner.pow(e) }
    }

    fn __eq__(&self, other: &PyPolynomial) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({}, {:?})", self.inner.nvars(), self.inner.to_string())
    }
}

/// Weighted ℓ1 or ℓp norm on the degree-one part.
#[pyclass(name = "Seminorm", module = "symm", frozen, from_py_object)]
#[derive(Clone)]
struct PySeminorm {
    inner: Seminorm,
}

#[pymethods]
impl PySeminorm {
    #[staticmethod]
    fn weighted_l1(weights: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(PySeminorm { inner: Seminorm::weighted_l1(to_rationals(&weights)?).map_err(value_error)? })
    }

    #[staticmethod]
    fn lp(p: f64) -> PyResult<Self> {
        Ok(PySeminorm { inner: Seminorm::lp(p).map_err(value_error)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySeminorm { inner: serde_json::from_str(text).map_err(value_error)? })
    }

    /// `i·ρ`.
    fn scaled(&self, factor: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PySeminorm { inner: self.inner.scaled(&to_rational(factor)?).map_err(value_error)? })
    }

    fn __call__<'py>(&self, py: Python<'py>, point: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        real(py, &self.inner.eval_coords(&to_rationals(&point)?).map_err(value_error)?)
    }

    fn dual_norm<'py>(&self, py: Python<'py>, point: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        real(py, &self.inner.dual_norm_real(&to_rationals(&point)?).map_err(value_error)?)
    }

    fn __repr__(&self) -> String {
        format!("Seminorm({})", serde_json::to_string(&self.inner).expect("seminorms serialize"))
    }
}

/// Closed-form `ρ̄(f)` (weighted ℓ1 and ℓ1), else `None`.
#[pyfunction]
fn ext_value<'py>(py: Python<'py>, rho: &PySeminorm, f: &PyPolynomial) -> PyResult<Option<Bound<'py, PyAny>>> {
    extension::ext_exact(&rho.inner, &f.inner).map_err(value_error)?.map(|q| fraction(py, &q)).transpose()
}

/// `(lower, upper)` with `lower ≤ ρ̄(f) ≤ upper`.
#[pyfunction]
#[pyo3(signature = (rho, f, budget = 256, seed = 0))]
fn ext_interval<'py>(
    py: Python<'py>,
    rho: &PySeminorm,
    f: &PyPolynomial,
    budget: usize,
    seed: u64,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let iv = extension::ext_interval(&rho.inner, &f.inner, budget, seed).map_err(value_error)?;
    Ok((real(py, &iv.lower)?, fraction(py, &iv.upper)?))
}

/// Is `v*` in the closed ball `{ρ′ ≤ radius}`?
#[pyfunction]
#[pyo3(signature = (rho, point, radius = None))]
fn spectrum_contains(rho: &PySeminorm, point: Vec<Bound<'_, PyAny>>, radius: Option<Bound<'_, PyAny>>) -> PyResult<bool> {
    let r = radius.as_ref().map(to_rational).transpose()?.unwrap_or_else(|| rational::int(1));
    let ball = SpectrumBall::new(rho.inner.clone(), r).map_err(value_error)?;
    let v = to_rationals(&point)?;
    match rho.inner.dual_ball_contains_exact(&v, ball.radius()).map_err(value_error)? {
        Some(b) => Ok(b),
        None => ball.contains(&v.iter().map(rational::to_f64).collect::<Vec<_>>()).map_err(value_error),
    }
}

#[pyfunction]
#[pyo3(signature = (rho, nvars, count, seed = 0, radius = None))]
fn sample_ball(
    rho: &PySeminorm,
    nvars: usize,
    count: usize,
    seed: u64,
    radius: Option<Bound<'_, PyAny>>,
) -> PyResult<Vec<Vec<f64>>> {
    let r = radius.as_ref().map(to_rational).transpose()?.unwrap_or_else(|| rational::int(1));
    let ball = SpectrumBall::new(rho.inner.clone(), r).map_err(value_error)?;
    spectrum::sample_ball(&ball, nvars, count, seed).map_err(value_error)
}

/// Certificate for `target (+ ε) ∈ M` as a dict, or `{"found": False, "witness": …}`.
#[pyfunction]
#[pyo3(signature = (generators, d, target, degree, epsilon = None))]
fn certificate_search<'py>(
    py: Python<'py>,
    generators: Vec<PyPolynomial>,
    d: u32,
    target: &PyPolynomial,
    degree: u32,
    epsilon: Option<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let module = PowerModule::new(target.inner.nvars(), d, generators.into_iter().map(|g| g.inner).collect())
        .map_err(value_error)?;
    let outcome = match epsilon {
        Some(e) => modules2d::jacobi_epsilon_check(&module, &target.inner, &to_rational(&e)?, degree),
        None => modules2d::certificate_search(&module, &target.inner, degree),
    }
    .map_err(value_error)?;
    let value = match &outcome {
        SearchOutcome::Found(c) => serde_json::to_value(CertificateJson::from(c)).expect("serializes"),
        SearchOutcome::NotFound { negativity_witness } => serde_json::json!({
            "found": false,
            "witness": negativity_witness.as_ref().map(|w| w.iter().map(rational::format_rational).collect::<Vec<_>>()),
        }),
    };
    json_to_py(py, &value)
}

/// Truncated moment functional `L(x^k)` for `|k| ≤ max_degree`.
#[pyclass(name = "MomentTable", module = "symm", frozen)]
struct PyMomentTable {
    inner: MomentTable,
}

#[pymethods]
impl PyMomentTable {
    /// Exact moments of `Σ w_j δ_{α_j}` given as `[(point, weight), …]`.
    #[staticmethod]
    fn from_measure(atoms: Vec<(Vec<Bound<'_, PyAny>>, Bound<'_, PyAny>)>, max_degree: u32) -> PyResult<Self> {
        let nvars = atoms.first().map(|a| a.0.len()).ok_or_else(|| value_error("measure has no atoms"))?;
        let pairs = atoms
            .iter()
            .map(|(p, w)| Ok((to_rationals(p)?, to_rational(w)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let mu = AtomicMeasure::from_pairs(nvars, pairs).map_err(value_error)?;
        Ok(PyMomentTable { inner: moments::table_from_measure(&mu, max_degree) })
    }

    /// Univariate table from `[L(1), L(x), L(x²), …]`.
    #[staticmethod]
    fn univariate(values: Vec<f64>) -> PyResult<Self> {
        Ok(PyMomentTable { inner: MomentTable::univariate(&values).map_err(value_error)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: TableJson = serde_json::from_str(text).map_err(value_error)?;
        Ok(PyMomentTable { inner: MomentTable::try_from(j).map_err(value_error)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&TableJson::from(&self.inner)).expect("tables serialize")
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    #[getter]
    fn max_degree(&self) -> u32 {
        self.inner.max_degree()
    }

    /// `L(f)`, exact when the table is.
    fn apply<'py>(&self, py: Python<'py>, f: &PyPolynomial) -> PyResult<Bound<'py, PyAny>> {
        match self.inner.apply_exact(&f.inner).map_err(value_error)? {
            Some(q) => fraction(py, &q),
            None => Ok(PyFloat::new(py, self.inner.apply(&f.inner).map_err(value_error)?).into_any()),
        }
    }

    /// `L(p^{2d}) ≥ 0` on the visible part of `ΣA^{2d}`.
    #[pyo3(signature = (d = 1))]
    fn is_positive(&self, d: u32) -> PyResult<bool> {
        Ok(moments::positivity_check(&self.inner, d).map_err(value_error)?.pass)
    }

    /// Number of Hurwitz–Reznick violations at `k`.
    fn hurwitz_reznick_violations(&self, k: u32) -> PyResult<usize> {
        Ok(moments::hurwitz_reznick_check(&self.inner, k).map_err(value_error)?.violations)
    }

    fn mk(&self, k: u32) -> PyResult<Vec<f64>> {
        Ok(moments::mk_sequence(&self.inner, k).map_err(value_error)?.values)
    }

    /// `"quasi_analytic"`, `"not_quasi_analytic"` or `"inconclusive"`.
    fn quasi_analytic(&self, k: u32) -> PyResult<&'static str> {
        let mk = moments::mk_sequence(&self.inner, k).map_err(value_error)?;
        Ok(moments::quasi_analytic_classify(&mk).verdict.as_str())
    }

    /// Atoms `[(x, w), …]` of a univariate measure with these moments.
    #[pyo3(signature = (budget = 8))]
    fn reconstruct<'py>(&self, py: Python<'py>, budget: usize) -> PyResult<Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>> {
        let mu = moments::reconstruct_univariate(&self.inner, budget).map_err(value_error)?;
        mu.atoms().iter().map(|a| Ok((fraction(py, &a.point[0])?, fraction(py, &a.weight)?))).collect()
    }

    fn support_radius_estimate(&self, weights: Vec<Bound<'_, PyAny>>) -> PyResult<f64> {
        Ok(moments::support_radius_estimate(&self.inner, &to_rationals(&weights)?).map_err(value_error)?.estimate)
    }
}

/// `‖v‖_s` on the diagonal scale; `coords` maps index to value.
#[pyfunction]
fn hs_norm<'py>(
    py: Python<'py>,
    s: &Bound<'py, PyAny>,
    coords: std::collections::BTreeMap<usize, Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let v = HilbertScalePoint::new(coords.iter().map(|(i, x)| Ok((*i, to_rational(x)?))).collect::<PyResult<Vec<_>>>()?);
    real(py, &hilbert_scale::hs_norm(&ScaleIndex::new(to_rational(s)?), &v))
}

/// Is `H_{s2} ↪ H_{s1}` Hilbert–Schmidt?
#[pyfunction]
fn quasi_nuclear(s2: &Bound<'_, PyAny>, s1: &Bound<'_, PyAny>) -> PyResult<bool> {
    Ok(hilbert_scale::quasi_nuclear_embedding(&ScaleIndex::new(to_rational(s2)?), &ScaleIndex::new(to_rational(s1)?)))
}

/// Runs the `symm` command line in-process: `(exit_code, stdout)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    let out = symm_core::cli::run(std::iter::once("symm".to_string()).chain(args));
    (out.code, out.stdout)
}

/// Names of the batch checks run by `symm suite run`.
#[pyfunction]
fn suite_checks<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
    PyList::new(py, symm_core::cli::suite::CHECK_NAMES)
}

#[pymodule]
fn symm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PySeminorm>()?;
    m.add_class::<PyMomentTable>()?;
    m.add_function(wrap_pyfunction!(ext_value, m)?)?;
    m.add_function(wrap_pyfunction!(ext_interval, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_contains, m)?)?;
    m.add_function(wrap_pyfunction!(sample_ball, m)?)?;
    m.add_function(wrap_pyfunction!(certificate_search, m)?)?;
    m.add_function(wrap_pyfunction!(hs_norm, m)?)?;
    m.add_function(wrap_pyfunction!(quasi_nuclear, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add_function(wrap_pyfunction!(suite_checks, m)?)?;
    Ok(())
}
