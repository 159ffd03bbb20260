//! Python bindings: `ExpSum`, the symbolic mean value, the zero finder and
//! the verification helpers.

use expsum::cli::problem::{FreqSpec, Mode, ProblemFile, Scalar, TermSpec};
use expsum::laurent;
use expsum::verifier;
use expsum::zerofinder;
use expsum::{Coefficient, ExactSum, ExponentialSum, FloatSum, LaurentPolynomial, QuadratureConfig};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn to_py(e: expsum::Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyArithmeticError::new_err(e.to_string())
    }
}

fn scalar(obj: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    if let Ok(k) = obj.extract::<i64>() {
        Ok(Scalar::Int(k))
    } else if let Ok(x) = obj.extract::<f64>() {
        Ok(Scalar::Float(x))
    } else if let Ok(s) = obj.extract::<String>() {
        Ok(Scalar::Text(s))
    } else {
        Err(PyValueError::new_err("expected an int, float or rational string"))
    }
}

fn coeff_pair(obj: &Bound<'_, PyAny>) -> PyResult<[Scalar; 2]> {
    if let Ok((re, im)) = obj.extract::<(Bound<'_, PyAny>, Bound<'_, PyAny>)>() {
        return Ok([scalar(&re)?, scalar(&im)?]);
    }
    if obj.extract::<i64>().is_err() && obj.extract::<String>().is_err() {
        if let Ok(z) = obj.extract::<Complex64>() {
            return Ok([Scalar::Float(z.re), Scalar::Float(z.im)]);
        }
    }
    Ok([scalar(obj)?, Scalar::Int(0)])
}

fn freq_spec(obj: &Bound<'_, PyAny>) -> PyResult<FreqSpec> {
    if obj.is_instance_of::<PyList>() || obj.is_instance_of::<pyo3::types::PyTuple>() {
        let items: Vec<Bound<'_, PyAny>> = obj.extract()?;
        Ok(FreqSpec::Vector(items.iter().map(scalar).collect::<PyResult<_>>()?))
    } else {
        Ok(FreqSpec::Single(scalar(obj)?))
    }
}

#[derive(Clone)]
enum Inner {
    Float(FloatSum),
    Exact(ExactSum),
}

/// An exponential sum `Σ c·exp(2π·α·z)` with frequencies over a real basis.
///
/// `terms` is a list of `(coeff, freq)` pairs. A coefficient is a number, a
/// complex, or an `(re, im)` pair; a frequency is a rational (number or
/// string such as `"1/2"`) or one rational per basis element. With
/// `exact=True` coefficients are kept as Gaussian rationals.
#[pyclass(name = "ExpSum", module = "expsum", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyExpSum {
    inner: Inner,
}

#[pymethods]
impl PyExpSum {
    #[new]
    #[pyo3(signature = (terms, basis = None, exact = false))]
    fn new(terms: &Bound<'_, PyAny>, basis: Option<Vec<String>>, exact: bool) -> PyResult<Self> {
        let pairs: Vec<(Bound<'_, PyAny>, Bound<'_, PyAny>)> = terms.extract()?;
        let f = pairs
            .iter()
            .map(|(c, a)| Ok(TermSpec { coeff: coeff_pair(c)?, freq: freq_spec(a)? }))
            .collect::<PyResult<Vec<_>>>()?;
        let problem = ProblemFile {
            basis: basis.unwrap_or_else(|| vec!["1".into()]),
            mode: if exact { Mode::Exact } else { Mode::Float },
            f,
            g: None,
        };
        let inner = if exact {
            Inner::Exact(problem.sums::<expsum::ExactCoeff>().map_err(to_py)?.0)
        } else {
            Inner::Float(problem.sums::<Complex64>().map_err(to_py)?.0)
        };
        Ok(PyExpSum { inner })
    }

    /// Parse the `f` (and optional `g`) of a problem file given as JSON text.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<(PyExpSum, PyExpSum)> {
        let problem = ProblemFile::from_json(text).map_err(to_py)?;
        Ok(match problem.mode {
            Mode::Exact => {
                let (f, g) = problem.sums::<expsum::ExactCoeff>().map_err(to_py)?;
                (PyExpSum { inner: Inner::Exact(f) }, PyExpSum { inner: Inner::Exact(g) })
            }
            Mode::Float => {
                let (f, g) = problem.sums::<Complex64>().map_err(to_py)?;
                (PyExpSum { inner: Inner::Float(f) }, PyExpSum { inner: Inner::Float(g) })
            }
        })
    }

    #[getter]
    fn exact(&self) -> bool {
        matches!(self.inner, Inner::Exact(_))
    }

    fn __len__(&self) -> usize {
        match &self.inner {
            Inner::Float(f) => f.len(),
            Inner::Exact(f) => f.len(),
        }
    }

    fn __call__(&self, z: Complex64) -> Complex64 {
        self.evaluate(z)
    }

    fn evaluate(&self, z: Complex64) -> Complex64 {
        self.float().evaluate(z)
    }

    fn derivative(&self) -> PyExpSum {
        let inner = match &self.inner {
            Inner::Float(f) => Inner::Float(f.derivative()),
            Inner::Exact(f) => Inner::Exact(f.derivative()),
        };
        PyExpSum { inner }
    }

    /// Frequencies in increasing order, each as a list of rational strings.
    fn frequencies(&self) -> Vec<Vec<String>> {
        match &self.inner {
            Inner::Float(f) => f.terms().iter().map(|t| t.freq.to_strings()).collect(),
            Inner::Exact(f) => f.terms().iter().map(|t| t.freq.to_strings()).collect(),
        }
    }

    fn coefficients(&self) -> Vec<Complex64> {
        self.float().terms().iter().map(|t| t.coeff).collect()
    }

    /// `αₙ − α₁` as a float.
    fn span(&self) -> f64 {
        self.float().numeric().span()
    }

    fn __repr__(&self) -> String {
        let terms: Vec<String> = match &self.inner {
            Inner::Float(f) => f.terms().iter().map(|t| format!("({}, {})", t.coeff, t.freq)).collect(),
            Inner::Exact(f) => f.terms().iter().map(|t| format!("({}, {})", t.coeff, t.freq)).collect(),
        };
        format!("ExpSum([{}], exact={})", terms.join(", "), if self.exact() { "True" } else { "False" })
    }
}

impl PyExpSum {
    fn float(&self) -> FloatSum {
        match &self.inner {
            Inner::Float(f) => f.clone(),
            Inner::Exact(f) => f.to_float(),
        }
    }
}

/// `g`, defaulting to the constant one over the basis of `f`.
fn pair(f: &PyExpSum, g: Option<&PyExpSum>) -> Inner2 {
    match (&f.inner, g.map(|g| &g.inner)) {
        (Inner::Exact(f), Some(Inner::Exact(g))) => Inner2::Exact(f.clone(), g.clone()),
        (Inner::Exact(f), None) => {
            Inner2::Exact(f.clone(), ExponentialSum::constant(expsum::ExactCoeff::one(), f.basis().clone()))
        }
        _ => {
            let ff = f.float();
            let gg = match g {
                Some(g) => g.float(),
                None => ExponentialSum::constant(Complex64::new(1.0, 0.0), ff.basis().clone()),
            };
            Inner2::Float(ff, gg)
        }
    }
}

enum Inner2 {
    Float(FloatSum, FloatSum),
    Exact(ExactSum, ExactSum),
}

fn config(seed: u64, margin: f64) -> PyResult<QuadratureConfig> {
    let cfg = QuadratureConfig { strip_margin: margin, ..QuadratureConfig::with_seed(seed) };
    cfg.validate().map_err(to_py)?;
    Ok(cfg)
}

fn mean_dict<'py, C: Coefficient + std::fmt::Display>(
    py: Python<'py>,
    r: &expsum::MeanValueResult<C>,
    basis: &expsum::FrequencyBasis,
    exact: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("M", r.mean.to_complex(basis))?;
    d.set_item("A_first", r.a_first.to_complex(basis))?;
    d.set_item("A_last", r.a_last.to_complex(basis))?;
    if exact {
        let e = PyDict::new(py);
        e.set_item("M", r.mean.to_string())?;
        e.set_item("A_first", r.a_first.to_string())?;
        e.set_item("A_last", r.a_last.to_string())?;
        d.set_item("exact", e)?;
    }
    Ok(d)
}

/// Symbolic mean `(Aₙ − A₁)/2π` of `g` over the zeros of `f`, as a dict.
#[pyfunction]
#[pyo3(signature = (f, g = None))]
fn mean_value<'py>(py: Python<'py>, f: &PyExpSum, g: Option<&PyExpSum>) -> PyResult<Bound<'py, PyDict>> {
    match pair(f, g) {
        Inner2::Exact(f, g) => mean_dict(py, &expsum::mean_value(&f, &g).map_err(to_py)?, f.basis(), true),
        Inner2::Float(f, g) => mean_dict(py, &expsum::mean_value(&f, &g).map_err(to_py)?, f.basis(), false),
    }
}

/// Zero density `αₙ − α₁`.
#[pyfunction]
fn mean_zero_count(f: &PyExpSum) -> PyResult<f64> {
    match &f.inner {
        Inner::Exact(f) => expsum::mean_zero_count(f),
        Inner::Float(f) => expsum::mean_zero_count(f),
    }
    .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (f, margin = 0.5))]
fn strip_bound(f: &PyExpSum, margin: f64) -> PyResult<f64> {
    zerofinder::strip_bound(&f.float(), margin).map_err(to_py)
}

/// Zeros with their multiplicities, as `(z, m)` pairs sorted by `(Im, Re)`.
/// The contour reaches slightly beyond `|Im z| = R`.
#[pyfunction]
#[pyo3(name = "find_zeros", signature = (f, r, seed = 0, margin = 0.5))]
fn find_zeros(py: Python<'_>, f: &PyExpSum, r: f64, seed: u64, margin: f64) -> PyResult<Vec<(Complex64, u32)>> {
    let cfg = config(seed, margin)?;
    let f = f.float();
    let set = py.detach(|| expsum::find_zeros(&f, r, &cfg)).map_err(to_py)?;
    Ok(set.zeros.iter().map(|z| (z.location, z.multiplicity)).collect())
}

/// `S(R)/2R`: the sum of `g` over the zeros with `|Im z| < R`, over `2R`.
#[pyfunction]
#[pyo3(signature = (f, r, g = None, seed = 0, margin = 0.5))]
fn empirical_mean(
    py: Python<'_>,
    f: &PyExpSum,
    r: f64,
    g: Option<&PyExpSum>,
    seed: u64,
    margin: f64,
) -> PyResult<(Complex64, i64)> {
    let cfg = config(seed, margin)?;
    let em = py
        .detach(|| match pair(f, g) {
            Inner2::Exact(f, g) => expsum::empirical_mean(&f, &g, r, &cfg),
            Inner2::Float(f, g) => expsum::empirical_mean(&f, &g, r, &cfg),
        })
        .map_err(to_py)?;
    Ok((em.mean, em.count))
}

/// Symbolic versus empirical means over increasing heights.
#[pyfunction]
#[pyo3(signature = (f, r_list, g = None, tol = 0.05, seed = 0, margin = 0.5))]
fn convergence_report<'py>(
    py: Python<'py>,
    f: &PyExpSum,
    r_list: Vec<f64>,
    g: Option<&PyExpSum>,
    tol: f64,
    seed: u64,
    margin: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config(seed, margin)?;
    let report = py
        .detach(|| match pair(f, g) {
            Inner2::Exact(f, g) => expsum::convergence_report(&f, &g, &r_list, &cfg, tol),
            Inner2::Float(f, g) => expsum::convergence_report(&f, &g, &r_list, &cfg, tol),
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("symbolic_mean", report.symbolic_mean)?;
    let rows = PyList::empty(py);
    for row in &report.rows {
        let r = PyDict::new(py);
        r.set_item("R", row.r)?;
        r.set_item("count", row.count)?;
        r.set_item("empirical_mean", row.empirical_mean)?;
        r.set_item("abs_error", row.abs_error)?;
        r.set_item("fewnomial_ok", verifier::fewnomial_check(&row.zeros, f.__len__(), f.span()))?;
        rows.append(r)?;
    }
    d.set_item("rows", rows)?;
    d.set_item("median_ratio", report.median_ratio)?;
    d.set_item("pass", report.pass)?;
    Ok(d)
}

/// Mean via `w = e^{2πz/q}` and polynomial roots; rational frequencies only.
#[pyfunction]
#[pyo3(signature = (f, g = None))]
fn mean_via_substitution(f: &PyExpSum, g: Option<&PyExpSum>) -> PyResult<Complex64> {
    match pair(f, g) {
        Inner2::Exact(f, g) => laurent::mean_via_substitution(&f, &g),
        Inner2::Float(f, g) => laurent::mean_via_substitution(&f, &g),
    }
    .map_err(to_py)
}

fn laurent_poly(coeffs: Vec<(i64, Complex64)>) -> LaurentPolynomial {
    LaurentPolynomial::new(coeffs)
}

/// `Σ m·g(w)` over the nonzero roots of `f`; polynomials as `(exponent, coeff)` lists.
#[pyfunction]
fn sum_over_roots(f: Vec<(i64, Complex64)>, g: Vec<(i64, Complex64)>) -> PyResult<Complex64> {
    laurent::sum_over_roots(&laurent_poly(f), &laurent_poly(g)).map_err(to_py)
}

/// The same sum from residues at zero and infinity, without root finding.
#[pyfunction]
fn residue_formula_sum(f: Vec<(i64, Complex64)>, g: Vec<(i64, Complex64)>) -> PyResult<Complex64> {
    laurent::residue_formula_sum(&laurent_poly(f), &laurent_poly(g)).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "expsum")]
fn expsum_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyExpSum>()?;
    m.add_function(wrap_pyfunction!(mean_value, m)?)?;
    m.add_function(wrap_pyfunction!(mean_zero_count, m)?)?;
    m.add_function(wrap_pyfunction!(strip_bound, m)?)?;
    m.add_function(wrap_pyfunction!(find_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_mean, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_report, m)?)?;
    m.add_function(wrap_pyfunction!(mean_via_substitution, m)?)?;
    m.add_function(wrap_pyfunction!(sum_over_roots, m)?)?;
    m.add_function(wrap_pyfunction!(residue_formula_sum, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
