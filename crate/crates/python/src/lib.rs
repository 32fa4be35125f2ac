//! Python bindings.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use smoothness_lab::approx as ap;
use smoothness_lab::harness::{self, report::render_json, Config};
use smoothness_lab::jacobi::{self, JacobiSeries as CoreSeries};
use smoothness_lab::space::{self, Exponent, SpaceParams as CoreParams};
use smoothness_lab::translation::{self as tr, ModulusConfig};
use smoothness_lab::{Error, FunctionHandle, Polynomial};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::Config(_) | Error::DegenerateReference { .. } => {
            PyValueError::new_err(e.to_string())
        }
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn exponent(p: f64) -> Exponent {
    if p.is_infinite() {
        Exponent::Infinity
    } else {
        Exponent::Finite(p)
    }
}

/// Weighted L^p space parameters; pass p = float("inf") for the sup norm.
#[pyclass(name = "SpaceParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PySpaceParams {
    inner: CoreParams,
}

#[pymethods]
impl PySpaceParams {
    #[new]
    #[pyo3(signature = (p = 2.0, alpha = 1.0))]
    fn new(p: f64, alpha: f64) -> Self {
        Self { inner: CoreParams::new(exponent(p), alpha) }
    }

    #[getter]
    fn p(&self) -> f64 {
        self.inner.p.as_f64()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    /// (admissible, reason).
    fn validate(&self) -> PyResult<(bool, String)> {
        match space::validate_params(self.inner.p, self.inner.alpha).map_err(to_py)? {
            space::Admissibility::Valid => Ok((true, String::new())),
            space::Admissibility::Invalid(why) => Ok((false, why)),
        }
    }

    fn __repr__(&self) -> String {
        format!("SpaceParams(p={}, alpha={})", self.inner.p, self.inner.alpha)
    }
}

/// A real function on (-1, 1).
#[pyclass(name = "Function", frozen, from_py_object)]
#[derive(Clone)]
struct PyFunction {
    inner: FunctionHandle,
}

#[pymethods]
impl PyFunction {
    /// Wrap a Python callable float -> float. `singular_points` lists kinks.
    #[new]
    #[pyo3(signature = (callable, label = None, singular_points = None))]
    fn new(callable: Bound<'_, PyAny>, label: Option<String>, singular_points: Option<Vec<f64>>) -> PyResult<Self> {
        if !callable.is_callable() {
            return Err(PyValueError::new_err("expected a callable"));
        }
        let label = match label {
            Some(l) => l,
            None => callable.repr()?.to_string(),
        };
        let obj: Py<PyAny> = callable.unbind();
        let handle = FunctionHandle::new(label, move |x| {
            Python::attach(|py| obj.call1(py, (x,)).and_then(|v| v.extract::<f64>(py)).unwrap_or(f64::NAN))
        })
        .with_singular_points(singular_points.unwrap_or_default());
        Ok(Self { inner: handle })
    }

    #[staticmethod]
    fn constant(c: f64) -> Self {
        Self { inner: FunctionHandle::constant(c) }
    }

    /// Polynomial from monomial coefficients, lowest degree first.
    #[staticmethod]
    fn polynomial(coeffs: Vec<f64>) -> Self {
        Self { inner: Polynomial::new(coeffs).to_handle("polynomial") }
    }

    /// Sum of c_n P_n^{(2,2)}, each P_n normalized to 1 at x = 1.
    #[staticmethod]
    fn jacobi_series(coeffs: Vec<f64>) -> Self {
        Self { inner: CoreSeries::new(2.0, 2.0, coeffs).to_handle("series") }
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn singular_points(&self) -> Vec<f64> {
        self.inner.singular_points().to_vec()
    }

    fn __call__(&self, x: f64) -> PyResult<f64> {
        self.inner.try_eval(x).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Function({:?})", self.inner.label())
    }
}

/// Polynomial in a normalized Jacobi basis.
#[pyclass(name = "JacobiSeries", frozen, from_py_object)]
#[derive(Clone)]
struct PyJacobiSeries {
    inner: CoreSeries,
}

#[pymethods]
impl PyJacobiSeries {
    #[new]
    #[pyo3(signature = (coeffs, a = 2.0, b = 2.0))]
    fn new(coeffs: Vec<f64>, a: f64, b: f64) -> Self {
        Self { inner: CoreSeries::new(a, b, coeffs) }
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.inner.coeffs.clone()
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }

    fn degree(&self) -> Option<usize> {
        self.inner.degree()
    }

    fn apply_d(&self) -> Self {
        Self { inner: self.inner.apply_d() }
    }

    fn to_function(&self) -> PyFunction {
        PyFunction { inner: self.inner.to_handle("series") }
    }

    fn __call__(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn __repr__(&self) -> String {
        format!("JacobiSeries(a={}, b={}, degree={:?})", self.inner.a, self.inner.b, self.inner.degree())
    }
}

#[pyfunction]
fn jacobi_eval(n: usize, a: f64, b: f64, x: f64) -> PyResult<f64> {
    jacobi::jacobi_eval(n, a, b, x).map_err(to_py)
}

/// (nodes, weights) of the Gauss rule for (1-x)^a (1+x)^b.
#[pyfunction]
fn gauss_jacobi(n: usize, a: f64, b: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let rule = smoothness_lab::quadrature::gauss_jacobi(n, a, b).map_err(to_py)?;
    Ok((rule.nodes().to_vec(), rule.weights().to_vec()))
}

#[pyfunction]
#[pyo3(signature = (f, y, x, quad_n = tr::DEFAULT_QUAD_N))]
fn asym_translate(py: Python<'_>, f: &PyFunction, y: f64, x: f64, quad_n: usize) -> PyResult<f64> {
    let f = f.inner.clone();
    py.detach(|| tr::asym_translate(&f, y, x, quad_n)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (f, y, x, quad_n = tr::DEFAULT_QUAD_N))]
fn sym_translate(py: Python<'_>, f: &PyFunction, y: f64, x: f64, quad_n: usize) -> PyResult<f64> {
    let f = f.inner.clone();
    py.detach(|| tr::sym_translate(&f, y, x, quad_n)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, y, quad_n = tr::DEFAULT_QUAD_N))]
fn multiplier_psi(py: Python<'_>, n: usize, y: f64, quad_n: usize) -> PyResult<f64> {
    py.detach(|| tr::multiplier_psi(n, y, quad_n)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (f, params, n_nodes = space::DEFAULT_NORM_NODES))]
fn weighted_norm(py: Python<'_>, f: &PyFunction, params: PySpaceParams, n_nodes: usize) -> PyResult<f64> {
    let f = f.inner.clone();
    py.detach(|| space::weighted_norm(&f, params.inner, n_nodes)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (f, delta, params, quad_n = tr::DEFAULT_QUAD_N, norm_nodes = space::DEFAULT_NORM_NODES, t_points = tr::DEFAULT_T_POINTS))]
fn modulus(
    py: Python<'_>,
    f: &PyFunction,
    delta: f64,
    params: PySpaceParams,
    quad_n: usize,
    norm_nodes: usize,
    t_points: usize,
) -> PyResult<f64> {
    let f = f.inner.clone();
    let cfg = ModulusConfig { quad_n, norm_nodes, t_points };
    py.detach(|| tr::modulus(&f, delta, params.inner, &cfg)).map_err(to_py)
}

/// (K(f, delta), witness).
#[pyfunction]
#[pyo3(signature = (f, delta, params, max_deg = 32, norm_nodes = space::DEFAULT_NORM_NODES))]
fn k_functional(
    py: Python<'_>,
    f: &PyFunction,
    delta: f64,
    params: PySpaceParams,
    max_deg: usize,
    norm_nodes: usize,
) -> PyResult<(f64, PyJacobiSeries)> {
    let f = f.inner.clone();
    let r = py.detach(|| ap::k_functional(&f, delta, params.inner, max_deg, norm_nodes)).map_err(to_py)?;
    Ok((r.value, PyJacobiSeries { inner: r.witness }))
}

/// (E_n(f), argmin) over polynomials of degree <= n - 1.
#[pyfunction]
#[pyo3(signature = (f, n, params, grid_n = space::DEFAULT_NORM_NODES))]
fn best_approx(py: Python<'_>, f: &PyFunction, n: usize, params: PySpaceParams, grid_n: usize) -> PyResult<(f64, PyJacobiSeries)> {
    let f = f.inner.clone();
    let r = py.detach(|| ap::best_approx(&f, n, params.inner, grid_n)).map_err(to_py)?;
    Ok((r.value, PyJacobiSeries { inner: r.argmin }))
}

/// The test corpus as (label, function, class) triples.
#[pyfunction]
#[pyo3(signature = (seed = harness::config::DEFAULT_SEED))]
fn corpus(seed: u64) -> Vec<(String, PyFunction, String)> {
    harness::corpus(seed)
        .into_iter()
        .map(|e| {
            let class = format!("{:?}", e.class);
            (e.label, PyFunction { inner: e.function }, class)
        })
        .collect()
}

fn config_from(options: Option<&Bound<'_, PyDict>>) -> PyResult<Config> {
    let mut config = Config::default();
    if let Some(d) = options {
        for (k, v) in d.iter() {
            let key: String = k.extract()?;
            let value = match v.extract::<Vec<f64>>() {
                Ok(list) => list.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                Err(_) => v.str()?.to_string(),
            };
            config.set(&key, &value).map_err(to_py)?;
        }
    }
    config.validate().map_err(to_py)?;
    Ok(config)
}

fn report_object<'py>(py: Python<'py>, text: String) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// Lemma suite; keyword options are config keys (p, alpha, quad_n, ...).
/// Returns the JSON report as a dict.
#[pyfunction]
#[pyo3(signature = (**options))]
fn verify<'py>(py: Python<'py>, options: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyAny>> {
    let config = config_from(options)?;
    let text = py.detach(|| render_json(&harness::run_lemma_suite(&config), &config)).map_err(to_py)?;
    report_object(py, text)
}

/// Theorem ratio sweep, same conventions as `verify`.
#[pyfunction]
#[pyo3(signature = (**options))]
fn sweep<'py>(py: Python<'py>, options: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyAny>> {
    let config = config_from(options)?;
    let text = py.detach(|| render_json(&harness::run_theorem_sweep(&config), &config)).map_err(to_py)?;
    report_object(py, text)
}

#[pymodule]
#[pyo3(name = "smoothness_lab")]
fn smoothness_lab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpaceParams>()?;
    m.add_class::<PyFunction>()?;
    m.add_class::<PyJacobiSeries>()?;
    m.add_function(wrap_pyfunction!(jacobi_eval, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_jacobi, m)?)?;
    m.add_function(wrap_pyfunction!(asym_translate, m)?)?;
    m.add_function(wrap_pyfunction!(sym_translate, m)?)?;
    m.add_function(wrap_pyfunction!(multiplier_psi, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_norm, m)?)?;
    m.add_function(wrap_pyfunction!(modulus, m)?)?;
    m.add_function(wrap_pyfunction!(k_functional, m)?)?;
    m.add_function(wrap_pyfunction!(best_approx, m)?)?;
    m.add_function(wrap_pyfunction!(corpus, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
