//! Python module `unfold`.

use num_rational::Ratio;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};

use unfold_core::bform::{self, IntegralParams};
use unfold_core::certify::{enumerate_certificates, Filters};
use unfold_core::digraph;
use unfold_core::report::{self, StatsReport};
use unfold_core::{hodge, Error, GcdPolicy};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn policy(name: &str) -> PyResult<GcdPolicy> {
    match name {
        "keep" => Ok(GcdPolicy::Keep),
        "reduce" => Ok(GcdPolicy::Reduce),
        "strict" => Ok(GcdPolicy::Strict),
        other => Err(PyValueError::new_err(format!(
            "unknown gcd policy {other:?} (expected keep, reduce or strict)"
        ))),
    }
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// Angles `q_i pi / k` of a polygon, with `k` fixed by the angle sum.
#[pyclass(name = "AngleSystem", module = "unfold", frozen)]
struct PyAngleSystem {
    inner: unfold_core::AngleSystem,
}

#[pymethods]
impl PyAngleSystem {
    #[new]
    #[pyo3(signature = (q, gcd = "keep"))]
    fn new(q: Vec<i64>, gcd: &str) -> PyResult<Self> {
        let inner = unfold_core::AngleSystem::new(&q, policy(gcd)?).map_err(to_py)?;
        Ok(PyAngleSystem { inner })
    }

    #[getter]
    fn q(&self) -> Vec<u64> {
        self.inner.q().to_vec()
    }

    #[getter]
    fn k(&self) -> u64 {
        self.inner.k()
    }

    fn reduced(&self) -> Self {
        PyAngleSystem {
            inner: self.inner.reduced(),
        }
    }

    fn genus(&self) -> PyResult<u64> {
        hodge::genus(&self.inner).map_err(to_py)
    }

    /// `(zero_orders, marked_points)`.
    fn stratum(&self) -> PyResult<(Vec<u64>, u64)> {
        let s = hodge::stratum(&self.inner).map_err(to_py)?;
        Ok((s.zero_orders, s.marked_points as u64))
    }

    fn certify(&self) -> PyResult<Certificate> {
        Ok(Certificate {
            inner: unfold_core::make_certificate(&self.inner).map_err(to_py)?,
        })
    }

    fn epsilon_profile(&self, a: i64) -> PyResult<Vec<i64>> {
        Ok(bform::epsilon_profile(&self.inner, a).map_err(to_py)?.eps)
    }

    fn __repr__(&self) -> String {
        format!("AngleSystem{}", self.inner)
    }
}

/// Result of the full-rank test for one triangle.
#[pyclass(module = "unfold", frozen)]
struct Certificate {
    inner: unfold_core::Certificate,
}

#[pymethods]
impl Certificate {
    #[getter]
    fn q(&self) -> Vec<u64> {
        self.inner.sys.q().to_vec()
    }

    #[getter]
    fn k(&self) -> u64 {
        self.inner.sys.k()
    }

    #[getter]
    fn genus(&self) -> u64 {
        self.inner.genus
    }

    #[getter]
    fn stratum(&self) -> Vec<u64> {
        self.inner.stratum.zero_orders.clone()
    }

    #[getter]
    fn rank_lower_bound(&self) -> u64 {
        self.inner.rank_lower_bound
    }

    #[getter]
    fn full_rank(&self) -> bool {
        self.inner.full_rank_certified
    }

    #[getter]
    fn hyperelliptic_excluded(&self) -> bool {
        self.inner.hyperelliptic_excluded
    }

    #[getter]
    fn verdict(&self) -> String {
        self.inner.verdict.to_string()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("certificate serializes")
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.to_json())
    }

    /// Parses and re-verifies a serialized certificate.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Certificate { inner })
    }

    fn __repr__(&self) -> String {
        format!("Certificate({}, {})", self.inner.sys, self.inner.verdict)
    }
}

#[pyfunction]
#[pyo3(signature = (q1, q2, q3, reduce = false))]
fn certify(q1: i64, q2: i64, q3: i64, reduce: bool) -> PyResult<Certificate> {
    let policy = if reduce {
        GcdPolicy::Reduce
    } else {
        GcdPolicy::Strict
    };
    let sys = unfold_core::AngleSystem::triangle(q1, q2, q3, policy).map_err(to_py)?;
    PyAngleSystem { inner: sys }.certify()
}

/// Certificates for every triple with `k <= k_max` passing the filters.
#[pyfunction]
#[pyo3(signature = (k_max, odd = false, distinct = false, gcd_one = false))]
fn enumerate(
    py: Python<'_>,
    k_max: u64,
    odd: bool,
    distinct: bool,
    gcd_one: bool,
) -> PyResult<Vec<Certificate>> {
    let filters = Filters {
        odd_k: odd,
        distinct_q: distinct,
        gcd_one,
    };
    let entries = py
        .detach(|| enumerate_certificates(k_max, filters))
        .map_err(to_py)?;
    Ok(entries
        .into_iter()
        .map(|e| Certificate {
            inner: e.certificate,
        })
        .collect())
}

/// Dense-orbit triangles grouped by `k`, one line per `k`.
#[pyfunction]
fn table(py: Python<'_>, k_max: u64) -> PyResult<String> {
    let entries = py
        .detach(|| report::dense_triangles(k_max))
        .map_err(to_py)?;
    Ok(report::render_table(&entries))
}

#[pyfunction]
fn stats<'py>(py: Python<'py>, k_max: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| StatsReport::compute(k_max)).map_err(to_py)?;
    let text = serde_json::to_string(&r).expect("report serializes");
    let d = json_to_py(py, &text)?;
    d.set_item("warnings", r.warnings())?;
    Ok(d)
}

fn graph(num_vertices: usize, edges: Vec<(usize, usize)>) -> PyResult<unfold_core::Digraph> {
    unfold_core::Digraph::new(num_vertices, edges).map_err(to_py)
}

/// Dimension of the span of embedded directed loops.
#[pyfunction]
fn loop_space_dim(num_vertices: usize, edges: Vec<(usize, usize)>) -> PyResult<usize> {
    digraph::loop_space_dim(&graph(num_vertices, edges)?).map_err(to_py)
}

#[pyfunction]
fn is_strongly_connected(num_vertices: usize, edges: Vec<(usize, usize)>) -> PyResult<bool> {
    Ok(digraph::is_strongly_connected(&graph(num_vertices, edges)?))
}

/// Embedded loops as lists of edge indices.
#[pyfunction]
fn embedded_loops(num_vertices: usize, edges: Vec<(usize, usize)>) -> PyResult<Vec<Vec<usize>>> {
    digraph::loop_edge_lists(&graph(num_vertices, edges)?, digraph::DEFAULT_LOOP_CAP).map_err(to_py)
}

fn ratio(s: &str) -> PyResult<Ratio<i64>> {
    s.trim()
        .parse()
        .map_err(|_| PyValueError::new_err(format!("expected a fraction like 1/3, got {s:?}")))
}

/// Evaluates the planar integral; `a1` and `a2` are fractions such as `"1/3"`.
#[pyfunction]
#[pyo3(signature = (a1, a2, eps1 = 0, eps2 = 0, tol = bform::DEFAULT_TOL))]
fn planar_integral<'py>(
    py: Python<'py>,
    a1: &str,
    a2: &str,
    eps1: u8,
    eps2: u8,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let params = IntegralParams::new(ratio(a1)?, ratio(a2)?, eps1, eps2).map_err(to_py)?;
    let r = py
        .detach(|| bform::planar_integral(&params, tol))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("value", PyComplex::from_doubles(py, r.value.re, r.value.im))?;
    d.set_item("error_estimate", r.error_estimate)?;
    d.set_item("regions", r.regions_evaluated)?;
    d.set_item("evaluations", r.evaluations)?;
    d.set_item("nonvanishing", r.is_nonvanishing())?;
    Ok(d)
}

#[pymodule]
fn unfold(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAngleSystem>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(stats, m)?)?;
    m.add_function(wrap_pyfunction!(loop_space_dim, m)?)?;
    m.add_function(wrap_pyfunction!(is_strongly_connected, m)?)?;
    m.add_function(wrap_pyfunction!(embedded_loops, m)?)?;
    m.add_function(wrap_pyfunction!(planar_integral, m)?)?;
    Ok(())
}
