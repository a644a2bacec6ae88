//! Python bindings: graphs, enumeration, homology and catalogs.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use rgh::canonical::{automorphisms, canonical_form};
use rgh::catalog::{catalog_string, to_dot};
use rgh::complex::{is_orientable, splittings, Coefficients, ComplexError};
use rgh::enumerate::{enumerate as enumerate_classes, CellBasis, EnumerationError, Limits, TailOrder};
use rgh::graph::GraphJson;
use rgh::homology::{auto_mode, boundary_matrices, d_squared_defect, homology as compute_homology};
use rgh::Signature;

create_exception!(pyrgh, BudgetExceeded, PyException);
create_exception!(pyrgh, InvariantViolation, PyException);

fn enumeration_err(e: EnumerationError) -> PyErr {
    match e {
        EnumerationError::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        EnumerationError::Signature(_) => PyValueError::new_err(e.to_string()),
    }
}

fn complex_err(e: ComplexError) -> PyErr {
    match e {
        ComplexError::IntegerModeWithoutTails => PyValueError::new_err(e.to_string()),
        _ => InvariantViolation::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// A validated ribbon graph.
#[pyclass(name = "RibbonGraph", module = "pyrgh", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRibbonGraph {
    inner: rgh::RibbonGraph,
}

#[pymethods]
impl PyRibbonGraph {
    /// Builds a graph from sigma cycles, alpha pairs, tail half-edges and
    /// marked vertex indices. Raises ValueError listing the violations.
    #[new]
    #[pyo3(signature = (sigma, alpha, tails=Vec::new(), marks=Vec::new()))]
    fn new(sigma: Vec<Vec<u32>>, alpha: Vec<Vec<u32>>, tails: Vec<u32>, marks: Vec<u32>) -> PyResult<Self> {
        let raw = GraphJson { sigma, alpha, tails, marks };
        rgh::RibbonGraph::from_json(&raw)
            .map(|inner| PyRibbonGraph { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        rgh::RibbonGraph::from_json(&raw)
            .map(|inner| PyRibbonGraph { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        self.inner.to_string()
    }

    #[getter]
    fn signature(&self) -> (u32, u32, u32, u32) {
        let s = self.inner.signature();
        (s.g, s.h, s.r, s.s)
    }

    #[getter]
    fn half_edges(&self) -> u32 {
        self.inner.half_edges()
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.inner.cell_dimension()
    }

    #[getter]
    fn internal_edges(&self) -> u32 {
        self.inner.internal_edges()
    }

    fn vertices(&self) -> Vec<Vec<u32>> {
        self.inner.vertices().to_vec()
    }

    fn boundary_cycles(&self) -> Vec<Vec<u32>> {
        self.inner.boundary_cycles()
    }

    /// `(code, aut_order)`.
    fn canonical_code(&self) -> (Vec<u32>, u64) {
        let c = rgh::canonical_code(&self.inner);
        (c.code, c.aut_order)
    }

    /// The graph relabeled into its canonical form.
    fn canonical(&self) -> Self {
        let form = canonical_form(&self.inner);
        PyRibbonGraph { inner: self.inner.relabel(&form.relabel) }
    }

    fn automorphisms(&self) -> Vec<Vec<u32>> {
        automorphisms(&self.inner)
    }

    fn is_orientable(&self) -> bool {
        is_orientable(&self.inner)
    }

    fn is_isomorphic(&self, other: &PyRibbonGraph) -> bool {
        rgh::is_isomorphic(&self.inner, &other.inner)
    }

    /// Graphs obtained by splitting one vertex, one per admissible arc.
    fn splittings(&self) -> Vec<PyRibbonGraph> {
        splittings(&self.inner).into_iter().map(|s| PyRibbonGraph { inner: s.graph }).collect()
    }

    fn to_dot(&self) -> String {
        to_dot(&self.inner)
    }

    fn __eq__(&self, other: &PyRibbonGraph) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("RibbonGraph({})", self.inner)
    }
}

/// Violation codes of a JSON graph; empty when valid.
#[pyfunction]
fn validate(text: &str) -> PyResult<Vec<String>> {
    let raw: GraphJson = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(match rgh::RibbonGraph::from_json(&raw) {
        Ok(_) => Vec::new(),
        Err(e) => e.violations.iter().map(|v| v.kind.code().to_string()).collect(),
    })
}

fn basis(
    g: u32,
    h: u32,
    r: u32,
    s: u32,
    all_orders: bool,
    max_cells: Option<usize>,
    max_seconds: Option<f64>,
) -> PyResult<CellBasis> {
    let sig = Signature::new(g, h, r, s).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let order = if all_orders { TailOrder::Free } else { TailOrder::Boundary };
    enumerate_classes(sig, order, &Limits { max_cells, max_seconds }).map_err(enumeration_err)
}

/// Classes of a signature as dicts with code, graph, dim, aut and orientable.
#[pyfunction]
#[pyo3(signature = (g, h, r, s, all_orders=false, max_cells=None, max_seconds=None))]
#[allow(clippy::too_many_arguments)]
fn enumerate<'py>(
    py: Python<'py>,
    g: u32,
    h: u32,
    r: u32,
    s: u32,
    all_orders: bool,
    max_cells: Option<usize>,
    max_seconds: Option<f64>,
) -> PyResult<Vec<Bound<'py, pyo3::types::PyDict>>> {
    let b = py.detach(|| basis(g, h, r, s, all_orders, max_cells, max_seconds))?;
    b.iter()
        .map(|c| {
            let d = pyo3::types::PyDict::new(py);
            d.set_item("code", c.code.code.clone())?;
            d.set_item("graph", PyRibbonGraph { inner: c.graph.clone() })?;
            d.set_item("dim", c.dim)?;
            d.set_item("aut", c.aut_order())?;
            d.set_item("orientable", c.orientable)?;
            Ok(d)
        })
        .collect()
}

/// Homology report as a dict. `mode` is "integer", "rational" or "auto".
#[pyfunction]
#[pyo3(signature = (g, h, r, s, mode="auto", all_orders=false, verify_d2=false, max_cells=None, max_seconds=None))]
#[allow(clippy::too_many_arguments)]
fn homology<'py>(
    py: Python<'py>,
    g: u32,
    h: u32,
    r: u32,
    s: u32,
    mode: &str,
    all_orders: bool,
    verify_d2: bool,
    max_cells: Option<usize>,
    max_seconds: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let sig = Signature::new(g, h, r, s).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let coefficients = match mode {
        "integer" => Coefficients::Integer,
        "rational" => Coefficients::Rational,
        "auto" => auto_mode(sig),
        other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    let report = py.detach(|| -> PyResult<serde_json::Value> {
        if coefficients == Coefficients::Integer && sig.r == 0 {
            return Err(complex_err(ComplexError::IntegerModeWithoutTails));
        }
        let b = basis(g, h, r, s, all_orders, max_cells, max_seconds)?;
        let ms = boundary_matrices(&b, coefficients).map_err(complex_err)?;
        if verify_d2 {
            if let Some((d, row, col, v)) = d_squared_defect(&ms) {
                return Err(InvariantViolation::new_err(format!("d{d}∘d{} has entry {v} at ({row}, {col})", d + 1)));
            }
        }
        Ok(compute_homology(&b, &ms, coefficients).map_err(complex_err)?.to_json())
    })?;
    json_to_py(py, &report)
}

/// JSON-lines catalog text for a signature.
#[pyfunction]
#[pyo3(signature = (g, h, r, s, all_orders=false))]
fn catalog(py: Python<'_>, g: u32, h: u32, r: u32, s: u32, all_orders: bool) -> PyResult<String> {
    py.detach(|| basis(g, h, r, s, all_orders, None, None).map(|b| catalog_string(&b)))
}

#[pymodule]
pub fn pyrgh(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRibbonGraph>()?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(homology, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("InvariantViolation", m.py().get_type::<InvariantViolation>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
