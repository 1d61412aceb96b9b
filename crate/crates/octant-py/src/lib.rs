//! Python bindings: invariants, classification, spelling lengths and
//! constructed representatives.

use octant::cli::analyse;
use octant::free_group as fg;
use octant::homotopy::{self as hom, OctantTopology, WrappingNumbers};
use octant::maps::{self, ExtComplex};
use octant::numerics::QuadratureGrid;
use pyo3::exceptions::{PyNotImplementedError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;
use std::collections::BTreeMap;

fn err(e: octant::Error) -> PyErr {
    match e {
        octant::Error::Unsupported(_) | octant::Error::NotApplicable(_) => {
            PyNotImplementedError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Round-trips a serializable value through Python's json module.
fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_py<T: serde::de::DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A homotopy class (e, k, Ω) with Ω = omega_units · π/2.
#[pyclass(name = "Topology", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyTopology {
    inner: OctantTopology,
}

#[pymethods]
impl PyTopology {
    #[new]
    fn new(e: [i8; 3], k: [i64; 3], omega_units: i64) -> PyResult<Self> {
        Ok(PyTopology { inner: OctantTopology::new(e, k, omega_units).map_err(err)? })
    }

    /// Class with the given wrapping numbers, keyed by sector labels "+++" .. "---".
    #[staticmethod]
    fn from_wrapping(w: BTreeMap<String, i64>) -> PyResult<Self> {
        let w = WrappingNumbers::from_map(&w).map_err(err)?;
        Ok(PyTopology { inner: hom::invariants_from_wrapping(&w).map_err(err)? })
    }

    #[getter]
    fn e(&self) -> [i8; 3] {
        self.inner.e
    }

    #[getter]
    fn k(&self) -> [i64; 3] {
        self.inner.k
    }

    #[getter]
    fn omega_units(&self) -> i64 {
        self.inner.omega_units
    }

    fn wrapping(&self) -> PyResult<BTreeMap<String, i64>> {
        Ok(self.inner.wrapping().map_err(err)?.to_map())
    }

    /// Classification, Δ and the energy infimum in units of π.
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let w = self.inner.wrapping().map_err(err)?;
        let c = hom::classify(&w, &self.inner);
        let d = PyDict::new(py);
        d.set_item("kind", c.kind.to_string())?;
        d.set_item("chi", c.chi)?;
        d.set_item("sigma_plus", c.sigma_plus.map(|s| s.to_string()))?;
        d.set_item("sigma_minus", c.sigma_minus.map(|s| s.to_string()))?;
        d.set_item("delta", hom::delta_invariant(&w, &c).map_err(err)?)?;
        d.set_item("infimum_energy_units_pi", hom::infimum_energy(&w, &c).map_err(err)?)?;
        Ok(d)
    }

    /// Lower bound from boundary-word spelling lengths.
    #[pyo3(signature = (d0_max = 1, budget = 2))]
    fn spelling_bound<'py>(&self, py: Python<'py>, d0_max: u32, budget: u32) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &hom::spelling_lower_bound_check(&self.inner, d0_max, budget).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        let t = &self.inner;
        format!("Topology(e={:?}, k={:?}, omega_units={})", t.e, t.k, t.omega_units)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// A word in the free group on c1..cN (letters a, b, c also accepted).
#[pyclass(name = "Word", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyWord {
    inner: fg::Word,
}

#[pymethods]
impl PyWord {
    #[new]
    #[pyo3(signature = (text, alphabet_size = 0))]
    fn new(text: &str, alphabet_size: u32) -> PyResult<Self> {
        Ok(PyWord { inner: fg::Word::parse_with_alphabet(text, alphabet_size).map_err(err)? })
    }

    /// Word from signed generator indices, e.g. [1, 2, -1, -2].
    #[staticmethod]
    fn from_signed(alphabet_size: u32, letters: Vec<i32>) -> PyResult<Self> {
        Ok(PyWord { inner: fg::Word::from_signed(alphabet_size, &letters).map_err(err)? })
    }

    fn spelling_length(&self) -> u32 {
        fg::spelling_length(&self.inner)
    }

    /// Optimal non-crossing pairing as 1-based position pairs.
    fn pairing(&self) -> Vec<(usize, usize)> {
        fg::optimal_pairing(&self.inner).pairs
    }

    fn inverse(&self) -> Self {
        PyWord { inner: fg::inverse(&self.inner) }
    }

    fn reduced(&self) -> Self {
        PyWord { inner: fg::free_reduce(&self.inner) }
    }

    fn cyclically_reduced(&self) -> Self {
        PyWord { inner: fg::cyclic_reduce(&self.inner) }
    }

    fn degrees(&self) -> Vec<i64> {
        fg::degrees(&self.inner)
    }

    fn __mul__(&self, other: &PyWord) -> Self {
        PyWord { inner: self.inner.concat(&other.inner) }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word('{}')", self.inner)
    }
}

#[pyfunction]
fn spelling_length(text: &str) -> PyResult<u32> {
    Ok(fg::spelling_length(&fg::Word::parse(text).map_err(err)?))
}

fn variant(name: &str) -> PyResult<fg::Variant> {
    match name {
        "P" | "p" => Ok(fg::Variant::P),
        "Q" | "q" => Ok(fg::Variant::Q),
        _ => Err(PyValueError::new_err(format!("variant must be 'P' or 'Q', got {name:?}"))),
    }
}

#[pyfunction]
fn certified_lower_bound(variant_name: &str, i: u32, j: u32, k: u32, p: u32, n: u32) -> PyResult<i64> {
    Ok(fg::certified_lower_bound(i, j, k, p, n, variant(variant_name)?))
}

/// Bounded search for the minimum spelling length over a class product.
#[pyfunction]
#[pyo3(signature = (variant_name, i, j, k, p, n, budget = 3))]
fn product_search<'py>(
    py: Python<'py>,
    variant_name: &str,
    i: u32,
    j: u32,
    k: u32,
    p: u32,
    n: u32,
    budget: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let shape = fg::ProductShape { variant: variant(variant_name)?, i, j, k, p, n };
    let r = fg::min_spelling_over_product(&fg::ClassProductSpec::from_shape(shape, budget)).map_err(err)?;
    to_py(py, &r)
}

/// Patchwork spec for a nonconformal class.
#[pyfunction]
#[pyo3(signature = (topology, epsilon = 0.05))]
fn select_case<'py>(py: Python<'py>, topology: &PyTopology, epsilon: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &maps::select_case(&topology.inner, epsilon).map_err(err)?)
}

/// Coverage-identity and table checks of a patchwork spec given as a dict.
#[pyfunction]
fn verify_spec<'py>(py: Python<'py>, spec: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let spec: maps::PatchworkSpec = from_py(spec)?;
    to_py(py, &maps::verify_spec(&spec).map_err(err)?)
}

/// Builds a representative and measures it: energy, degrees, trapped area
/// and the invariant checks.
#[pyfunction]
#[pyo3(signature = (topology, epsilon = 0.05, grid_level = 3))]
fn construct<'py>(
    py: Python<'py>,
    topology: &PyTopology,
    epsilon: f64,
    grid_level: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let t = topology.inner;
    let report = py
        .detach(|| {
            let grid = QuadratureGrid::new(grid_level)?;
            let rep = maps::construct(&t, epsilon)?;
            analyse(&t, &rep, epsilon, &grid)
        })
        .map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
fn stereographic(point: [f64; 3]) -> Option<(f64, f64)> {
    match maps::stereographic(point) {
        ExtComplex::Finite(z) => Some((z.re, z.im)),
        ExtComplex::Infinity => None,
    }
}

#[pymodule]
fn octant_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTopology>()?;
    m.add_class::<PyWord>()?;
    m.add_function(wrap_pyfunction!(spelling_length, m)?)?;
    m.add_function(wrap_pyfunction!(certified_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(product_search, m)?)?;
    m.add_function(wrap_pyfunction!(select_case, m)?)?;
    m.add_function(wrap_pyfunction!(verify_spec, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(stereographic, m)?)?;
    Ok(())
}
