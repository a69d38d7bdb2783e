//! Python bindings. Matrices, vectors, Θ and cubes cross the boundary in
//! the same JSON formats the CLI reads; rationals are `"num/den"` strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use e7sym::algebra::{unit_table, Algebra};
use e7sym::conformal::{self, e7_basis};
use e7sym::cubie;
use e7sym::harness::{self, RunConfig, Suite};
use e7sym::io;
use e7sym::linalg::close_under_bracket;
use e7sym::rational::Rational;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn algebra(name: &str) -> PyResult<Algebra> {
    name.parse().map_err(err)
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// An element Θ = (φ, ρ, A, B) of e₇.
#[pyclass(name = "Theta", module = "e7sym", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTheta(conformal::E7Elem);

#[pymethods]
impl PyTheta {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_theta(text).map(PyTheta).map_err(err)
    }

    /// The `index`-th element of the e₇ basis.
    #[staticmethod]
    fn basis(alg: &str, index: usize) -> PyResult<Self> {
        let basis = e7_basis(algebra(alg)?).map_err(err)?;
        basis
            .elems
            .get(index)
            .cloned()
            .map(PyTheta)
            .ok_or_else(|| err(format!("basis index {index} out of range 0..{}", basis.len())))
    }

    #[getter]
    fn algebra(&self) -> &'static str {
        self.0.algebra().symbol()
    }

    #[getter]
    fn rho(&self) -> String {
        self.0.rho.to_fraction_string()
    }

    fn has_matrix_form(&self) -> bool {
        self.0.has_matrix_form()
    }

    fn act(&self, p: &PyFreudVec) -> PyResult<PyFreudVec> {
        conformal::freudenthal_action(&self.0, &p.0).map(PyFreudVec).map_err(err)
    }

    /// Commutator with `other` as coordinates in the e₇ basis, as a list of
    /// `(index, label, coeff)`; `None` if it leaves the span.
    fn bracket(&self, other: &PyTheta) -> PyResult<Option<Vec<(usize, String, String)>>> {
        let comm = conformal::bracket(&self.0, &other.0).map_err(err)?;
        let basis = e7_basis(self.0.algebra()).map_err(err)?;
        let coords = basis.matrixized().map_err(err)?.coordinates(&comm.mat).map_err(err)?;
        Ok(coords.map(|c| {
            c.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, basis.labels[i].clone(), x.to_fraction_string()))
                .collect()
        }))
    }

    fn __repr__(&self) -> String {
        format!("Theta(algebra={}, rho={})", self.algebra(), self.rho())
    }
}

/// A point P = (X, Y, p, q) of the 56-dimensional representation.
#[pyclass(name = "FreudVec", module = "e7sym", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyFreudVec(conformal::FreudVec);

#[pymethods]
impl PyFreudVec {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_freudvec(text).map(PyFreudVec).map_err(err)
    }

    #[staticmethod]
    fn random(alg: &str, seed: u64) -> PyResult<Self> {
        Ok(PyFreudVec(e7sym::random::Sampler::new(seed).freud_vec(algebra(alg)?)))
    }

    fn to_json(&self) -> String {
        io::freudvec_to_string(&self.0)
    }

    #[getter]
    fn algebra(&self) -> &'static str {
        self.0.algebra().symbol()
    }

    fn coords(&self) -> Vec<String> {
        self.0.coords().iter().map(Rational::to_fraction_string).collect()
    }

    /// The quartic invariant J(P).
    fn quartic(&self) -> String {
        conformal::quartic(&self.0).to_fraction_string()
    }

    /// P∗P as an element of e₇.
    fn super_freudenthal(&self) -> PyResult<PyTheta> {
        conformal::super_freudenthal(&self.0).map(PyTheta).map_err(err)
    }

    fn cube(&self) -> PyCube {
        PyCube(cubie::assemble_cube(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("FreudVec({})", self.to_json())
    }
}

/// A totally antisymmetric 6×6×6 array over the algebra.
#[pyclass(name = "Cube", module = "e7sym", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyCube(cubie::Cube);

#[pymethods]
impl PyCube {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_cube(text).map(PyCube).map_err(err)
    }

    fn to_json(&self) -> String {
        to_json(&io::cube_to_json(&self.0))
    }

    fn is_antisymmetric(&self) -> bool {
        self.0.is_antisymmetric()
    }

    /// Entry at 1-based indices, as coefficient strings.
    fn get(&self, a: usize, b: usize, c: usize) -> PyResult<Vec<String>> {
        if [a, b, c].iter().any(|&i| !(1..=6).contains(&i)) {
            return Err(err("indices must lie in 1..=6"));
        }
        Ok(self.0.get(a - 1, b - 1, c - 1).coeffs().iter().map(Rational::to_fraction_string).collect())
    }

    fn to_freudvec(&self) -> PyResult<PyFreudVec> {
        cubie::extract_freudvec(&self.0).map(PyFreudVec).map_err(err)
    }

    /// Applies Θ with `mode` either `"naive"` or `"sided"`.
    #[pyo3(signature = (theta, mode = "sided"))]
    fn act(&self, theta: &PyTheta, mode: &str) -> PyResult<PyCube> {
        let image = match mode {
            "naive" => cubie::naive_action(&theta.0, &self.0),
            "sided" => cubie::sided_action(&theta.0, &self.0),
            other => return Err(err(format!("unknown mode {other:?}"))),
        };
        image.map(PyCube).map_err(err)
    }

    fn quartic_tensor(&self) -> Vec<String> {
        cubie::quartic_tensor(&self.0).coeffs().iter().map(Rational::to_fraction_string).collect()
    }
}

/// Unit multiplication table as rows of `(sign, unit)`.
#[pyfunction]
fn mul_table(level: u8) -> PyResult<Vec<Vec<(i8, u8)>>> {
    let alg = Algebra::from_level(level).map_err(err)?;
    Ok(unit_table(alg)
        .chunks(alg.dim())
        .map(|row| row.iter().map(|u| (u.sign, u.index)).collect())
        .collect())
}

#[pyfunction]
fn det(matrix_json: &str) -> PyResult<String> {
    Ok(io::parse_herm(matrix_json).map_err(err)?.det().to_fraction_string())
}

#[pyfunction]
fn trace(matrix_json: &str) -> PyResult<String> {
    Ok(io::parse_herm(matrix_json).map_err(err)?.trace().to_fraction_string())
}

/// Dimension of the bracket closure of the e₇ basis.
#[pyfunction]
fn e7_dim(py: Python<'_>, alg: &str) -> PyResult<usize> {
    let alg = algebra(alg)?;
    py.detach(|| {
        let mb = e7_basis(alg).map_err(err)?.matrixized().map_err(err)?;
        Ok(close_under_bracket(&mb.mats).map_err(err)?.dim())
    })
}

/// Runs verification suites; returns the JSON-lines report.
#[pyfunction]
#[pyo3(signature = (algebras = None, suites = None, seed = harness::DEFAULT_SEED, samples = harness::DEFAULT_SAMPLES))]
fn verify(
    py: Python<'_>,
    algebras: Option<Vec<String>>,
    suites: Option<Vec<String>>,
    seed: u64,
    samples: usize,
) -> PyResult<String> {
    let mut config = RunConfig {
        seed,
        samples,
        ..RunConfig::default()
    };
    if let Some(a) = algebras {
        config.algebras = a.iter().map(|s| algebra(s)).collect::<PyResult<_>>()?;
    }
    if let Some(s) = suites {
        config.suites = s.iter().map(|x| x.parse::<Suite>().map_err(err)).collect::<PyResult<_>>()?;
    }
    Ok(py.detach(|| harness::report_string(&harness::verify_all(&config))))
}

/// Nonzero structure constants as `(i, j, k, c)`.
#[pyfunction]
fn structure_constants(py: Python<'_>, alg: &str) -> PyResult<Vec<(usize, usize, usize, String)>> {
    let alg = algebra(alg)?;
    let sc = py.detach(|| harness::export_structure_constants(alg)).map_err(err)?;
    Ok(sc
        .entries
        .into_iter()
        .map(|(i, j, k, c)| (i, j, k, c.to_fraction_string()))
        .collect())
}

#[pymodule]
#[pyo3(name = "e7sym")]
fn e7sym_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds the classes and functions to `m`; lets embedders build the module
/// without importing the shared library.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTheta>()?;
    m.add_class::<PyFreudVec>()?;
    m.add_class::<PyCube>()?;
    m.add_function(wrap_pyfunction!(mul_table, m)?)?;
    m.add_function(wrap_pyfunction!(det, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(e7_dim, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(structure_constants, m)?)?;
    m.add("SUITES", harness::suite_names())?;
    Ok(())
}
