//! Python bindings for the qopmat channel library.
//!
//! Matrices cross the boundary as nested lists of Python `complex` numbers
//! (row-major). Bases are named by kind: `"transition"`, `"weyl"` or
//! `"gellmann"`.

use std::sync::Arc;

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qopmat::io;
use qopmat::tomography::{default_basis, TomographyDataset};
use qopmat::{BasisKind, ChannelRepr, ComplexMatrix, KrausChannel, OperatorBasis as CoreBasis, ProductBasis, QopError};

type Matrix = Vec<Vec<Complex64>>;

fn to_py_err(e: QopError) -> PyErr {
    match e {
        QopError::Io(msg) => PyIOError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_matrix(rows: Matrix) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(to_py_err)
}

fn from_matrix(m: &ComplexMatrix) -> Matrix {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn parse_kind(kind: &str) -> PyResult<BasisKind> {
    match kind.parse::<BasisKind>().map_err(to_py_err)? {
        BasisKind::Custom => Err(PyValueError::new_err("use OperatorBasis.custom for custom bases")),
        k => Ok(k),
    }
}

fn register(kind: &str, d: usize, n: usize) -> PyResult<ProductBasis> {
    ProductBasis::canonical(parse_kind(kind)?, d, n).map_err(to_py_err)
}

/// Orthonormal operator basis on a d-level system.
#[pyclass(name = "OperatorBasis", frozen)]
struct PyOperatorBasis {
    inner: Arc<CoreBasis>,
}

#[pymethods]
impl PyOperatorBasis {
    #[new]
    #[pyo3(signature = (d, kind = "gellmann"))]
    fn new(d: usize, kind: &str) -> PyResult<Self> {
        let inner = CoreBasis::canonical(parse_kind(kind)?, d).map_err(to_py_err)?;
        Ok(Self { inner: Arc::new(inner) })
    }

    /// Validated basis from explicit d x d elements.
    #[staticmethod]
    fn custom(d: usize, elements: Vec<Matrix>) -> PyResult<Self> {
        let elements = elements.into_iter().map(to_matrix).collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: Arc::new(CoreBasis::custom(d, elements).map_err(to_py_err)?) })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    fn elements(&self) -> Vec<Matrix> {
        self.inner.elements().iter().map(from_matrix).collect()
    }

    fn is_hermitian(&self) -> bool {
        self.inner.is_hermitian()
    }

    /// Largest deviations of the basis identities, plus an overall flag.
    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = self.inner.validate();
        let out = PyDict::new(py);
        out.set_item("orthonormality", r.orthonormality)?;
        out.set_item("completeness", r.completeness)?;
        out.set_item("reconstruction", r.reconstruction)?;
        out.set_item("depolarizing", r.depolarizing)?;
        out.set_item("passed", r.passed)?;
        Ok(out)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("OperatorBasis(d={}, kind='{}')", self.inner.d(), self.inner.kind())
    }
}

/// A channel held as a chi-matrix, S-matrix or Kraus list.
#[pyclass(name = "Channel", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyChannel {
    inner: ChannelRepr,
}

impl PyChannel {
    fn target(&self, basis: &str) -> PyResult<ProductBasis> {
        register(basis, self.inner.d(), self.inner.n())
    }
}

#[pymethods]
impl PyChannel {
    #[staticmethod]
    #[pyo3(signature = (operators, d, n = 1))]
    fn from_kraus(operators: Vec<Matrix>, d: usize, n: usize) -> PyResult<Self> {
        let ops = operators.into_iter().map(to_matrix).collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: KrausChannel::new(d, n, ops).map_err(to_py_err)?.into() })
    }

    #[staticmethod]
    #[pyo3(signature = (data, d, n = 1, basis = "gellmann"))]
    fn from_chi(data: Matrix, d: usize, n: usize, basis: &str) -> PyResult<Self> {
        let chi = qopmat::ChiMatrix::new(register(basis, d, n)?, to_matrix(data)?).map_err(to_py_err)?;
        Ok(Self { inner: chi.into() })
    }

    #[staticmethod]
    #[pyo3(signature = (data, d, n = 1, basis = "gellmann"))]
    fn from_smatrix(data: Matrix, d: usize, n: usize, basis: &str) -> PyResult<Self> {
        let s = qopmat::SMatrix::new(register(basis, d, n)?, to_matrix(data)?).map_err(to_py_err)?;
        Ok(Self { inner: s.into() })
    }

    /// Built-in gate or channel by name (`"X"`, `"H"`, `"CNOT"`, `"depolarize"`, ...).
    #[staticmethod]
    #[pyo3(signature = (name, d = 2))]
    fn named(name: &str, d: usize) -> PyResult<Self> {
        Ok(Self { inner: qopmat::channels::by_name(name, d).map_err(to_py_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (d, n = 1))]
    fn identity(d: usize, n: usize) -> PyResult<Self> {
        Ok(Self { inner: qopmat::channels::identity(d, n).map_err(to_py_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (d, n = 1))]
    fn depolarizing(d: usize, n: usize) -> PyResult<Self> {
        Ok(Self { inner: qopmat::channels::depolarizing(d, n).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v = io::parse_json(text).map_err(to_py_err)?;
        Ok(Self { inner: io::channel_from_json(&v).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self { inner: io::read_channel(path.as_ref()).map_err(to_py_err)? })
    }

    fn to_json(&self) -> String {
        io::to_canonical_string(&io::channel_to_json(&self.inner))
    }

    fn save(&self, path: &str) -> PyResult<()> {
        io::write_channel(path.as_ref(), &self.inner).map_err(to_py_err)
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// `"chi"`, `"smatrix"` or `"kraus"`.
    #[getter]
    fn representation(&self) -> &'static str {
        self.inner.kind_name()
    }

    #[pyo3(signature = (basis = "gellmann"))]
    fn chi(&self, basis: &str) -> PyResult<Matrix> {
        Ok(from_matrix(self.inner.to_chi(&self.target(basis)?).map_err(to_py_err)?.data()))
    }

    #[pyo3(signature = (basis = "gellmann"))]
    fn smatrix(&self, basis: &str) -> PyResult<Matrix> {
        Ok(from_matrix(self.inner.to_s(&self.target(basis)?).map_err(to_py_err)?.data()))
    }

    /// Same channel stored as a chi-matrix over `basis`.
    #[pyo3(signature = (basis = "gellmann"))]
    fn as_chi(&self, basis: &str) -> PyResult<Self> {
        Ok(Self { inner: self.inner.to_chi(&self.target(basis)?).map_err(to_py_err)?.into() })
    }

    /// Same channel stored as an S-matrix over `basis`.
    #[pyo3(signature = (basis = "gellmann"))]
    fn as_smatrix(&self, basis: &str) -> PyResult<Self> {
        Ok(Self { inner: self.inner.to_s(&self.target(basis)?).map_err(to_py_err)?.into() })
    }

    fn kraus(&self) -> PyResult<Vec<Matrix>> {
        let k = self.inner.to_kraus().map_err(to_py_err)?;
        Ok(k.operators().iter().map(from_matrix).collect())
    }

    fn superop_matrix(&self) -> PyResult<Matrix> {
        Ok(from_matrix(&self.inner.superop_matrix().map_err(to_py_err)?))
    }

    fn choi_operator(&self) -> PyResult<Matrix> {
        Ok(from_matrix(&self.inner.choi_operator().map_err(to_py_err)?))
    }

    fn apply(&self, rho: Matrix) -> PyResult<Matrix> {
        Ok(from_matrix(&self.inner.apply(&to_matrix(rho)?).map_err(to_py_err)?))
    }

    fn check_physical<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = qopmat::check_physical(&self.inner).map_err(to_py_err)?;
        let out = PyDict::new(py);
        out.set_item("hermiticity_deviation", r.hermiticity_deviation)?;
        out.set_item("min_chi_eigenvalue", r.min_chi_eigenvalue)?;
        out.set_item("max_chi_eigenvalue", r.max_chi_eigenvalue)?;
        out.set_item("trace_condition_excess", r.trace_condition_excess)?;
        out.set_item("trace_condition_deficit", r.trace_condition_deficit)?;
        out.set_item("is_hermiticity_preserving", r.is_hermiticity_preserving)?;
        out.set_item("is_cp", r.is_cp)?;
        out.set_item("is_trace_nonincreasing", r.is_trace_nonincreasing)?;
        out.set_item("is_trace_preserving", r.is_trace_preserving)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!("Channel(d={}, n={}, representation='{}')", self.inner.d(), self.inner.n(), self.inner.kind_name())
    }
}

/// `F_p` of `a` against the rank-one ideal process `b`.
#[pyfunction]
#[pyo3(signature = (a, b, basis = "gellmann"))]
fn process_fidelity(a: &PyChannel, b: &PyChannel, basis: &str) -> PyResult<f64> {
    let reg = a.target(basis)?;
    let chi_a = a.inner.to_chi(&reg).map_err(to_py_err)?;
    let chi_b = b.inner.to_chi(&reg).map_err(to_py_err)?;
    qopmat::process_fidelity(&chi_a, &chi_b).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (channel, basis = "gellmann"))]
fn channel_purity(channel: &PyChannel, basis: &str) -> PyResult<f64> {
    let chi = channel.inner.to_chi(&channel.target(basis)?).map_err(to_py_err)?;
    qopmat::channel_purity(&chi).map_err(to_py_err)
}

/// Channel that applies `second` after `first`.
#[pyfunction]
#[pyo3(signature = (second, first, basis = "gellmann"))]
fn compose(second: &PyChannel, first: &PyChannel, basis: &str) -> PyResult<PyChannel> {
    let reg = second.target(basis)?;
    let s2 = second.inner.to_s(&reg).map_err(to_py_err)?;
    let s1 = first.inner.to_s(&reg).map_err(to_py_err)?;
    Ok(PyChannel { inner: qopmat::compose(&s2, &s1).map_err(to_py_err)?.into() })
}

/// Extended channel on an `n_wires` register acting on `targets`.
#[pyfunction]
#[pyo3(signature = (channel, targets, n_wires, basis = "gellmann"))]
fn lift(channel: &PyChannel, targets: Vec<usize>, n_wires: usize, basis: &str) -> PyResult<PyChannel> {
    let reg = register(basis, channel.inner.d(), n_wires)?;
    Ok(PyChannel { inner: qopmat::lift(&channel.inner, &targets, &reg).map_err(to_py_err)?.into() })
}

#[pyfunction]
fn reshuffle(matrix: Matrix, d: usize) -> PyResult<Matrix> {
    Ok(from_matrix(&qopmat::reshuffle(&to_matrix(matrix)?, d).map_err(to_py_err)?))
}

/// Tomography readouts (Gell-Mann basis) with optional Gaussian noise.
#[pyfunction]
#[pyo3(signature = (channel, sigma = 0.0, seed = 0))]
fn simulate_dataset(channel: &PyChannel, sigma: f64, seed: u64) -> PyResult<Vec<f64>> {
    let basis = default_basis(channel.inner.d()).map_err(to_py_err)?;
    Ok(qopmat::simulate_dataset(&channel.inner, &basis, sigma, seed).map_err(to_py_err)?.values)
}

/// Reconstructed chi-matrix channel and its physicality report.
#[pyfunction]
#[pyo3(signature = (values, d, n = 1))]
fn reconstruct<'py>(py: Python<'py>, values: Vec<f64>, d: usize, n: usize) -> PyResult<(PyChannel, Bound<'py, PyDict>)> {
    let basis = default_basis(d).map_err(to_py_err)?;
    let ds = TomographyDataset::new(d, n, basis, 0.0, 0, values).map_err(to_py_err)?;
    let rec = qopmat::reconstruct(&ds).map_err(to_py_err)?;
    let channel = PyChannel { inner: rec.chi.into() };
    let report = channel.check_physical(py)?;
    Ok((channel, report))
}

#[pymodule]
fn qopmat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperatorBasis>()?;
    m.add_class::<PyChannel>()?;
    m.add_function(wrap_pyfunction!(process_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(channel_purity, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(lift, m)?)?;
    m.add_function(wrap_pyfunction!(reshuffle, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
