//! Python bindings for the sparse spectral DFT library.
//!
//! Builds as the extension module `spectral_fft_py`, exposing the support
//! analysis, butterfly planning, and recovery oracles with plain Python
//! types: indices as ints, coefficients as complex numbers.

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use spectral_fft::{
    build_plan, check_unitary_pair, idempotent_of, is_conforming, pivots_of, validate_support,
    ButterflyPlan, Error, IndexSet, PivotSet, SpectralSupport, DEFAULT_SUBMATRIX_CAP,
};

fn py_err(err: Error) -> PyErr {
    match err {
        Error::InvalidInput(_) | Error::IllConditioned(_) => {
            PyArithmeticError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn index_set(n: u64, elements: Vec<u64>) -> PyResult<IndexSet> {
    IndexSet::new(n, elements).map_err(py_err)
}

/// A frequency support whose digit table conforms to its pivots, carrying
/// the canonical row order and the derived sampling plan.
#[pyclass(name = "SpectralSupport", module = "spectral_fft_py", from_py_object)]
#[derive(Clone)]
struct PySpectralSupport {
    inner: SpectralSupport,
}

#[pymethods]
impl PySpectralSupport {
    #[new]
    fn new(n: u64, support: Vec<u64>) -> PyResult<Self> {
        let set = index_set(n, support)?;
        let inner = validate_support(&set).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn log_k(&self) -> u32 {
        self.inner.log_k()
    }

    #[getter]
    fn pivots(&self) -> Vec<u32> {
        self.inner.pivots().positions().to_vec()
    }

    /// Support frequencies in the canonical row order of the sub-operator.
    #[getter]
    fn row_order(&self) -> Vec<u64> {
        self.inner.row_order().to_vec()
    }

    /// Time indices to sample, in the canonical column order.
    #[getter]
    fn sample_indices(&self) -> Vec<u64> {
        self.inner.sample_plan().column_order().to_vec()
    }

    /// Recovery scale k' = n / k.
    #[getter]
    fn scale(&self) -> u64 {
        self.inner.sample_plan().scale()
    }

    fn plan(&self) -> PyButterflyPlan {
        PyButterflyPlan {
            inner: build_plan(&self.inner),
        }
    }

    /// Evaluate the inverse DFT of `coefficients` (aligned with `row_order`)
    /// at the given time indices, or over all of Z_n when omitted.
    #[pyo3(signature = (coefficients, at = None))]
    fn synthesize(
        &self,
        coefficients: Vec<Complex64>,
        at: Option<Vec<u64>>,
    ) -> PyResult<Vec<Complex64>> {
        match at {
            Some(indices) => {
                let set = index_set(self.inner.n(), indices)?;
                spectral_fft::synthesize(&self.inner, &coefficients, &set).map_err(py_err)
            }
            None => spectral_fft::synthesize_full(&self.inner, &coefficients)
                .map(|x| x.values().to_vec())
                .map_err(py_err),
        }
    }

    /// Recover the coefficients from k consecutive time samples starting at
    /// `offset` by solving the restricted inverse system directly.
    #[pyo3(signature = (x_samples, offset = 0))]
    fn vandermonde_recover(
        &self,
        x_samples: Vec<Complex64>,
        offset: u64,
    ) -> PyResult<Vec<Complex64>> {
        spectral_fft::vandermonde_recover(&x_samples, offset, &self.inner).map_err(py_err)
    }

    fn __len__(&self) -> usize {
        self.inner.k()
    }

    fn __repr__(&self) -> String {
        format!(
            "SpectralSupport(n={}, support={:?})",
            self.inner.n(),
            self.inner.row_order()
        )
    }
}

/// The factored DFT sub-operator for a spectral support: per-level twiddle
/// tables plus the butterfly executor.
#[pyclass(name = "ButterflyPlan", module = "spectral_fft_py")]
struct PyButterflyPlan {
    inner: ButterflyPlan,
}

#[pymethods]
impl PyButterflyPlan {
    #[new]
    fn new(support: PySpectralSupport) -> Self {
        Self {
            inner: build_plan(&support.inner),
        }
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn scale(&self) -> u64 {
        self.inner.scale()
    }

    #[getter]
    fn column_order(&self) -> Vec<u64> {
        self.inner.samples().column_order().to_vec()
    }

    #[getter]
    fn levels(&self) -> Vec<Vec<Complex64>> {
        self.inner.levels().to_vec()
    }

    #[getter]
    fn operation_count(&self) -> u64 {
        self.inner.operation_count()
    }

    fn support(&self) -> PySpectralSupport {
        PySpectralSupport {
            inner: self.inner.support().clone(),
        }
    }

    /// Apply the factored operator to samples listed in `column_order`;
    /// returns the k'-scaled DFT coefficients in `row_order`.
    fn transform(&self, x_samples: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        self.inner.transform(&x_samples).map_err(py_err)
    }

    /// Materialize the dense sub-operator F(row_order, column_order).
    #[pyo3(signature = (cap = DEFAULT_SUBMATRIX_CAP))]
    fn submatrix(&self, cap: usize) -> PyResult<Vec<Vec<Complex64>>> {
        self.inner.submatrix_with_cap(cap).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "ButterflyPlan(n={}, k={}, operations={})",
            self.inner.n(),
            self.inner.k(),
            self.inner.operation_count()
        )
    }
}

/// Binary digits of `index`, least significant first, padded to log2(n).
#[pyfunction]
fn digits(index: u64, n: u64) -> PyResult<Vec<u32>> {
    spectral_fft::digits_of(index, n)
        .map(|d| d.into_iter().map(u32::from).collect())
        .map_err(py_err)
}

/// Pivot digit positions of the index set's digit table.
#[pyfunction]
fn pivots(n: u64, elements: Vec<u64>) -> PyResult<Vec<u32>> {
    let set = index_set(n, elements)?;
    pivots_of(&set).map(|p| p.positions().to_vec()).map_err(py_err)
}

/// Whether the index set is conforming, i.e. spectral: its size equals
/// 2^(number of pivots).
#[pyfunction]
#[pyo3(name = "is_conforming")]
fn is_conforming_py(n: u64, elements: Vec<u64>) -> PyResult<bool> {
    let set = index_set(n, elements)?;
    is_conforming(&set).map_err(py_err)
}

/// Dual pivot positions d -> log2(n) - 1 - d, ascending.
#[pyfunction]
fn dual_pivots(n: u64, pivots: Vec<u32>) -> PyResult<Vec<u32>> {
    let set = PivotSet::from_positions(pivots);
    spectral_fft::dual_pivots(&set, n)
        .map(|d| d.positions().to_vec())
        .map_err(py_err)
}

/// Draw a uniformly seeded spectral support on Z_n with 2^pivot_count
/// elements.
#[pyfunction]
fn random_support(n: u64, pivot_count: u32, seed: u64) -> PyResult<PySpectralSupport> {
    spectral_fft::random_spectral_support(n, pivot_count, seed)
        .map(|inner| PySpectralSupport { inner })
        .map_err(py_err)
}

/// The idempotent h_J of the support: its n values over Z_n and the set of
/// gcds {gcd(i, n)} over the indices where it vanishes.
#[pyfunction]
fn idempotent(n: u64, elements: Vec<u64>) -> PyResult<(Vec<Complex64>, Vec<u64>)> {
    let set = index_set(n, elements)?;
    let h = idempotent_of(&set);
    let zeros = h.zero_divisors().iter().copied().collect();
    Ok((h.values().to_vec(), zeros))
}

/// Whether the sample set makes the restricted DFT unitary (up to scale)
/// for the given support.
#[pyfunction]
fn is_unitary_pair(n: u64, support: Vec<u64>, samples: Vec<u64>) -> PyResult<bool> {
    let j = index_set(n, support)?;
    let i = index_set(n, samples)?;
    check_unitary_pair(&j, &i).map_err(py_err)
}

/// Dense DFT submatrix F(rows, cols) over Z_n with the forward kernel.
#[pyfunction]
fn dft_submatrix(n: u64, rows: Vec<u64>, cols: Vec<u64>) -> PyResult<Vec<Vec<Complex64>>> {
    spectral_fft::dft_submatrix(n, &rows, &cols).map_err(py_err)
}

/// Full forward DFT of a dense power-of-two-length signal.
#[pyfunction]
fn full_dft(values: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let x = spectral_fft::FullSignal::new(values).map_err(py_err)?;
    Ok(spectral_fft::full_fft(&x))
}

/// Direct O(|at| * |support|) evaluation of the scaled DFT at the support
/// frequencies from samples taken at `at`, aligned with the order of
/// `support` as listed.
#[pyfunction]
fn naive_dft(
    n: u64,
    x_samples: Vec<Complex64>,
    at: Vec<u64>,
    support: Vec<u64>,
) -> PyResult<Vec<Complex64>> {
    let at = index_set(n, at)?;
    let support = index_set(n, support)?;
    spectral_fft::naive_sparse_dft(&x_samples, &at, &support).map_err(py_err)
}

/// Recover the support coefficients from a dense signal by aliasing:
/// requires a consecutive or arithmetic support. Output follows ascending
/// support order.
#[pyfunction]
fn aliasing_recover(signal: Vec<Complex64>, support: Vec<u64>) -> PyResult<Vec<Complex64>> {
    let x = spectral_fft::FullSignal::new(signal).map_err(py_err)?;
    let set = index_set(x.n(), support)?;
    spectral_fft::aliasing_recover(&x, &set).map_err(py_err)
}

#[pymodule]
fn spectral_fft_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpectralSupport>()?;
    m.add_class::<PyButterflyPlan>()?;
    m.add_function(wrap_pyfunction!(digits, m)?)?;
    m.add_function(wrap_pyfunction!(pivots, m)?)?;
    m.add_function(wrap_pyfunction!(is_conforming_py, m)?)?;
    m.add_function(wrap_pyfunction!(dual_pivots, m)?)?;
    m.add_function(wrap_pyfunction!(random_support, m)?)?;
    m.add_function(wrap_pyfunction!(idempotent, m)?)?;
    m.add_function(wrap_pyfunction!(is_unitary_pair, m)?)?;
    m.add_function(wrap_pyfunction!(dft_submatrix, m)?)?;
    m.add_function(wrap_pyfunction!(full_dft, m)?)?;
    m.add_function(wrap_pyfunction!(naive_dft, m)?)?;
    m.add_function(wrap_pyfunction!(aliasing_recover, m)?)?;
    m.add("DEFAULT_SUBMATRIX_CAP", DEFAULT_SUBMATRIX_CAP)?;
    Ok(())
}
