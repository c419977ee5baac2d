//! Python bindings for the `vlab` library.
//!
//! Grid functions cross the boundary as lists of Python complex numbers in
//! the little-endian point order of the underlying [`vlab::Basis`].

use num_bigint::BigUint;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use vlab::config::ExperimentConfig;
use vlab::counterexample::{find_alphas, CounterexampleSpec};
use vlab::experiments::{cmd_converge, cmd_counterexample, cmd_maximal, cmd_transform};
use vlab::operators;
use vlab::rng::{random_function as rng_function, SplitMix64};
use vlab::spectral::{self, SpectralFunction};
use vlab::summability::{self, Monotonicity};
use vlab::{GridFunction, VlabError};

fn py_err(e: VlabError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Basis", frozen, module = "vlab_py")]
struct PyBasis {
    inner: vlab::Basis,
}

#[pymethods]
impl PyBasis {
    /// `pattern` is repeated until `depth` radices are filled.
    #[new]
    fn new(pattern: Vec<u32>, depth: usize) -> PyResult<Self> {
        Ok(PyBasis {
            inner: vlab::Basis::new(&pattern, depth).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn from_radices(radices: Vec<u32>) -> PyResult<Self> {
        Ok(PyBasis {
            inner: vlab::Basis::from_radices(&radices).map_err(py_err)?,
        })
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    #[getter]
    fn radices(&self) -> Vec<u32> {
        self.inner.radices().to_vec()
    }

    /// `M_N` as an exact integer.
    #[getter]
    fn size(&self) -> BigUint {
        self.inner.size().clone()
    }

    /// `[M_0, ..., M_N]`.
    #[getter]
    fn powers(&self) -> Vec<BigUint> {
        self.inner.powers().to_vec()
    }

    #[getter]
    fn is_dense(&self) -> bool {
        self.inner.is_dense()
    }

    fn digits(&self, t: usize) -> PyResult<Vec<u32>> {
        Ok(self.inner.index_to_digits(t).map_err(py_err)?.digits().to_vec())
    }

    fn index(&self, digits: Vec<u32>) -> PyResult<usize> {
        let p = self.inner.point(digits).map_err(py_err)?;
        self.inner.digits_to_index(&p).map_err(py_err)
    }

    fn __len__(&self) -> PyResult<usize> {
        self.inner.dense_len().map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Basis({})", self.inner)
    }
}

#[pyclass(name = "Weights", frozen, module = "vlab_py")]
struct PyWeights {
    inner: summability::WeightSequence,
}

#[pymethods]
impl PyWeights {
    /// Parses names such as `"fejer"`, `"power(0.5)"` or `"iterlog(1,1)"`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyWeights {
            inner: summability::WeightSequence::parse(spec).map_err(py_err)?,
        })
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind().to_string()
    }

    #[getter]
    fn monotonicity(&self) -> &'static str {
        match self.inner.monotonicity() {
            Monotonicity::NonIncreasing => "non_increasing",
            Monotonicity::NonDecreasing => "non_decreasing",
            Monotonicity::Neither => "neither",
        }
    }

    #[getter]
    fn is_regular(&self) -> bool {
        self.inner.is_regular()
    }

    fn term(&self, k: u64) -> f64 {
        self.inner.term(k)
    }

    fn terms(&self, n: usize) -> Vec<f64> {
        self.inner.terms(n)
    }

    /// `Q_n = q_0 + ... + q_{n-1}`.
    fn cumulative(&self, n: u64) -> f64 {
        self.inner.cumulative(n)
    }

    fn domination_bound(&self, n: u64) -> PyResult<f64> {
        summability::domination_bound(&self.inner, n).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Weights({:?})", self.inner.kind().to_string())
    }
}

fn grid(basis: &PyBasis, values: Vec<Complex64>) -> PyResult<GridFunction> {
    GridFunction::new(&basis.inner, values).map_err(py_err)
}

/// Normalised transform: `c_n = (1/M) sum_t f(t) conj(psi_n(t))`.
#[pyfunction]
fn vft_forward(basis: &PyBasis, values: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let f = grid(basis, values)?;
    Ok(spectral::vft_forward(&f).map_err(py_err)?.into_coeffs())
}

#[pyfunction]
fn vft_inverse(basis: &PyBasis, coeffs: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let c = SpectralFunction::new(&basis.inner, coeffs).map_err(py_err)?;
    Ok(spectral::vft_inverse(&c).map_err(py_err)?.into_values())
}

#[pyfunction]
fn vft_naive(basis: &PyBasis, values: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    let f = grid(basis, values)?;
    Ok(spectral::vft_naive(&f).map_err(py_err)?.into_coeffs())
}

/// `D_n` at every point.
#[pyfunction]
fn dirichlet(basis: &PyBasis, n: usize) -> PyResult<Vec<Complex64>> {
    Ok(spectral::dirichlet_dense(&basis.inner, n)
        .map_err(py_err)?
        .into_values())
}

#[pyfunction]
fn random_function(basis: &PyBasis, seed: u64) -> PyResult<Vec<Complex64>> {
    Ok(rng_function(&basis.inner, &mut SplitMix64::new(seed))
        .map_err(py_err)?
        .into_values())
}

#[pyfunction]
fn partial_sum(basis: &PyBasis, values: Vec<Complex64>, n: usize) -> PyResult<Vec<Complex64>> {
    let f = grid(basis, values)?;
    Ok(summability::partial_sum(&f, n).map_err(py_err)?.into_values())
}

#[pyfunction]
fn t_mean(basis: &PyBasis, values: Vec<Complex64>, weights: &PyWeights, n: u64) -> PyResult<Vec<Complex64>> {
    let f = grid(basis, values)?;
    Ok(summability::t_mean(&f, &weights.inner, n)
        .map_err(py_err)?
        .into_values())
}

#[pyfunction]
fn norlund_mean(basis: &PyBasis, values: Vec<Complex64>, weights: &PyWeights, n: u64) -> PyResult<Vec<Complex64>> {
    let f = grid(basis, values)?;
    Ok(summability::norlund_mean(&f, &weights.inner, n)
        .map_err(py_err)?
        .into_values())
}

/// `sup_n |T_n f|` at every point.
#[pyfunction]
fn maximal_t(basis: &PyBasis, values: Vec<Complex64>, weights: &PyWeights) -> PyResult<Vec<f64>> {
    let f = grid(basis, values)?;
    Ok(operators::maximal_t(&f, &weights.inner)
        .map_err(py_err)?
        .values()
        .to_vec())
}

/// `sup_n |sigma_n f|` at every point.
#[pyfunction]
fn fejer_maximal(basis: &PyBasis, values: Vec<Complex64>) -> PyResult<Vec<f64>> {
    let f = grid(basis, values)?;
    Ok(operators::fejer_maximal(&f).map_err(py_err)?.values().to_vec())
}

#[pyfunction]
fn lp_norm(basis: &PyBasis, values: Vec<Complex64>, p: f64) -> PyResult<f64> {
    operators::lp_norm(&grid(basis, values)?, p).map_err(py_err)
}

#[pyfunction]
fn weak_lp(basis: &PyBasis, values: Vec<Complex64>, p: f64) -> PyResult<f64> {
    operators::weak_lp(&grid(basis, values)?, p).map_err(py_err)
}

/// Martingale Hardy quasi-norm of the martingale generated by `values`.
#[pyfunction]
fn hp_norm(basis: &PyBasis, values: Vec<Complex64>, p: f64) -> PyResult<f64> {
    operators::hp_norm(&grid(basis, values)?, p).map_err(py_err)
}

#[pyclass(name = "Counterexample", frozen, module = "vlab_py")]
struct PyCounterexample {
    inner: CounterexampleSpec,
}

#[pymethods]
impl PyCounterexample {
    /// Greedy block sequence for `p = 1/inv_p` on the radix `pattern`.
    #[new]
    #[pyo3(signature = (inv_p=3, pattern=vec![2], count=3, alpha0=1))]
    fn new(inv_p: u32, pattern: Vec<u32>, count: usize, alpha0: usize) -> PyResult<Self> {
        Ok(PyCounterexample {
            inner: find_alphas(inv_p, &pattern, count, alpha0).map_err(py_err)?,
        })
    }

    #[getter]
    fn alphas(&self) -> Vec<usize> {
        self.inner.alphas().to_vec()
    }

    #[getter]
    fn p(&self) -> f64 {
        self.inner.p()
    }

    fn condition3(&self) -> Vec<bool> {
        self.inner.condition3()
    }

    fn condition4(&self) -> Vec<bool> {
        self.inner.condition4()
    }

    fn hp_bound_limit(&self) -> Option<f64> {
        self.inner.hp_bound_limit()
    }

    fn divergence_ratio(&self, k: usize) -> PyResult<f64> {
        self.inner.divergence_ratio(k).map_err(py_err)
    }

    /// One row of the lower-bound chain as a dict.
    #[pyo3(signature = (k, weights, samples=10_000, seed=0, dense=false))]
    fn chain<'py>(
        &self,
        py: Python<'py>,
        k: usize,
        weights: &PyWeights,
        samples: usize,
        seed: u64,
        dense: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let row = self
            .inner
            .lower_bound_chain(k, &weights.inner, samples, seed, dense)
            .map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("k", k)?;
        d.set_item("alpha", row.alpha)?;
        d.set_item("m_alpha", row.m_alpha.clone())?;
        d.set_item("threshold", row.threshold)?;
        d.set_item("term_i_bound", row.term_i_bound)?;
        d.set_item("min_sample_margin", row.min_sample_margin)?;
        d.set_item("fraction_above", row.fraction_above)?;
        d.set_item("samples", row.samples)?;
        d.set_item("tier", row.tier())?;
        d.set_item("dense_min_abs_t", row.dense.as_ref().map(|t| t.min_abs_t))?;
        d.set_item("hp_bound", row.hp_bound)?;
        d.set_item("divergence_ratio", row.divergence_ratio)?;
        d.set_item("status", row.status())?;
        Ok(d)
    }
}

/// Runs a CLI experiment from TOML text; returns `(csv, violations)`.
#[pyfunction]
#[pyo3(signature = (command, config=""))]
fn run(command: &str, config: &str) -> PyResult<(String, Vec<String>)> {
    let cfg = ExperimentConfig::parse(config).map_err(py_err)?;
    let out = match command {
        "transform" => cmd_transform(&cfg),
        "maximal" => cmd_maximal(&cfg),
        "counterexample" => cmd_counterexample(&cfg),
        "converge" => cmd_converge(&cfg),
        other => return Err(PyValueError::new_err(format!("unknown command {other:?}"))),
    }
    .map_err(py_err)?;
    let csv = String::from_utf8(out.csv).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((csv, out.violations))
}

#[pymodule]
pub fn vlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBasis>()?;
    m.add_class::<PyWeights>()?;
    m.add_class::<PyCounterexample>()?;
    m.add_function(wrap_pyfunction!(vft_forward, m)?)?;
    m.add_function(wrap_pyfunction!(vft_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(vft_naive, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet, m)?)?;
    m.add_function(wrap_pyfunction!(random_function, m)?)?;
    m.add_function(wrap_pyfunction!(partial_sum, m)?)?;
    m.add_function(wrap_pyfunction!(t_mean, m)?)?;
    m.add_function(wrap_pyfunction!(norlund_mean, m)?)?;
    m.add_function(wrap_pyfunction!(maximal_t, m)?)?;
    m.add_function(wrap_pyfunction!(fejer_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(lp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(weak_lp, m)?)?;
    m.add_function(wrap_pyfunction!(hp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
