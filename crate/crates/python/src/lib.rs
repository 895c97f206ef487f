//! Python bindings for `prodlab-core`.

use num_bigint::BigInt;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use prodlab_core::extrema::{count_extrema, iota_injection, FdSeq};
use prodlab_core::lab::{self, ExperimentSpec, TraceReport};
use prodlab_core::seminorms::{self, MountainInstance};
use prodlab_core::suites::{run_suites, Mutant};
use prodlab_core::{Error, Letter};

fn err(e: Error) -> PyErr {
    match e {
        Error::IndexOutOfRange { .. } => PyIndexError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Reduced word of the free group, written like `0^2.1^-3.0`.
#[pyclass(frozen, eq, hash, from_py_object, module = "prodlab")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Word(prodlab_core::Word);

#[pymethods]
impl Word {
    #[new]
    #[pyo3(signature = (text = "e"))]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Word).map_err(err)
    }

    #[staticmethod]
    fn from_monoms(monoms: Vec<(u64, BigInt)>) -> Self {
        Word(prodlab_core::Word::from_monoms(monoms))
    }

    fn monoms(&self) -> Vec<(u64, BigInt)> {
        self.0.monoms().iter().map(|m| (m.letter.0, m.power.clone())).collect()
    }

    fn support(&self) -> Vec<u64> {
        self.0.support().naturals()
    }

    fn inv(&self) -> Self {
        Word(self.0.inv())
    }

    fn cyclic_conjugate(&self) -> Self {
        Word(self.0.cyclic_conjugate())
    }

    fn eta(&self) -> usize {
        seminorms::eta(&self.0)
    }

    fn mu(&self, x: u64) -> BigInt {
        seminorms::mu(Letter(x), &self.0).into()
    }

    fn delta(&self, j: u64) -> BigInt {
        seminorms::delta(j, &self.0)
    }

    fn __mul__(&self, other: &Word) -> Self {
        Word(self.0.mul(&other.0))
    }

    fn __pow__(&self, n: BigInt, _modulo: Option<Py<PyAny>>) -> Self {
        Word(self.0.pow(n))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word('{}')", self.0)
    }
}

/// Result of `run_experiment`.
#[pyclass(frozen, module = "prodlab")]
struct Trace(TraceReport);

#[pymethods]
impl Trace {
    #[getter]
    fn verdict(&self) -> &'static str {
        self.0.verdict.name()
    }

    #[getter]
    fn cauchy(&self) -> bool {
        self.0.cauchy.cauchy
    }

    #[getter]
    fn margin(&self) -> u64 {
        self.0.cauchy.margin
    }

    fn k_table(&self) -> Vec<u64> {
        self.0.cauchy.k_table()
    }

    /// `(m, probe, value, rendered)` per recorded step.
    fn steps(&self) -> Vec<(u64, String, String, String)> {
        self.0
            .steps
            .iter()
            .map(|s| (s.m, s.probe.clone(), s.value.clone(), s.rendered.clone()))
            .collect()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }
}

/// Run an experiment described by a TOML config.
#[pyfunction]
fn run_experiment(config: &str) -> PyResult<Trace> {
    let spec = ExperimentSpec::from_toml(config).map_err(err)?;
    lab::run_experiment(&spec).map(Trace).map_err(err)
}

#[pyfunction]
fn extrema_count(seq: Vec<u64>) -> PyResult<usize> {
    FdSeq::from_naturals(&seq).map_err(err)?;
    Ok(count_extrema(&seq))
}

/// The injection of the extrema of `seq[selected]` into those of `seq`.
#[pyfunction]
fn iota(seq: Vec<u64>, selected: Vec<usize>) -> PyResult<Vec<(usize, usize)>> {
    let s = FdSeq::from_naturals(&seq).map_err(err)?;
    Ok(iota_injection(&s, &selected).map_err(err)?.into_iter().collect())
}

/// Returns `(branch, eta(w), eta(w^n), held)`.
#[pyfunction]
fn eta_power_bounds(w: &Word, n: u64) -> PyResult<(String, usize, usize, bool)> {
    if n == 0 {
        return Err(PyValueError::new_err("power must be positive"));
    }
    let r = seminorms::eta_power_bounds(&w.0, n);
    Ok((format!("{:?}", r.branch), r.eta_w, r.eta_power, r.held))
}

/// Returns `(product, n_m, verdict)`.
#[pyfunction]
fn mountain_check(words: Vec<Word>, peaks: Vec<u64>) -> PyResult<(Word, Option<usize>, bool)> {
    let inst = MountainInstance::new(
        words.into_iter().map(|w| w.0).collect(),
        peaks.into_iter().map(Letter).collect(),
    )
    .map_err(err)?;
    let v = seminorms::mountain_check(&inst).map_err(err)?;
    Ok((Word(v.product), v.n_m, v.verdict))
}

/// Rows `(l, eta, word)` of the zig-zag divergence demo.
#[pyfunction]
fn zigzag_demo(lmax: u64) -> Vec<(u64, usize, Word)> {
    lab::zigzag_divergence_demo(lmax).into_iter().map(|r| (r.l, r.eta, Word(r.word))).collect()
}

/// Rows `(n, pi_n, is_cycle)`.
#[pyfunction]
fn perm_cycle_demo(n: u64) -> Vec<(u64, String, bool)> {
    lab::perm_cycle_demo(n).into_iter().map(|r| (r.n, r.pi, r.is_cycle)).collect()
}

/// Rows `(suite, cases, violations)`.
#[pyfunction]
#[pyo3(signature = (seed = 42, cases = 100, mutant = None))]
fn selftest(seed: u64, cases: u64, mutant: Option<&str>) -> PyResult<Vec<(String, u64, u64)>> {
    let mutant = mutant
        .map(|m| m.parse::<Mutant>().map_err(|e| PyValueError::new_err(format!("{e}"))))
        .transpose()?;
    Ok(run_suites(seed, cases, mutant).into_iter().map(|r| (r.name, r.cases, r.violations)).collect())
}

#[pymodule]
fn prodlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Word>()?;
    m.add_class::<Trace>()?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(extrema_count, m)?)?;
    m.add_function(wrap_pyfunction!(iota, m)?)?;
    m.add_function(wrap_pyfunction!(eta_power_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(mountain_check, m)?)?;
    m.add_function(wrap_pyfunction!(zigzag_demo, m)?)?;
    m.add_function(wrap_pyfunction!(perm_cycle_demo, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
