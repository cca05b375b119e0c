//! Python module `qspa`.
//!
//! Matrices cross the boundary as nested lists of `complex`; reports come back as dicts
//! with the same field names as the JSON the `qspa` binary writes.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

use qspa::channels::{self, KrausMap};
use qspa::measure;
use qspa::multicopy::{self, Side};
use qspa::nogo;
use qspa::spectrum::{self, MomentPath, MomentVector};
use qspa::states;
use qspa::{Budget, ChoiMatrix, Complex64, ComplexMatrix, Error};

create_exception!(qspa, ValidationError, PyValueError, "Input rejected before any numerics ran.");
create_exception!(qspa, NumericalError, PyArithmeticError, "A numerical routine failed or hit a degenerate case.");

fn to_py_err(e: Error) -> PyErr {
    if e.is_numerical() {
        NumericalError::new_err(e.to_string())
    } else {
        ValidationError::new_err(e.to_string())
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for qspa::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(f)) => f.into_pyobject(py)?.into_any(),
            _ => return Err(PyValueError::new_err("unrepresentable number")),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn matrix_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(ValidationError::new_err("ragged matrix rows"));
    }
    ComplexMatrix::from_vec(n, m, rows.into_iter().flatten().collect()).or_raise()
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    m.as_slice().chunks(m.cols().max(1)).map(<[Complex64]>::to_vec).collect()
}

fn parse_side(side: &str) -> PyResult<Side> {
    match side {
        "A" | "a" => Ok(Side::A),
        "B" | "b" => Ok(Side::B),
        other => Err(ValidationError::new_err(format!("side must be 'A' or 'B', got {other:?}"))),
    }
}

fn parse_path(via: &str) -> PyResult<MomentPath> {
    match via {
        "shift" => Ok(MomentPath::Shift),
        "eig" => Ok(MomentPath::Eig),
        other => Err(ValidationError::new_err(format!("via must be 'shift' or 'eig', got {other:?}"))),
    }
}

/// A validated density matrix.
#[pyclass(name = "DensityMatrix", module = "qspa", frozen)]
struct PyDensity(qspa::DensityMatrix);

#[pymethods]
impl PyDensity {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self(qspa::DensityMatrix::validate(matrix_from_rows(rows)?).or_raise()?))
    }

    #[staticmethod]
    fn diagonal(probabilities: Vec<f64>) -> PyResult<Self> {
        Ok(Self(qspa::DensityMatrix::diagonal(&probabilities).or_raise()?))
    }

    #[staticmethod]
    fn maximally_mixed(d: usize) -> Self {
        Self(qspa::DensityMatrix::maximally_mixed(d))
    }

    #[staticmethod]
    fn pure(psi: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self(qspa::DensityMatrix::pure(&psi).or_raise()?))
    }

    #[staticmethod]
    fn random_mixed(d: usize, seed: u64) -> Self {
        Self(states::random_mixed(d, seed))
    }

    #[staticmethod]
    fn random_pure(d: usize, seed: u64) -> Self {
        Self(states::random_pure(d, seed))
    }

    #[staticmethod]
    fn random_separable(d_a: usize, d_b: usize, terms: usize, seed: u64) -> Self {
        Self(states::random_separable(d_a, d_b, terms, seed))
    }

    #[staticmethod]
    fn max_entangled(d: usize) -> Self {
        Self(states::max_entangled(d))
    }

    #[staticmethod]
    fn singlet() -> Self {
        Self(states::singlet())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(|e| ValidationError::new_err(e.to_string()))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn purity(&self) -> f64 {
        self.0.purity()
    }

    /// Ascending.
    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues()
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.0.matrix())
    }

    fn tensor(&self, other: &PyDensity) -> Self {
        Self(self.0.tensor(&other.0))
    }

    fn reduce(&self, dims: Vec<usize>, keep: Vec<usize>) -> PyResult<Self> {
        Ok(Self(self.0.reduce(&dims, &keep).or_raise()?))
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dim={}, purity={:.6})", self.0.dim(), self.0.purity())
    }
}

/// A hermiticity-preserving linear map, stored as Kraus operators or a Choi matrix.
#[pyclass(name = "HermitianMap", module = "qspa", frozen)]
struct PyMap(qspa::HermitianMap);

#[pymethods]
impl PyMap {
    #[staticmethod]
    fn transpose(d: usize) -> Self {
        Self(channels::transpose_map(d))
    }

    #[staticmethod]
    fn depolarizing(d_in: usize, d_out: usize) -> Self {
        Self(channels::depolarizing_map(d_in, d_out))
    }

    #[staticmethod]
    fn identity(d: usize) -> Self {
        Self(channels::identity_map(d))
    }

    #[staticmethod]
    fn random(d_in: usize, d_out: usize, seed: u64) -> Self {
        Self(channels::random_hermitian_map(d_in, d_out, seed))
    }

    #[staticmethod]
    fn random_trace_nonincreasing(d_in: usize, d_out: usize, n_ops: usize, seed: u64) -> Self {
        Self(channels::random_trace_nonincreasing(d_in, d_out, n_ops, seed).into())
    }

    #[staticmethod]
    fn from_kraus(d_in: usize, d_out: usize, ops: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let ops = ops.into_iter().map(matrix_from_rows).collect::<PyResult<Vec<_>>>()?;
        Ok(Self(KrausMap::new(d_in, d_out, ops).or_raise()?.into()))
    }

    #[staticmethod]
    fn from_choi(d_in: usize, d_out: usize, rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self(ChoiMatrix::new(d_in, d_out, matrix_from_rows(rows)?).or_raise()?.into()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(|e| ValidationError::new_err(e.to_string()))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn d_in(&self) -> usize {
        self.0.d_in()
    }

    #[getter]
    fn d_out(&self) -> usize {
        self.0.d_out()
    }

    /// Applies the map to a density matrix or any square matrix given as nested lists.
    fn apply(&self, x: &Bound<'_, PyAny>) -> PyResult<Vec<Vec<Complex64>>> {
        let m = match x.cast::<PyDensity>() {
            Ok(rho) => rho.get().0.matrix().clone(),
            Err(_) => matrix_from_rows(x.extract()?)?,
        };
        Ok(matrix_to_rows(&self.0.apply(&m).or_raise()?))
    }

    fn choi(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.0.choi().matrix())
    }

    fn is_cp<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        report(py, &channels::is_cp(&self.0))
    }

    fn is_tp<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        report(py, &channels::is_tp(&self.0))
    }

    fn __repr__(&self) -> String {
        let form = match self.0 {
            qspa::HermitianMap::Kraus(_) => "kraus",
            qspa::HermitianMap::Choi(_) => "choi",
        };
        format!("HermitianMap(d_in={}, d_out={}, form={form})", self.0.d_in(), self.0.d_out())
    }
}

/// Optimal structural physical approximation; `theta_bar` comes back as a `HermitianMap`.
#[pyfunction]
fn spa_optimal<'py>(py: Python<'py>, map: &PyMap) -> PyResult<(Bound<'py, PyAny>, PyMap)> {
    let spa = channels::spa_optimal(&map.0).or_raise()?;
    let bar = PyMap(spa.theta_bar.clone().into());
    Ok((report(py, &spa)?, bar))
}

#[pyfunction]
fn spa_at(map: &PyMap, a: f64, t: f64) -> PyResult<PyMap> {
    Ok(PyMap(channels::spa_at(&map.0, a, t).or_raise()?.into()))
}

#[pyfunction]
fn noise_threshold(map: &PyMap) -> f64 {
    channels::noise_threshold(&map.0)
}

#[pyfunction]
fn dilate(map: &PyMap) -> PyResult<PyMap> {
    let qspa::HermitianMap::Kraus(k) = &map.0 else {
        return Err(ValidationError::new_err("dilation needs a Kraus-form map"));
    };
    Ok(PyMap(channels::dilate_trace_nonincreasing(k).or_raise()?.into()))
}

/// One heralded run of a trace-nonincreasing Kraus map.
#[pyfunction]
fn realize<'py>(py: Python<'py>, map: &PyMap, state: &PyDensity, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let qspa::HermitianMap::Kraus(k) = &map.0 else {
        return Err(ValidationError::new_err("realization needs a Kraus-form map"));
    };
    report(py, &channels::realize_probabilistic(k, &state.0, seed).or_raise()?)
}

#[pyfunction]
#[pyo3(signature = (state, kind = "tsallis", q = 2.0))]
fn entropy(state: &PyDensity, kind: &str, q: f64) -> PyResult<f64> {
    let v = match kind {
        "tsallis" => states::tsallis_entropy(&state.0, q).or_raise()?,
        "renyi" => states::renyi_entropy(&state.0, q).or_raise()?,
        "von-neumann" | "von_neumann" => states::von_neumann_entropy(&state.0),
        other => return Err(ValidationError::new_err(format!("unknown entropy kind {other:?}"))),
    };
    Ok(v.value)
}

/// `Tr ρ^k` through the cyclic shift on `k` copies.
#[pyfunction]
#[pyo3(signature = (state, k, max_operator_dim = 4096))]
fn moment(state: &PyDensity, k: usize, max_operator_dim: usize) -> PyResult<f64> {
    multicopy::moment_within(&state.0, k, Budget(max_operator_dim)).or_raise()
}

#[pyfunction]
#[pyo3(signature = (state, dims, side = "A"))]
fn witness(state: &PyDensity, dims: (usize, usize), side: &str) -> PyResult<f64> {
    multicopy::witness_q2(&state.0, dims, parse_side(side)?).or_raise()
}

#[pyfunction]
#[pyo3(signature = (state, dims, qs = vec![2.0]))]
fn separability_check<'py>(
    py: Python<'py>,
    state: &PyDensity,
    dims: (usize, usize),
    qs: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    report(py, &multicopy::entropic_separability_check(&state.0, dims, &qs).or_raise()?)
}

/// Eigenvalues (descending) from moments `[m_1, …, m_d]`.
#[pyfunction]
fn spectrum_from_moments<'py>(py: Python<'py>, moments: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    let mv = MomentVector::new(moments, 0.0).or_raise()?;
    report(py, &spectrum::estimate_spectrum(&mv).or_raise()?)
}

#[pyfunction]
#[pyo3(signature = (state, via = "shift", max_operator_dim = 4096))]
fn spectrum_of<'py>(py: Python<'py>, state: &PyDensity, via: &str, max_operator_dim: usize) -> PyResult<Bound<'py, PyAny>> {
    let got = spectrum::spectrum_from_state_within(&state.0, parse_path(via)?, Budget(max_operator_dim)).or_raise()?;
    report(py, &got)
}

/// Finite-shot estimates of `m_2..m_k`.
#[pyfunction]
fn sample_moments<'py>(py: Python<'py>, state: &PyDensity, k: usize, shots: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    report(py, &measure::estimate_moments_shots(&state.0, k, shots, seed).or_raise()?)
}

/// Shot estimate of `swap` (2 copies) or `shift` (`copies` copies).
#[pyfunction]
#[pyo3(signature = (observable, state, shots, seed, copies = 2))]
fn sample_observable<'py>(
    py: Python<'py>,
    observable: &str,
    state: &PyDensity,
    shots: u64,
    seed: u64,
    copies: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let d = state.0.dim();
    let obs = match observable {
        "swap" => multicopy::swap_operator(d),
        "shift" => multicopy::shift_operator(d, copies).or_raise()?,
        other => return Err(ValidationError::new_err(format!("unknown observable {other:?}"))),
    };
    report(py, &measure::estimate_multicopy(&obs, &state.0, shots, seed).or_raise()?)
}

#[pyfunction]
#[pyo3(signature = (state, n = 2))]
fn nogo_gap<'py>(py: Python<'py>, state: &PyDensity, n: usize) -> PyResult<Bound<'py, PyAny>> {
    report(py, &nogo::nogo_gap(&state.0, n).or_raise()?)
}

#[pyfunction]
#[pyo3(signature = (d, trials = 100, seed = 0))]
fn map2_check<'py>(py: Python<'py>, d: usize, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    report(py, &nogo::map2_linearization_check(d, trials, seed).or_raise()?)
}

#[pymodule]
#[pyo3(name = "qspa")]
fn qspa_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("ValidationError", py.get_type::<ValidationError>())?;
    m.add("NumericalError", py.get_type::<NumericalError>())?;
    m.add_class::<PyDensity>()?;
    m.add_class::<PyMap>()?;
    m.add_function(wrap_pyfunction!(spa_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(spa_at, m)?)?;
    m.add_function(wrap_pyfunction!(noise_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(dilate, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(separability_check, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_from_moments, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_of, m)?)?;
    m.add_function(wrap_pyfunction!(sample_moments, m)?)?;
    m.add_function(wrap_pyfunction!(sample_observable, m)?)?;
    m.add_function(wrap_pyfunction!(nogo_gap, m)?)?;
    m.add_function(wrap_pyfunction!(map2_check, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_roundtrip() {
        let rows = vec![
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.1)],
            vec![Complex64::new(0.0, -0.1), Complex64::new(0.5, 0.0)],
        ];
        let m = matrix_from_rows(rows.clone()).unwrap();
        assert_eq!(matrix_to_rows(&m), rows);
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_side("b").unwrap(), Side::B);
        assert_eq!(parse_path("eig").unwrap(), MomentPath::Eig);
    }
}
