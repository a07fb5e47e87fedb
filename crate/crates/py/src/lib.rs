//! Python bindings over the distillation core: channel constructors,
//! resource estimators, closed-form sequence evaluation, catalog search,
//! and the seeded Monte Carlo sampler. Distributions cross the boundary
//! as `(p_i, p_x, p_y, p_z)` tuples and sequences as comma-joined ids.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use distill_core::analytic::{self, EvalConfig, SequenceMetrics};
use distill_core::channels::{self, PauliDist};
use distill_core::codes::{self, Basis};
use distill_core::estimators;
use distill_core::montecarlo::{self, TrialConfig};
use distill_core::optimizer::{self, SearchConstraints};

fn to_py_err(e: distill_core::Error) -> PyErr {
    match e {
        distill_core::Error::Infeasible(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn dist_from(c: (f64, f64, f64, f64)) -> PyResult<PauliDist> {
    PauliDist::new(c.0, c.1, c.2, c.3).map_err(to_py_err)
}

fn dist_tuple(d: &PauliDist) -> (f64, f64, f64, f64) {
    let [i, x, y, z] = d.components();
    (i, x, y, z)
}

fn basis_from(s: &str) -> PyResult<Basis> {
    match s.to_ascii_lowercase().as_str() {
        "x" => Ok(Basis::X),
        "y" => Ok(Basis::Y),
        "z" => Ok(Basis::Z),
        other => Err(PyValueError::new_err(format!(
            "basis must be x, y, or z, got `{other}`"
        ))),
    }
}

fn metrics_dict<'py>(py: Python<'py>, m: &SequenceMetrics) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("overhead", m.overhead)?;
    out.set_item("memory", m.memory)?;
    out.set_item("batch_outputs", m.batch_outputs)?;
    out.set_item("p_final", m.p_final)?;
    out.set_item("p_per_qubit", m.p_per_qubit)?;
    out.set_item("p0_reject", m.p0_reject)?;
    let levels: Vec<Bound<'py, PyDict>> = m
        .levels
        .iter()
        .map(|l| {
            let d = PyDict::new(py);
            d.set_item("id", &l.id)?;
            d.set_item("n", l.n)?;
            d.set_item("k", l.k)?;
            d.set_item("d", l.d)?;
            d.set_item("p", l.p)?;
            d.set_item("p_fail", l.p_fail)?;
            d.set_item("cum_outputs", l.cum_outputs)?;
            d.set_item("memory", l.memory)?;
            Ok(d)
        })
        .collect::<PyResult<_>>()?;
    out.set_item("levels", levels)?;
    Ok(out)
}

/// Depolarizing Pauli distribution with total error `p`, split evenly
/// across X, Y, and Z.
#[pyfunction]
fn depolarizing(p: f64) -> PyResult<(f64, f64, f64, f64)> {
    Ok(dist_tuple(&channels::depolarizing(p).map_err(to_py_err)?))
}

/// Error rate entering distillation when a Bell pair with error `p_bell`
/// is injected through noisy encoding (two-qubit gate error `p2`,
/// one-qubit error `p1`).
#[pyfunction]
fn injection_error(p1: f64, p2: f64, p_bell: f64, p_reject: f64) -> PyResult<f64> {
    let params =
        estimators::InjectionParams::new(p1, p2, p_bell, p_reject).map_err(to_py_err)?;
    Ok(estimators::injection_error(&params))
}

/// Probability that post-injection verification rejects a pair.
#[pyfunction]
fn bell_injection_reject(p_reject: f64) -> PyResult<f64> {
    estimators::bell_injection_reject(p_reject).map_err(to_py_err)
}

/// Smallest surface-code distance meeting `p_target` at gate error
/// `p_gate`, with the qubit count of one d x d patch.
#[pyfunction]
fn surface_code_distance(p_gate: f64, p_target: f64) -> PyResult<(u32, u64)> {
    estimators::surface_code_distance(p_gate, p_target).map_err(to_py_err)
}

/// Seam-measurement cost at the smallest adequate distance: returns
/// `(d, bell_pairs, warn_prefactor)`.
#[pyfunction]
fn lattice_surgery_overhead(
    p_gate: f64,
    p_bell: f64,
    p_target: f64,
) -> PyResult<(u32, u64, bool)> {
    let params = estimators::SurgeryParams::new(p_gate, p_bell, p_target).map_err(to_py_err)?;
    let s = estimators::lattice_surgery_overhead(&params).map_err(to_py_err)?;
    Ok((s.d, s.bell_pairs, s.warn_prefactor))
}

/// Closed-form n-pair repetition check in the given basis: returns the
/// acceptance probability and the surviving pair's distribution.
#[pyfunction]
fn repetition_step(
    dist: (f64, f64, f64, f64),
    n: u32,
    basis: &str,
) -> PyResult<(f64, (f64, f64, f64, f64))> {
    let d = dist_from(dist)?;
    let (accept, out) = channels::repetition_step(&d, n, basis_from(basis)?).map_err(to_py_err)?;
    Ok((accept, dist_tuple(&out)))
}

/// Exact joint acceptance and accepted-error mass of one n-qubit parity
/// check level on independent `dist` inputs.
#[pyfunction]
fn exact_parity_stats(n: u32, dist: (f64, f64, f64, f64)) -> PyResult<(f64, f64)> {
    let d = dist_from(dist)?;
    montecarlo::exact_parity_stats(n, &d).map_err(to_py_err)
}

/// Parse a comma-joined sequence into `(id, n, k, d)` tuples.
#[pyfunction]
fn parse_sequence(seq: &str) -> PyResult<Vec<(String, u32, u32, u32)>> {
    let specs = codes::parse_sequence(seq).map_err(to_py_err)?;
    Ok(specs
        .iter()
        .map(|s| (s.id(), s.n(), s.k(), s.d()))
        .collect())
}

/// Closed-form metrics of a sequence on `dist` inputs: overhead, peak
/// memory, residual error, and per-level detail.
#[pyfunction]
#[pyo3(signature = (seq, dist, p0_reject = 0.0, p_target = 1e-12))]
fn evaluate_sequence<'py>(
    py: Python<'py>,
    seq: &str,
    dist: (f64, f64, f64, f64),
    p0_reject: f64,
    p_target: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let specs = codes::parse_sequence(seq).map_err(to_py_err)?;
    let cfg = EvalConfig::new(dist_from(dist)?, p0_reject, p_target).map_err(to_py_err)?;
    let m = analytic::evaluate_sequence(&specs, &cfg).map_err(to_py_err)?;
    metrics_dict(py, &m)
}

/// Depth-first search for the lowest-overhead sequence meeting
/// `p_target` under an `m_max`-qubit buffer. Searches the builtin code
/// list, optionally extended or replaced by a catalog CSV. Returns None
/// when no sequence qualifies.
#[pyfunction]
#[pyo3(signature = (dist, p0_reject, p_target, m_max, l_max = 7, catalog = None, include_builtin = true))]
#[allow(clippy::too_many_arguments)]
fn optimize<'py>(
    py: Python<'py>,
    dist: (f64, f64, f64, f64),
    p0_reject: f64,
    p_target: f64,
    m_max: u64,
    l_max: u32,
    catalog: Option<PathBuf>,
    include_builtin: bool,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let catalog = codes::load_catalog(catalog.as_deref(), include_builtin).map_err(to_py_err)?;
    let cons = SearchConstraints {
        m_max,
        p_target,
        l_max,
        cfg: EvalConfig::new(dist_from(dist)?, p0_reject, p_target).map_err(to_py_err)?,
    };
    let r = optimizer::optimize(&catalog, &cons).map_err(to_py_err)?;
    let Some(best) = r.best else {
        return Ok(None);
    };
    let out = PyDict::new(py);
    let ids: Vec<String> = best.seq.iter().map(|s| s.id()).collect();
    out.set_item("sequence", ids.join(","))?;
    out.set_item("metrics", metrics_dict(py, &best.metrics)?)?;
    out.set_item("nodes_visited", r.nodes_visited)?;
    out.set_item("nodes_pruned", r.nodes_pruned)?;
    out.set_item("viable", r.viable.len())?;
    Ok(Some(out))
}

/// Seeded Monte Carlo estimate of a sequence's failure rate, residual
/// error, and raw cost per output; identical results for any thread
/// count.
#[pyfunction]
#[pyo3(signature = (seq, dist, seed = 1, trials = 100_000, attempt_cap = 1_000_000))]
fn simulate_sequence<'py>(
    py: Python<'py>,
    seq: &str,
    dist: (f64, f64, f64, f64),
    seed: u64,
    trials: u64,
    attempt_cap: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let specs = codes::parse_sequence(seq).map_err(to_py_err)?;
    let d = dist_from(dist)?;
    let cfg = TrialConfig::new(seed, trials, attempt_cap).map_err(to_py_err)?;
    let est = montecarlo::simulate_sequence(&specs, &d, &cfg).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("trials", est.trials)?;
    out.set_item("aborted", est.aborted)?;
    out.set_item("seed", est.seed)?;
    out.set_item("p_fail", est.p_fail_hat.value)?;
    out.set_item("p_fail_radius", est.p_fail_hat.radius)?;
    out.set_item("p_out", est.p_out_hat.value)?;
    out.set_item("p_out_radius", est.p_out_hat.radius)?;
    out.set_item("consumed_per_output", est.consumed_per_output.value)?;
    out.set_item("consumed_radius", est.consumed_per_output.radius)?;
    out.set_item("attempt_histogram", est.attempt_histogram)?;
    Ok(out)
}

#[pymodule]
fn distill_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(depolarizing, m)?)?;
    m.add_function(wrap_pyfunction!(injection_error, m)?)?;
    m.add_function(wrap_pyfunction!(bell_injection_reject, m)?)?;
    m.add_function(wrap_pyfunction!(surface_code_distance, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_surgery_overhead, m)?)?;
    m.add_function(wrap_pyfunction!(repetition_step, m)?)?;
    m.add_function(wrap_pyfunction!(exact_parity_stats, m)?)?;
    m.add_function(wrap_pyfunction!(parse_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_sequence, m)?)?;
    Ok(())
}
