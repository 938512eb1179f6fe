//! Python module `gm_steady`.
//!
//! Structured results (verdicts, reports, certificates, region tables) come
//! back as plain dicts with the same keys as the CLI's JSON reports; fields
//! come back as lists `r`, `u`, `v`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use gm_steady::barriers::{self, eval_barrier, BarrierProfile, Exponents, Problem, SourceModel};
use gm_steady::catalog::{find_example, shipped_examples, ExampleKind};
use gm_steady::certificates;
use gm_steady::kernels::{self, GreenParams};
use gm_steady::radial::{RadialField, RadialGrid};
use gm_steady::region::{sweep_region as sweep, RegionConfig};
use gm_steady::solvers::{self, ScalarRegime, ScalarWeight, SolveReport, SolverOptions};
use gm_steady::Error;

create_exception!(
    gm_steady,
    RefusalError,
    PyException,
    "A hypothesis of the requested construction does not hold."
);

fn to_py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Regime { .. } | Error::Nonexistence { .. } | Error::Infeasible(_) | Error::Divergence { .. } => {
            RefusalError::new_err(msg)
        }
        Error::Internal(_) => PyRuntimeError::new_err(msg),
        Error::Domain(_) | Error::Argument(_) | Error::UndefinedIndex { .. } | Error::Parse { .. } => {
            PyValueError::new_err(msg)
        }
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for gm_steady::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

/// Serializes through JSON so dict keys match the CLI reports.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn source_model(
    source: &str,
    alpha: f64,
    beta: f64,
    rate_a: f64,
    amplitude: Option<f64>,
) -> gm_steady::Result<SourceModel> {
    let model = match source {
        "zero" => return Ok(SourceModel::zero()),
        "exp" => SourceModel::exp_envelope(alpha, beta, rate_a)?,
        "alg" => SourceModel::alg_envelope(alpha, beta, rate_a)?,
        other => {
            return Err(Error::Argument(format!(
                "unknown source {other:?}; expected zero, exp or alg"
            )))
        }
    };
    match amplitude {
        Some(a) => model.with_amplitude(a),
        None => Ok(model),
    }
}

#[allow(clippy::too_many_arguments)]
fn system(
    dimension: u32,
    lam: f64,
    mu: f64,
    p: f64,
    q: f64,
    m: f64,
    s: f64,
    source: &str,
    alpha: f64,
    beta: f64,
    rate_a: f64,
    amplitude: Option<f64>,
) -> PyResult<(Problem, Exponents)> {
    let rho = source_model(source, alpha, beta, rate_a, amplitude).py_err()?;
    Ok((
        Problem::new(dimension, lam, mu, rho).py_err()?,
        Exponents::new(p, q, m, s).py_err()?,
    ))
}

fn solved<'py>(py: Python<'py>, rep: &SolveReport) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("report", to_py(py, rep)?)?;
    out.set_item("r", rep.v.nodes().to_vec())?;
    out.set_item("u", rep.u.as_ref().map(|u| u.values().to_vec()))?;
    out.set_item("v", rep.v.values().to_vec())?;
    Ok(out)
}

/// Strongest verdict for a parameter point of the system.
#[pyfunction]
#[pyo3(signature = (dimension, lam, mu, p, q, m, s=0.0, source="zero", alpha=0.0, beta=0.0, rate_a=1.0, amplitude=None))]
#[allow(clippy::too_many_arguments)]
fn classify<'py>(
    py: Python<'py>,
    dimension: u32,
    lam: f64,
    mu: f64,
    p: f64,
    q: f64,
    m: f64,
    s: f64,
    source: &str,
    alpha: f64,
    beta: f64,
    rate_a: f64,
    amplitude: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let (problem, exps) = system(dimension, lam, mu, p, q, m, s, source, alpha, beta, rate_a, amplitude)?;
    to_py(py, &barriers::classify(&problem, &exps))
}

/// `G_λ(r)` in dimension N, normalized so that `(-Δ + λ) G_λ = δ`.
#[pyfunction]
fn green_lambda(dimension: u32, lam: f64, r: f64) -> PyResult<f64> {
    kernels::green_lambda(GreenParams::new(dimension, lam).py_err()?, r).py_err()
}

#[pyfunction]
fn green_zero(dimension: u32, r: f64) -> PyResult<f64> {
    kernels::green_zero(dimension, r).py_err()
}

/// `ω_N ∫ s^{N-1} G_λ(s) ds`, equal to `1/λ`.
#[pyfunction]
fn kernel_mass(dimension: u32, lam: f64) -> PyResult<f64> {
    kernels::kernel_mass(GreenParams::new(dimension, lam).py_err()?).py_err()
}

/// `W_a(r)` for family "W", `Z_a(r)` for family "Z".
#[pyfunction]
fn barrier(family: &str, rate: f64, r: f64) -> PyResult<f64> {
    let profile = match family {
        "W" | "w" => BarrierProfile::w(rate),
        "Z" | "z" => BarrierProfile::z(rate),
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    }
    .py_err()?;
    Ok(eval_barrier(profile, r))
}

/// Solves the system; raises RefusalError outside the proven regimes unless
/// `force` is set for an infeasible ledger.
#[pyfunction]
#[pyo3(signature = (dimension, lam, mu, p, q, m, s=0.0, source="zero", alpha=0.0, beta=0.0, rate_a=1.0, amplitude=None, force=false))]
#[allow(clippy::too_many_arguments)]
fn solve_system<'py>(
    py: Python<'py>,
    dimension: u32,
    lam: f64,
    mu: f64,
    p: f64,
    q: f64,
    m: f64,
    s: f64,
    source: &str,
    alpha: f64,
    beta: f64,
    rate_a: f64,
    amplitude: Option<f64>,
    force: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let (problem, exps) = system(dimension, lam, mu, p, q, m, s, source, alpha, beta, rate_a, amplitude)?;
    let rep = py
        .detach(|| solvers::solve_system(&problem, &exps, &SolverOptions::default(), force))
        .py_err()?;
    solved(py, &rep)
}

/// Solves `-Δv + shift·v = amplitude·B_γ v^{-s}` with `B = W` ("exp") or `Z` ("alg").
#[pyfunction]
#[pyo3(signature = (dimension, shift, s, gamma, regime="exp", amplitude=1.0))]
fn solve_scalar<'py>(
    py: Python<'py>,
    dimension: u32,
    shift: f64,
    s: f64,
    gamma: f64,
    regime: &str,
    amplitude: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let regime = match regime {
        "exp" => ScalarRegime::Exp { gamma },
        "alg" => ScalarRegime::Alg { gamma },
        other => return Err(PyValueError::new_err(format!("unknown regime {other:?}"))),
    };
    let weight = ScalarWeight::Envelope { amplitude };
    let rep = py
        .detach(|| solvers::solve_singular_scalar(dimension, shift, s, &weight, regime, &SolverOptions::default()))
        .py_err()?;
    solved(py, &rep)
}

/// Solves a shipped example by name.
#[pyfunction]
#[pyo3(signature = (name, force=false))]
fn solve_example<'py>(py: Python<'py>, name: &str, force: bool) -> PyResult<Bound<'py, PyDict>> {
    let ex = find_example(name).py_err()?;
    let opts = SolverOptions::default();
    let rep = py
        .detach(|| match &ex.kind {
            ExampleKind::Scalar {
                dimension,
                shift,
                s,
                amplitude,
                regime,
            } => solvers::solve_singular_scalar(
                *dimension,
                *shift,
                *s,
                &ScalarWeight::Envelope { amplitude: *amplitude },
                *regime,
                &opts,
            ),
            ExampleKind::System { problem, exponents, .. } => solvers::solve_system(problem, exponents, &opts, force),
        })
        .py_err()?;
    solved(py, &rep)
}

/// Names of the shipped examples.
#[pyfunction]
fn examples() -> PyResult<Vec<&'static str>> {
    Ok(shipped_examples().py_err()?.iter().map(|e| e.name).collect())
}

/// Residuals of the bubble pair `u = v = w` on a uniform grid.
#[pyfunction]
#[pyo3(signature = (dimension, p, s, a=1.0, radius=20.0, nodes=50_001))]
fn verify_cor3<'py>(
    py: Python<'py>,
    dimension: u32,
    p: f64,
    s: f64,
    a: f64,
    radius: f64,
    nodes: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let grid = RadialGrid::uniform(radius, nodes).py_err()?;
    let cert = py
        .detach(|| certificates::verify_cor3(dimension, p, s, a, &grid))
        .py_err()?;
    to_py(py, &cert)
}

/// Certificate for fields `u`, `v` tabulated on nodes `r`.
#[pyfunction]
#[pyo3(signature = (r, u, v, dimension, lam, mu, p, q, m, s=0.0, source="zero", alpha=0.0, beta=0.0, rate_a=1.0, amplitude=None))]
#[allow(clippy::too_many_arguments)]
fn verify_solution<'py>(
    py: Python<'py>,
    r: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
    dimension: u32,
    lam: f64,
    mu: f64,
    p: f64,
    q: f64,
    m: f64,
    s: f64,
    source: &str,
    alpha: f64,
    beta: f64,
    rate_a: f64,
    amplitude: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let (problem, exps) = system(dimension, lam, mu, p, q, m, s, source, alpha, beta, rate_a, amplitude)?;
    let grid = RadialGrid::from_nodes(r).py_err()?;
    let u = RadialField::new(grid.clone(), u).py_err()?;
    let v = RadialField::new(grid, v).py_err()?;
    let cert = py
        .detach(|| certificates::verify_solution(&problem, &exps, &u, &v))
        .py_err()?;
    to_py(py, &cert)
}

/// Classifies a parameter lattice. `config` has keys `model`, `base` and
/// `axes` as in the CLI's region config.
#[pyfunction]
#[pyo3(signature = (config, threads=None))]
fn sweep_region<'py>(
    py: Python<'py>,
    config: &Bound<'py, PyDict>,
    threads: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let text: String = py.import("json")?.call_method1("dumps", (config,))?.extract()?;
    let config: RegionConfig = serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let table = py.detach(|| sweep(&config, threads)).py_err()?;
    to_py(py, &table)
}

#[pymodule]
#[pyo3(name = "gm_steady")]
fn gm_steady_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RefusalError", m.py().get_type::<RefusalError>())?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(green_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(green_zero, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_mass, m)?)?;
    m.add_function(wrap_pyfunction!(barrier, m)?)?;
    m.add_function(wrap_pyfunction!(solve_system, m)?)?;
    m.add_function(wrap_pyfunction!(solve_scalar, m)?)?;
    m.add_function(wrap_pyfunction!(solve_example, m)?)?;
    m.add_function(wrap_pyfunction!(examples, m)?)?;
    m.add_function(wrap_pyfunction!(verify_cor3, m)?)?;
    m.add_function(wrap_pyfunction!(verify_solution, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_region, m)?)?;
    Ok(())
}
