use blowuplab::classify::default_horizon;
use blowuplab::colehopf::{eq0_residual_fd, reconstruct_f_uniform};
use blowuplab::diagnostics::{energy as energy_of, g_k as g_k_of};
use blowuplab::elliptic;
use blowuplab::{
    classify as classify_ic, detect_period as detect_period_core, estimate_blowup_time, integrate as integrate_core,
    integrate_two_sided, verify_verdict, DiagnosticsReport, Error, IntegrateOptions, IntegratorKind, OdeParams, State,
    Termination, Trajectory,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::InvalidOptions(_) | Error::BranchMismatch { .. } | Error::NotACharacteristicRoot { .. } => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn kind_from(name: &str) -> PyResult<IntegratorKind> {
    match name {
        "rk4" => Ok(IntegratorKind::Rk4),
        "gauss6" => Ok(IntegratorKind::Gauss6),
        _ => Err(PyValueError::new_err(format!("integrator must be 'rk4' or 'gauss6', got '{name}'"))),
    }
}

/// Coefficients `(A, B)` of `u'' = A u u' + B u^3`.
#[pyclass(name = "Params", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyParams {
    inner: OdeParams,
}

#[pymethods]
impl PyParams {
    #[new]
    fn new(a: f64, b: f64) -> PyResult<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(PyValueError::new_err("A and B must be finite"));
        }
        Ok(Self { inner: OdeParams::from_coeffs(a, b) })
    }

    /// Coefficients for dimension `m > 2`.
    #[staticmethod]
    fn from_dimension(m: f64) -> PyResult<Self> {
        Ok(Self { inner: OdeParams::from_dimension(m).map_err(to_py)? })
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a()
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b()
    }

    #[getter]
    fn m(&self) -> Option<f64> {
        self.inner.m()
    }

    #[getter]
    fn disc(&self) -> f64 {
        self.inner.disc()
    }

    /// `(k_minus, k_plus)`, or `None` when the discriminant is negative.
    #[getter]
    fn roots(&self) -> Option<(f64, f64)> {
        self.inner.roots()
    }

    fn rhs(&self, u: f64, v: f64) -> (f64, f64) {
        self.inner.rhs(&State::new(0.0, u, v))
    }

    fn __repr__(&self) -> String {
        match self.inner.m() {
            Some(m) => format!("Params(A={}, B={}, m={m})", self.inner.a(), self.inner.b()),
            None => format!("Params(A={}, B={})", self.inner.a(), self.inner.b()),
        }
    }
}

fn termination_dict<'py>(py: Python<'py>, t: &Termination) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", t.label())?;
    match *t {
        Termination::BlowUp { t_estimate, direction } => {
            d.set_item("t_estimate", t_estimate)?;
            d.set_item("direction", direction)?;
        }
        Termination::StepUnderflow { t_last } => d.set_item("t_last", t_last)?,
        _ => {}
    }
    Ok(d)
}

fn trajectory_dict<'py>(py: Python<'py>, traj: &Trajectory) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("t", traj.states.iter().map(|s| s.t).collect::<Vec<_>>())?;
    d.set_item("u", traj.states.iter().map(|s| s.u).collect::<Vec<_>>())?;
    d.set_item("du", traj.states.iter().map(|s| s.v).collect::<Vec<_>>())?;
    d.set_item("termination", termination_dict(py, &traj.termination)?)?;
    let estimate = match traj.termination {
        Termination::BlowUp { .. } => estimate_blowup_time(traj).ok(),
        _ => None,
    };
    d.set_item("blowup_estimate", estimate)?;
    Ok(d)
}

fn options(
    t_end: f64,
    tol: Option<f64>,
    record_every: usize,
    threshold: Option<f64>,
    max_steps: Option<usize>,
) -> IntegrateOptions {
    let mut o = IntegrateOptions::new(t_end).with_record_every(record_every);
    if let Some(tol) = tol {
        o.local_tol = tol;
    }
    if let Some(th) = threshold {
        o.blowup_threshold = th;
    }
    if let Some(n) = max_steps {
        o.max_steps = n;
    }
    o
}

/// Integrates from `(t0, u0, v0)` to `t_end`; returns a dict with `t`, `u`,
/// `du`, `termination` and `blowup_estimate`.
#[pyfunction]
#[pyo3(signature = (params, u0, v0, t_end, integrator = "rk4", t0 = 0.0, tol = None, record_every = 1, threshold = None, max_steps = None))]
#[allow(clippy::too_many_arguments)]
fn integrate<'py>(
    py: Python<'py>,
    params: &PyParams,
    u0: f64,
    v0: f64,
    t_end: f64,
    integrator: &str,
    t0: f64,
    tol: Option<f64>,
    record_every: usize,
    threshold: Option<f64>,
    max_steps: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let kind = kind_from(integrator)?;
    let opts = options(t_end, tol, record_every, threshold, max_steps);
    let p = params.inner;
    let traj = py
        .detach(|| integrate_core(&p, &State::new(t0, u0, v0), kind, &opts))
        .map_err(to_py)?;
    trajectory_dict(py, &traj)
}

/// `(verdict, basis)` for the initial condition `(u0, v0)`.
#[pyfunction]
fn classify(params: &PyParams, u0: f64, v0: f64) -> (String, String) {
    let v = classify_ic(&params.inner, u0, v0);
    (v.kind.name().to_string(), v.basis)
}

/// Checks the verdict numerically; `True` on agreement.
#[pyfunction]
#[pyo3(signature = (params, u0, v0, horizon = None))]
fn verify(py: Python<'_>, params: &PyParams, u0: f64, v0: f64, horizon: Option<f64>) -> PyResult<bool> {
    let p = params.inner;
    py.detach(|| {
        let verdict = classify_ic(&p, u0, v0);
        let h = horizon.unwrap_or(default_horizon(verdict.kind));
        verify_verdict(&p, u0, v0, &verdict, h).map(|r| r.pass)
    })
    .map_err(to_py)
}

#[pyfunction]
fn energy(params: &PyParams, u: f64, v: f64) -> f64 {
    energy_of(&params.inner, &State::new(0.0, u, v))
}

#[pyfunction]
fn g_k(u: f64, v: f64, k: f64) -> f64 {
    g_k_of(&State::new(0.0, u, v), k)
}

/// Residuals of the energy and `g_k` laws along a run to `t_end`.
#[pyfunction]
#[pyo3(signature = (params, u0, v0, t_end, integrator = "rk4"))]
fn diagnostics<'py>(
    py: Python<'py>,
    params: &PyParams,
    u0: f64,
    v0: f64,
    t_end: f64,
    integrator: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let kind = kind_from(integrator)?;
    let p = params.inner;
    let report = py
        .detach(|| {
            let traj = integrate_core(&p, &State::new(0.0, u0, v0), kind, &IntegrateOptions::new(t_end))?;
            DiagnosticsReport::for_trajectory(&p, &traj)
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("energy_law_residual_max", report.energy_law_residual_max)?;
    d.set_item("gk_identity_residual_max", report.gk_identity_residual_max)?;
    d.set_item("energy_drift_rel", report.energy_drift_rel)?;
    Ok(d)
}

/// `(periodic, period, closure_error)` of the orbit through `(u0, v0)`.
#[pyfunction]
#[pyo3(signature = (params, u0, v0, t_max, tol = 1e-8))]
fn detect_period(
    py: Python<'_>,
    params: &PyParams,
    u0: f64,
    v0: f64,
    t_max: f64,
    tol: f64,
) -> PyResult<(bool, Option<f64>, f64)> {
    let p = params.inner;
    let r = py
        .detach(|| detect_period_core(&p, &State::new(0.0, u0, v0), t_max, tol))
        .map_err(to_py)?;
    Ok((r.periodic, r.period, r.closure_error))
}

/// Max finite-difference residual of the third-order equation for
/// `f = exp(\int u)` on `[t_lo, t_hi]` with grid step `h`.
#[pyfunction]
#[pyo3(signature = (m, u0, v0, t_lo, t_hi, h = 1e-3))]
fn eq0_residual(py: Python<'_>, m: f64, u0: f64, v0: f64, t_lo: f64, t_hi: f64, h: f64) -> PyResult<f64> {
    let p = OdeParams::from_dimension(m).map_err(to_py)?;
    py.detach(|| {
        let opts = IntegrateOptions::new(t_hi).with_tol(1e-12);
        let traj = integrate_two_sided(&p, &State::new(0.0, u0, v0), IntegratorKind::Gauss6, &opts, t_lo, t_hi)?;
        let profile = reconstruct_f_uniform(&traj, 1.0, h)?;
        eq0_residual_fd(&profile, m)
    })
    .map_err(to_py)
}

#[pyfunction]
fn lemniscate_quarter_period() -> f64 {
    elliptic::lemniscate_quarter_period()
}

/// `(sl(t), sl'(t))`.
#[pyfunction]
fn sl(t: f64) -> PyResult<(f64, f64)> {
    if !t.is_finite() {
        return Err(PyValueError::new_err("t must be finite"));
    }
    Ok(elliptic::sl(t))
}

/// Complete elliptic integral of the first kind for modulus `k`.
#[pyfunction]
fn k_agm(k: f64) -> PyResult<f64> {
    elliptic::k_agm(k).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "blowuplab")]
fn blowuplab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(g_k, m)?)?;
    m.add_function(wrap_pyfunction!(diagnostics, m)?)?;
    m.add_function(wrap_pyfunction!(detect_period, m)?)?;
    m.add_function(wrap_pyfunction!(eq0_residual, m)?)?;
    m.add_function(wrap_pyfunction!(lemniscate_quarter_period, m)?)?;
    m.add_function(wrap_pyfunction!(sl, m)?)?;
    m.add_function(wrap_pyfunction!(k_agm, m)?)?;
    Ok(())
}
