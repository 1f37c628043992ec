//! Python bindings. Builds as the `optolg_py` extension module.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use optolg::leggett_garg::ObservableTag;
use optolg::qnd::{compensation_drive, dispersive_report, FeasibilityThresholds, ReadoutParams};
use optolg::{
    classical_harmonic_demo, default_figure2_params, model_sweep, solve_displacements, Error,
    InitialState, LgCurve, LgForm, LgPoint, ModelParams, Regime,
};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::CriticalDriving { .. }
        | Error::IntegratorFailure { .. }
        | Error::DegenerateSteadyState(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Model parameters in units of the mechanical frequency.
#[pyclass(name = "Params", skip_from_py_object)]
#[derive(Clone)]
pub struct Params {
    #[pyo3(get, set)]
    pub delta: f64,
    #[pyo3(get, set)]
    pub omega_m: f64,
    #[pyo3(get, set)]
    pub g: f64,
    #[pyo3(get, set)]
    pub drive: f64,
    #[pyo3(get, set)]
    pub kappa: f64,
    #[pyo3(get, set)]
    pub gamma: f64,
    #[pyo3(get, set)]
    pub n_bar: f64,
    #[pyo3(get, set)]
    pub n_c: usize,
    #[pyo3(get, set)]
    pub n_m: usize,
    #[pyo3(get, set)]
    pub rwa: bool,
    #[pyo3(get, set)]
    pub nonlinear_term: bool,
    #[pyo3(get, set)]
    pub mechanical_linear_terms: bool,
}

impl From<&ModelParams> for Params {
    fn from(p: &ModelParams) -> Self {
        Params {
            delta: p.delta,
            omega_m: p.omega_m,
            g: p.g,
            drive: p.drive_amplitude,
            kappa: p.kappa,
            gamma: p.gamma,
            n_bar: p.n_bar,
            n_c: p.n_c,
            n_m: p.n_m,
            rwa: p.rwa_only,
            nonlinear_term: p.include_nonlinear_term,
            mechanical_linear_terms: p.include_mechanical_linear_terms,
        }
    }
}

impl Params {
    fn model(&self) -> ModelParams {
        ModelParams {
            delta: self.delta,
            omega_m: self.omega_m,
            g: self.g,
            drive_amplitude: self.drive,
            kappa: self.kappa,
            gamma: self.gamma,
            n_bar: self.n_bar,
            n_c: self.n_c,
            n_m: self.n_m,
            rwa_only: self.rwa,
            include_nonlinear_term: self.nonlinear_term,
            include_mechanical_linear_terms: self.mechanical_linear_terms,
        }
    }
}

#[pymethods]
impl Params {
    /// Defaults for `"weak"` or `"strong"` coupling.
    #[new]
    #[pyo3(signature = (regime = "weak"))]
    fn new(regime: &str) -> PyResult<Self> {
        let regime = match regime {
            "weak" => Regime::Weak,
            "strong" => Regime::Strong,
            other => return Err(PyValueError::new_err(format!("unknown regime `{other}`"))),
        };
        Ok(Params::from(&default_figure2_params(regime)))
    }

    fn validate(&self) -> PyResult<()> {
        self.model().validate().map_err(to_py)
    }

    /// A copy whose drive reaches `|G| = target`.
    fn with_coupling(&self, target: f64) -> PyResult<Self> {
        let p = self.model().with_coupling(target).map_err(to_py)?;
        Ok(Params::from(&p))
    }

    fn __repr__(&self) -> String {
        format!("Params({:?})", self.model())
    }
}

/// Steady-state displacements `alpha`, `beta` and the effective coupling.
#[pyfunction]
fn displacement<'py>(py: Python<'py>, params: PyRef<'py, Params>) -> PyResult<Bound<'py, PyDict>> {
    let sol = solve_displacements(&params.model()).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("alpha", sol.alpha)?;
    d.set_item("beta", sol.beta)?;
    d.set_item("g_eff", sol.g_eff)?;
    d.set_item("coupling", sol.coupling())?;
    d.set_item("iterations", sol.iterations)?;
    d.set_item("residual", sol.residual)?;
    Ok(d)
}

fn columns<'py>(py: Python<'py>, points: &[LgPoint]) -> PyResult<Bound<'py, PyDict>> {
    let col = |f: fn(&LgPoint) -> f64| points.iter().map(f).collect::<Vec<f64>>();
    let d = PyDict::new(py);
    d.set_item("tau", col(|p| p.tau))?;
    d.set_item("t2", col(|p| p.t2))?;
    d.set_item("tau_scaled", col(|p| p.tau_scaled))?;
    d.set_item("c_t1_0", col(|p| p.c_t1_0))?;
    d.set_item("c_t12_t1", col(|p| p.c_t12_t1))?;
    d.set_item("c_t12_0", col(|p| p.c_t12_0))?;
    d.set_item("L", col(|p| p.l_value))?;
    d.set_item("bound", col(|p| p.bound))?;
    Ok(d)
}

fn curve_dict<'py>(py: Python<'py>, curve: &LgCurve) -> PyResult<Bound<'py, PyDict>> {
    let d = columns(py, &curve.points)?;
    let s = curve.summary();
    d.set_item("max_l", s.max_l)?;
    d.set_item("argmax_tau", s.argmax_tau)?;
    d.set_item("argmax_tau_scaled", s.argmax_tau_scaled)?;
    d.set_item("violated", s.violated())?;
    d.set_item("intervals", s.intervals.clone())?;
    Ok(d)
}

/// LG sweep of the linearized model over delays `grid` (engine time).
/// `form` is `"general"`, `"equal-time"` or `"fixed-t2"` (needs `t2`).
#[pyfunction]
#[pyo3(signature = (params, grid, observable = "cavity", form = "general", t2 = None, initial = "ground"))]
fn lg_sweep<'py>(
    py: Python<'py>,
    params: PyRef<'py, Params>,
    grid: Vec<f64>,
    observable: &str,
    form: &str,
    t2: Option<f64>,
    initial: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let tag = match observable {
        "cavity" => ObservableTag::Cavity,
        "mechanical" => ObservableTag::Mechanical,
        other => return Err(PyValueError::new_err(format!("unknown observable `{other}`"))),
    };
    let form = match (form, t2) {
        ("general", None) => LgForm::General,
        ("equal-time", None) => LgForm::EqualTime,
        ("fixed-t2", Some(t2)) => LgForm::FixedSecondDelay(t2),
        ("fixed-t2", None) => return Err(PyValueError::new_err("form `fixed-t2` needs `t2`")),
        (other, _) => {
            return Err(PyValueError::new_err(format!(
                "form `{other}` takes no `t2` or is unknown"
            )))
        }
    };
    let initial = match initial {
        "ground" => InitialState::SinglePhotonGround,
        "thermal" => InitialState::SinglePhotonThermal,
        other => return Err(PyValueError::new_err(format!("unknown initial state `{other}`"))),
    };
    let p = params.model();
    let curve = py
        .detach(|| model_sweep(&p, tag, initial, &grid, form))
        .map_err(to_py)?;
    curve_dict(py, &curve)
}

/// Damped classical correlation `c0 exp(-gamma tau) cos(omega tau)` in the LG layout.
#[pyfunction]
#[pyo3(signature = (grid, omega = 1.0, gamma = 0.0, c0 = 1.0))]
fn classical_demo<'py>(
    py: Python<'py>,
    grid: Vec<f64>,
    omega: f64,
    gamma: f64,
    c0: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = classical_harmonic_demo(omega, gamma, c0, &grid).map_err(to_py)?;
    let d = columns(py, &r.points)?;
    d.set_item("peak_tau", r.peak_tau)?;
    d.set_item("peak_value", r.peak_value)?;
    d.set_item("exceedance", r.exceedance)?;
    d.set_item("exceeding_taus", r.exceeding_taus)?;
    Ok(d)
}

/// Dispersive-readout checks and the compensation drive.
#[pyfunction]
#[pyo3(signature = (epsilon, omega_c, omega_drive, lam, alpha = Complex64::new(0.0, 0.0), g = 0.0, omega_m = 1.0))]
#[allow(clippy::too_many_arguments)]
fn feasibility<'py>(
    py: Python<'py>,
    epsilon: f64,
    omega_c: f64,
    omega_drive: f64,
    lam: f64,
    alpha: Complex64,
    g: f64,
    omega_m: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let p = ReadoutParams {
        epsilon,
        omega_c,
        omega_drive,
        lambda: lam,
        alpha,
        g,
        omega_m,
    };
    let t = FeasibilityThresholds::default();
    let r = dispersive_report(&p, &t).map_err(to_py)?;
    let comp = compensation_drive(&p, &t);
    let d = PyDict::new(py);
    d.set_item("delta_prime", r.shifts.delta_prime)?;
    d.set_item("delta", r.shifts.delta_bias)?;
    d.set_item("chi", r.chi)?;
    d.set_item("detuning_ratio", r.detuning_ratio.value)?;
    d.set_item("detuning_ok", r.detuning_ratio.pass)?;
    d.set_item("back_action", r.back_action.value)?;
    d.set_item("back_action_ok", r.back_action.pass)?;
    d.set_item("cross_shift", r.cross_shift)?;
    d.set_item("cross_shift_ratio", r.cross_shift_ratio)?;
    d.set_item("all_pass", r.all_pass())?;
    d.set_item("compensation_amplitude", comp.amplitude)?;
    d.set_item("compensation_phase", comp.phase)?;
    d.set_item("compensation_feasible", comp.feasible)?;
    Ok(d)
}

#[pyfunction]
fn uniform_grid(start: f64, stop: f64, count: usize) -> PyResult<Vec<f64>> {
    optolg::uniform_grid(start, stop, count).map_err(to_py)
}

#[pymodule]
fn optolg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_function(wrap_pyfunction!(displacement, m)?)?;
    m.add_function(wrap_pyfunction!(lg_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(classical_demo, m)?)?;
    m.add_function(wrap_pyfunction!(feasibility, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_grid, m)?)?;
    Ok(())
}
