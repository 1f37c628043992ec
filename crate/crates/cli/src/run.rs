//! Resolves a [`RunConfig`] into engine calls and renders the outputs.

use std::cell::RefCell;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::time::Instant;

use optolg::dynamics::{convergence_ladder, steady_state, ConvergenceReport};
use optolg::leggett_garg::{unbound_lg_study, LgCurve, LgPoint};
use optolg::optomech::{critical_drive, effective_detuning, solve_displacements, DisplacementSolution};
use optolg::qnd::{compensation_drive, dispersive_report, FeasibilityThresholds, ReadoutParams};
use optolg::qops::{destroy_on, expect};
use optolg::{
    classical_harmonic_demo, default_figure2_params, model_problem, DensityMatrix, Error,
    InitialState, LgForm, ModelParams, ObservableTag, OptomechModel, Regime, C64, CAVITY,
    MECHANICAL,
};

use crate::config::{ConfigError, RunConfig};
use crate::output::{self, Series};

/// A failed run, mapped onto the process exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Bad command line, config text or parameter values (exit 2).
    Invalid(String),
    /// A solver did not converge (exit 3).
    Solver(String),
    /// The truncation convergence gate failed (exit 4).
    Gate(String),
    /// Anything else, e.g. I/O (exit 1).
    Other(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Gate(_) => 4,
            Failure::Other(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Invalid(_) => "invalid-input",
            Failure::Solver(_) => "solver",
            Failure::Gate(_) => "convergence-gate",
            Failure::Other(_) => "io",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Solver(m) | Failure::Gate(m) | Failure::Other(m) => m,
        }
    }

    /// Single-line, machine-readable form written to stderr.
    pub fn line(&self) -> String {
        let msg = self.message().replace(['\n', '\r'], " ");
        format!("error: code={} kind={} message={msg}", self.code(), self.kind())
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CriticalDriving { .. }
            | Error::IntegratorFailure { .. }
            | Error::DegenerateSteadyState(_) => Failure::Solver(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

/// Rendered outputs; nothing touches the file system until the whole run
/// has succeeded.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outputs {
    pub csv: Option<String>,
    pub svg: Option<String>,
    pub report: String,
}

fn missing(key: &str) -> Failure {
    Failure::Invalid(format!("missing required key `{key}`"))
}

/// Frequencies are divided by `omega_m` and times multiplied by it.
struct Units {
    omega_m: f64,
}

fn units(cfg: &RunConfig) -> Result<Units> {
    if cfg.choice("units") == Some("physical") && !cfg.is_set("omega_m") {
        return Err(Failure::Invalid("units = physical requires `omega_m`".into()));
    }
    let omega_m = cfg.float("omega_m").unwrap_or(1.0);
    if !(omega_m > 0.0) {
        return Err(Failure::Invalid(format!("`omega_m` must be positive, got {omega_m}")));
    }
    Ok(Units { omega_m })
}

fn regime(cfg: &RunConfig) -> Regime {
    match cfg.choice("regime") {
        Some("strong") => Regime::Strong,
        _ => Regime::Weak,
    }
}

/// Model parameters in units of `omega_m`, with the drive resolved.
pub fn model_params(cfg: &RunConfig) -> Result<ModelParams> {
    let u = units(cfg)?;
    let regime = regime(cfg);
    let mut p = default_figure2_params(regime);
    let freq = |key: &str, default: f64| cfg.float(key).map_or(default, |v| v / u.omega_m);
    p.delta = freq("delta", p.delta);
    p.kappa = freq("kappa", p.kappa);
    p.gamma = freq("gamma", p.gamma);
    p.g = cfg.float("g").unwrap_or(p.g);
    p.n_bar = cfg.float("n_bar").unwrap_or(p.n_bar);
    p.n_c = cfg.int("n_c").unwrap_or(p.n_c);
    p.n_m = cfg.int("n_m").unwrap_or(p.n_m);
    p.rwa_only = cfg.flag("rwa").unwrap_or(p.rwa_only);
    p.include_nonlinear_term = cfg.flag("nonlinear_term").unwrap_or(p.include_nonlinear_term);
    p.include_mechanical_linear_terms = cfg
        .flag("mechanical_linear_terms")
        .unwrap_or(p.include_mechanical_linear_terms);
    p.validate()?;

    match (cfg.float("drive"), cfg.float("coupling")) {
        (Some(_), Some(_)) => Err(Failure::Invalid(
            "`drive` and `coupling` are mutually exclusive".into(),
        )),
        (Some(drive), None) => {
            p.drive_amplitude = drive / u.omega_m;
            Ok(p)
        }
        (None, coupling) => {
            let target = coupling.map_or(
                match regime {
                    Regime::Weak => optolg::optomech::WEAK_COUPLING,
                    Regime::Strong => optolg::optomech::STRONG_COUPLING,
                },
                |c| c / u.omega_m,
            );
            let p = p.with_coupling(target)?;
            let reached = solve_displacements(&p)?.coupling();
            if (reached - target).abs() > 1e-6 * target.max(1e-12) {
                return Err(Failure::Solver(format!(
                    "coupling {target} is not reachable on the stable branch (solver settled at {reached})"
                )));
            }
            Ok(p)
        }
    }
}

fn grid_spec(cfg: &RunConfig) -> Result<(f64, f64, usize)> {
    let start = cfg.float("grid_start").ok_or_else(|| missing("grid_start"))?;
    let stop = cfg.float("grid_stop").ok_or_else(|| missing("grid_stop"))?;
    let count = cfg.int("grid_count").ok_or_else(|| missing("grid_count"))?;
    if count < 2 {
        return Err(Failure::Invalid(format!("grid_count must be at least 2, got {count}")));
    }
    if !(start >= 0.0 && stop > start) {
        return Err(Failure::Invalid(format!(
            "grid needs 0 <= start < stop, got start {start}, stop {stop}"
        )));
    }
    Ok((start, stop, count))
}

/// Delays in engine time units. `rate` converts the scaled axis:
/// `τ = s 2π / rate`.
fn delays(cfg: &RunConfig, rate: f64, time_scale: f64) -> Result<Vec<f64>> {
    let (start, stop, count) = grid_spec(cfg)?;
    let factor = match cfg.choice("grid_units") {
        Some("time") => time_scale,
        _ => TAU / rate,
    };
    Ok(optolg::uniform_grid(start * factor, stop * factor, count)?)
}

fn second_delay(cfg: &RunConfig, rate: f64, time_scale: f64) -> Result<f64> {
    let t2 = cfg.float("t2").ok_or_else(|| missing("t2"))?;
    if !(t2 >= 0.0) {
        return Err(Failure::Invalid(format!("`t2` must be non-negative, got {t2}")));
    }
    Ok(match cfg.choice("grid_units") {
        Some("time") => t2 * time_scale,
        _ => t2 * TAU / rate,
    })
}

fn observable(cfg: &RunConfig, experiment: &str) -> ObservableTag {
    match cfg.choice("observable") {
        Some("mechanical") => ObservableTag::Mechanical,
        Some(_) => ObservableTag::Cavity,
        None if experiment == "lg-sweep-mechanical" => ObservableTag::Mechanical,
        None => ObservableTag::Cavity,
    }
}

fn initial(cfg: &RunConfig) -> InitialState {
    match cfg.choice("initial") {
        Some("thermal") => InitialState::SinglePhotonThermal,
        _ => InitialState::SinglePhotonGround,
    }
}

fn form(cfg: &RunConfig) -> LgForm {
    match cfg.choice("form") {
        Some("equal-time") => LgForm::EqualTime,
        _ => LgForm::General,
    }
}

fn fmt_c(z: C64) -> String {
    if z.im < 0.0 {
        format!("{} - {}i", z.re, -z.im)
    } else {
        format!("{} + {}i", z.re, z.im)
    }
}

struct Report {
    text: String,
}

impl Report {
    fn new(experiment: &str, cfg: &RunConfig) -> Self {
        let mut text = format!("optolg run report\nexperiment: {experiment}\n\n[config]\n");
        text.push_str(&cfg.echo());
        text.push_str("[end config]\n");
        Self { text }
    }

    fn section(&mut self, name: &str) {
        let _ = write!(self.text, "\n[{name}]\n");
    }

    fn line(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{key} = {value}");
    }

    /// Floats with an exponent when very small or large.
    fn num(&mut self, key: &str, value: f64) {
        let _ = writeln!(self.text, "{key} = {value:?}");
    }

    fn note(&mut self, text: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{text}");
    }

    fn model(&mut self, p: &ModelParams, d: &DisplacementSolution, omega_m: f64) {
        self.section("model");
        self.note(format!("frequencies in units of omega_m = {omega_m:?}"));
        self.line("delta", p.delta);
        self.line("g", p.g);
        self.line("drive", p.drive_amplitude);
        self.line("kappa", p.kappa);
        self.line("gamma", p.gamma);
        self.line("n_bar", p.n_bar);
        self.line("n_c", p.n_c);
        self.line("n_m", p.n_m);
        self.line("rwa", p.rwa_only);
        self.line("nonlinear_term", p.include_nonlinear_term);
        self.line("mechanical_linear_terms", p.include_mechanical_linear_terms);
        self.section("displacement");
        self.line("alpha", fmt_c(d.alpha));
        self.line("beta", fmt_c(d.beta));
        self.num("|G|", d.coupling());
        self.num("effective_detuning", effective_detuning(p, d));
        self.num("critical_drive", critical_drive(p));
        self.line("iterations", d.iterations);
        self.num("residual", d.residual);
    }

    fn violation(&mut self, curve: &LgCurve, axis: &str) {
        let s = curve.summary();
        let bound = curve.points[0].bound;
        self.section("violation");
        self.line("bound", bound);
        self.num("max L", s.max_l);
        self.num("tau*", s.argmax_tau);
        self.num(&format!("tau* ({axis})"), s.argmax_tau_scaled);
        let scaled = |tau: f64| {
            curve
                .points
                .iter()
                .find(|p| p.tau == tau)
                .map_or(tau, |p| p.tau_scaled)
        };
        let intervals: Vec<String> = s
            .intervals
            .iter()
            .map(|&(a, b)| format!("[{}, {}]", scaled(a), scaled(b)))
            .collect();
        self.line(
            &format!("violating intervals ({axis})"),
            if intervals.is_empty() {
                "none".to_string()
            } else {
                intervals.join(" ")
            },
        );
        if s.violated() {
            self.note(format!("verdict: max L > {bound} (violation)"));
        } else {
            self.note(format!("verdict: max L <= {bound} (no violation)"));
        }
    }

    fn convergence(&mut self, report: &ConvergenceReport) {
        self.section("convergence");
        self.line("tolerance", report.tolerance);
        for step in &report.steps {
            self.note(format!(
                "({}, {}) -> ({}, {}): max deviation {} {}",
                step.n_c,
                step.n_m,
                step.n_c + 1,
                step.n_m + 1,
                step.deviation,
                if step.passed { "PASS" } else { "FAIL" }
            ));
        }
        self.line("status", if report.passed() { "PASS" } else { "FAIL" });
    }
}

/// Raises the truncation until consecutive curves agree, keeping every
/// curve for plotting.
/// `(n_c, n_m, curve)` at one truncation.
type Rung = (usize, usize, Vec<LgPoint>);

fn ladder(
    p: &ModelParams,
    tag: ObservableTag,
    init: InitialState,
    grid: &[f64],
    form: LgForm,
    max_level: usize,
) -> Result<(ConvergenceReport, Vec<Rung>)> {
    let curves = RefCell::new(Vec::new());
    let report = convergence_ladder(
        p,
        |q| {
            let (_, problem) = model_problem(q, tag, init)?;
            let curve = problem.sweep(grid, form)?;
            let values = curve.l_values();
            curves.borrow_mut().push((q.n_c, q.n_m, curve.points));
            Ok(values)
        },
        max_level,
    )?;
    Ok((report, curves.into_inner()))
}

fn gate_failure(report: &ConvergenceReport) -> Failure {
    Failure::Gate(format!(
        "truncation convergence FAIL: max deviation {} exceeds {}",
        report.max_deviation(),
        report.tolerance
    ))
}

fn lg_run(cfg: &RunConfig, experiment: &str) -> Result<Outputs> {
    let u = units(cfg)?;
    let p = model_params(cfg)?;
    let tag = observable(cfg, experiment);
    let init = initial(cfg);
    let (model, problem) = model_problem(&p, tag, init)?;
    let coupling = model.coupling();
    let grid = delays(cfg, coupling, u.omega_m)?;
    let form = if experiment == "lg-general" {
        LgForm::FixedSecondDelay(second_delay(cfg, coupling, u.omega_m)?)
    } else {
        form(cfg)
    };
    let mut curve = problem.sweep(&grid, form)?;
    curve.params_snapshot = Some((model.params.clone(), model.displacement));

    let mut report = Report::new(experiment, cfg);
    report.model(&p, &model.displacement, u.omega_m);
    report.section("sweep");
    report.line("observable", tag.as_str());
    report.line("form", format!("{form:?}"));
    report.line("points", grid.len());
    report.violation(&curve, "tau |G| / 2pi");

    if cfg.flag("convergence_gate").unwrap_or(false) {
        let max_level = cfg.int("convergence_max").unwrap_or(p.n_c.max(p.n_m) + 1);
        let (conv, _) = ladder(&p, tag, init, &grid, form, max_level)?;
        if !conv.passed() {
            return Err(gate_failure(&conv));
        }
        report.convergence(&conv);
    }

    let svg = cfg.is_set("svg").then(|| {
        output::svg(
            &[Series {
                label: tag.as_str().into(),
                points: &curve.points,
            }],
            1.0,
            "tau |G| / 2pi",
        )
    });
    Ok(Outputs {
        csv: Some(output::csv(&curve.points, 1.0 / u.omega_m)),
        svg,
        report: report.text,
    })
}

fn unbound_run(cfg: &RunConfig) -> Result<Outputs> {
    let u = units(cfg)?;
    let p = model_params(cfg)?;
    let model = OptomechModel::new(&p)?;
    let dims = model.dims();
    let which = cfg.choice("unbound_observable").unwrap_or("cavity-number");
    let mode = if which.starts_with("cavity") { CAVITY } else { MECHANICAL };
    let a = destroy_on(&dims, mode)?;
    let q = if which.ends_with("number") {
        &a.adjoint() * &a
    } else {
        &a + &a.adjoint()
    };
    let rho0 = initial(cfg).build(&p)?;
    let coupling = model.coupling();
    let grid = delays(cfg, coupling, u.omega_m)?;
    let study = unbound_lg_study(&model.liouvillian, &q, &rho0, &grid)?;

    let bound = study.max_second_moment;
    let points: Vec<LgPoint> = study
        .rows
        .iter()
        .map(|r| LgPoint {
            tau: r.tau,
            t2: r.tau,
            tau_scaled: r.tau * coupling / TAU,
            c_t1_0: r.c_tau_0,
            c_t12_t1: r.c_tau_0,
            c_t12_0: r.c_2tau_0,
            l_value: r.combination,
            bound,
        })
        .collect();

    let mut report = Report::new("unbound-study", cfg);
    report.model(&p, &model.displacement, u.omega_m);
    report.section("unbound");
    report.line("observable", which);
    report.line("combination", "2<Q(tau)Q(0)> - <Q(2tau)Q(0)>");
    report.num("max_t <Q(t)^2> bound", study.max_second_moment);
    report.num("<Q(0)^2> bound", study.initial_second_moment);
    let scaled = |ts: &[f64]| -> String {
        if ts.is_empty() {
            "none".into()
        } else {
            ts.iter()
                .map(|t| format!("{}", t * coupling / TAU))
                .collect::<Vec<_>>()
                .join(" ")
        }
    };
    report.line(
        "exceeds max_t <Q(t)^2> at tau |G| / 2pi",
        scaled(&study.exceeds_max_second_moment),
    );
    report.line(
        "exceeds <Q(0)^2> at tau |G| / 2pi",
        scaled(&study.exceeds_initial_second_moment),
    );
    report.note("neither bound is proven for unbound observables; exceedances are reported only");

    let svg = cfg.is_set("svg").then(|| {
        output::svg(
            &[Series {
                label: which.into(),
                points: &points,
            }],
            bound,
            "tau |G| / 2pi",
        )
    });
    Ok(Outputs {
        csv: Some(output::csv(&points, 1.0 / u.omega_m)),
        svg,
        report: report.text,
    })
}

fn classical_run(cfg: &RunConfig) -> Result<Outputs> {
    let omega = cfg.float("classical_omega").unwrap_or(1.0);
    let gamma = cfg.float("classical_gamma").unwrap_or(0.0);
    let c0 = cfg.float("classical_c0").unwrap_or(1.0);
    if !(omega > 0.0) {
        return Err(Failure::Invalid(format!("`classical_omega` must be positive, got {omega}")));
    }
    let grid = delays(cfg, omega, 1.0)?;
    let demo = classical_harmonic_demo(omega, gamma, c0, &grid)?;

    let mut report = Report::new("classical-demo", cfg);
    report.section("classical");
    report.line("C(tau)", "c0 exp(-gamma tau) cos(omega tau)");
    report.line("omega", omega);
    report.line("gamma", gamma);
    report.line("c0", c0);
    report.num("peak tau", demo.peak_tau);
    report.num("peak omega tau", omega * demo.peak_tau);
    report.num("peak 2C(tau) - C(2tau)", demo.peak_value);
    report.num("exceedance over C(0)", demo.exceedance);
    report.line(
        "grid points above C(0)",
        demo.exceeding_taus.len(),
    );
    let curve = LgCurve {
        points: demo.points.clone(),
        observable_tag: ObservableTag::Custom,
        params_snapshot: None,
    };
    report.violation(&curve, "omega tau / 2pi");

    let svg = cfg.is_set("svg").then(|| {
        output::svg(
            &[Series {
                label: "classical".into(),
                points: &demo.points,
            }],
            c0,
            "omega tau / 2pi",
        )
    });
    Ok(Outputs {
        csv: Some(output::csv(&demo.points, 1.0)),
        svg,
        report: report.text,
    })
}

fn steadystate_run(cfg: &RunConfig) -> Result<Outputs> {
    let u = units(cfg)?;
    let p = model_params(cfg)?;
    let model = OptomechModel::new(&p)?;
    let rho = steady_state(&model.liouvillian)?;
    let dims = model.dims();
    let c = destroy_on(&dims, CAVITY)?;
    let m = destroy_on(&dims, MECHANICAL)?;
    let occupation = |a: &optolg::OperatorMatrix, rho: &DensityMatrix| -> Result<f64> {
        Ok(expect(&(&a.adjoint() * a), rho)?.re)
    };
    let purity = rho.data().iter().map(|z| z.norm_sqr()).sum::<f64>();

    let mut report = Report::new("steadystate", cfg);
    report.model(&p, &model.displacement, u.omega_m);
    report.section("steady state");
    report.line("cooling regime", p.is_cooling_regime());
    report.num("<c+c>", occupation(&c, &rho)?);
    report.num("<d+d>", occupation(&m, &rho)?);
    report.line("bath n_bar", p.n_bar);
    report.num("purity", purity);
    report.num("min eigenvalue", rho.min_eigenvalue());
    report.num("trace", rho.as_operator().trace().re);
    Ok(Outputs {
        report: report.text,
        ..Outputs::default()
    })
}

fn displacement_run(cfg: &RunConfig) -> Result<Outputs> {
    let u = units(cfg)?;
    let p = model_params(cfg)?;
    let d = solve_displacements(&p)?;
    let mut report = Report::new("displacement", cfg);
    report.model(&p, &d, u.omega_m);
    Ok(Outputs {
        report: report.text,
        ..Outputs::default()
    })
}

fn feasibility_run(cfg: &RunConfig) -> Result<Outputs> {
    let u = units(cfg)?;
    let need = |key: &str| cfg.float(key).ok_or_else(|| missing(key));
    let alpha = match (cfg.float("alpha_re"), cfg.float("alpha_im")) {
        (None, None) => solve_displacements(&model_params(cfg)?)?.alpha,
        (re, im) => C64::new(re.unwrap_or(0.0), im.unwrap_or(0.0)),
    };
    let defaults = FeasibilityThresholds::default();
    let thresholds = FeasibilityThresholds {
        max_detuning_ratio: cfg.float("max_detuning_ratio").unwrap_or(defaults.max_detuning_ratio),
        much_less_factor: cfg.float("much_less_factor").unwrap_or(defaults.much_less_factor),
        compensation_cap: cfg.float("compensation_cap").unwrap_or(defaults.compensation_cap),
    };
    let readout = ReadoutParams {
        epsilon: need("qubit_epsilon")?,
        omega_c: need("readout_omega_c")?,
        omega_drive: need("readout_omega_d")?,
        lambda: need("qubit_lambda")?,
        alpha,
        g: cfg.float("g").unwrap_or(default_figure2_params(regime(cfg)).g),
        omega_m: u.omega_m,
    };
    let r = dispersive_report(&readout, &thresholds)?;
    let comp = compensation_drive(&readout, &thresholds);
    let verdict = |pass: bool| if pass { "PASS" } else { "FAIL" };

    let mut report = Report::new("feasibility", cfg);
    report.section("frames");
    report.num("delta_prime", r.shifts.delta_prime);
    report.num("delta", r.shifts.delta_bias);
    report.section("dispersive readout");
    report.line("alpha", fmt_c(alpha));
    report.num("chi", r.chi);
    report.line(
        "|delta| / lambda",
        format!(
            "{:?} (limit < {:?}) {}",
            r.detuning_ratio.value,
            r.detuning_ratio.limit,
            verdict(r.detuning_ratio.pass)
        ),
    );
    report.line(
        "back-action lambda^3 / delta^2",
        format!(
            "{:?} (limit < {:?}) {}",
            r.back_action.value,
            r.back_action.limit,
            verdict(r.back_action.pass)
        ),
    );
    report.num("cross-shift", r.cross_shift);
    report.num("cross-shift / chi", r.cross_shift_ratio);
    report.section("compensation drive");
    report.num("amplitude", comp.amplitude);
    report.num("phase", comp.phase);
    report.line(
        "cap",
        format!(
            "{} {}",
            comp.cap,
            if comp.feasible { "feasible" } else { "infeasible: amplitude exceeds cap" }
        ),
    );
    Ok(Outputs {
        report: report.text,
        ..Outputs::default()
    })
}

fn convergence_run(cfg: &RunConfig) -> Result<Outputs> {
    let u = units(cfg)?;
    let p = model_params(cfg)?;
    let tag = observable(cfg, "convergence");
    let init = initial(cfg);
    let coupling = solve_displacements(&p)?.coupling();
    let grid = delays(cfg, coupling, u.omega_m)?;
    let form = form(cfg);
    let max_level = cfg.int("convergence_max").unwrap_or(p.n_c.max(p.n_m) + 1);
    let (conv, curves) = ladder(&p, tag, init, &grid, form, max_level)?;
    if cfg.flag("convergence_gate").unwrap_or(true) && !conv.passed() {
        return Err(gate_failure(&conv));
    }

    let mut report = Report::new("convergence", cfg);
    let d = solve_displacements(&p)?;
    report.model(&p, &d, u.omega_m);
    report.section("sweep");
    report.line("observable", tag.as_str());
    report.convergence(&conv);

    let (_, _, last) = curves.last().expect("ladder evaluates at least one curve");
    let svg = cfg.is_set("svg").then(|| {
        let series: Vec<Series> = curves
            .iter()
            .map(|(nc, nm, pts)| Series {
                label: format!("N = ({nc}, {nm})"),
                points: pts,
            })
            .collect();
        output::svg(&series, 1.0, "tau |G| / 2pi")
    });
    Ok(Outputs {
        csv: Some(output::csv(last, 1.0 / u.omega_m)),
        svg,
        report: report.text,
    })
}

/// Runs `experiment` and renders its outputs.
pub fn run(cfg: &RunConfig, experiment: &str) -> Result<Outputs> {
    let started = Instant::now();
    let produces_curve = !matches!(experiment, "steadystate" | "displacement" | "feasibility");
    if !produces_curve {
        for key in ["csv", "svg"] {
            if cfg.is_set(key) {
                return Err(Failure::Invalid(format!(
                    "experiment `{experiment}` produces no curve; remove `{key}`"
                )));
            }
        }
    }
    let mut out = match experiment {
        "lg-sweep-cavity" | "lg-sweep-mechanical" | "lg-general" => lg_run(cfg, experiment),
        "unbound-study" => unbound_run(cfg),
        "classical-demo" => classical_run(cfg),
        "steadystate" => steadystate_run(cfg),
        "displacement" => displacement_run(cfg),
        "feasibility" => feasibility_run(cfg),
        "convergence" => convergence_run(cfg),
        other => Err(Failure::Invalid(format!("unknown experiment `{other}`"))),
    }?;
    if !cfg.is_set("csv") {
        out.csv = None;
    }
    let _ = writeln!(out.report, "\nwall-clock = {:.3} s", started.elapsed().as_secs_f64());
    Ok(out)
}
