//! Leggett-Garg functionals, delay-time sweeps and violation detection.
//!
//! For a dichotomic `Q` and any macrorealist, non-invasively measured
//! process,
//!
//! ```text
//! L(t1, t2) = ⟨Q(t1) Q(0)⟩ + ⟨Q(t1+t2) Q(t1)⟩ - ⟨Q(t1+t2) Q(0)⟩ <= 1
//! ```
//!
//! and for a stationary process at `t1 = t2 = τ` this reduces to
//! `2⟨Q(τ) Q(0)⟩ - ⟨Q(2τ) Q(0)⟩ <= 1`. Correlators are evaluated with the
//! symmetrized insertion of `Q`, see [`crate::dynamics::symmetrized_insertion`].

use std::f64::consts::{PI, TAU};

use ndarray::Array1;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::dynamics::symmetrized_insertion;
use crate::error::{Error, Result};
use crate::liouville::{trace_functional, vectorize, Superoperator};
use crate::optomech::{DisplacementSolution, ModelParams, OptomechModel};
use crate::qops::{
    dichotomic_observable, DensityMatrix, HilbertDims, OperatorMatrix, CAVITY, MECHANICAL,
};

/// Values above this count as a violation of a unit bound; saturation at
/// `τ = 0` stays below it.
pub const VIOLATION_THRESHOLD: f64 = 1.0 + 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObservableTag {
    Cavity,
    Mechanical,
    Custom,
}

impl ObservableTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ObservableTag::Cavity => "cavity",
            ObservableTag::Mechanical => "mechanical",
            ObservableTag::Custom => "custom",
        }
    }
}

/// Which functional a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LgForm {
    /// `2⟨Q(τ)Q(0)⟩ - ⟨Q(2τ)Q(0)⟩`, the stationary reduction.
    EqualTime,
    /// The three-term functional at `t1 = t2 = τ`.
    General,
    /// The three-term functional with `t1 = τ` and a fixed `t2`.
    FixedSecondDelay(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LgPoint {
    /// First delay `t1` (equal to `t2` in the equal-delay forms).
    pub tau: f64,
    pub t2: f64,
    /// `τ |G| / 2π`.
    pub tau_scaled: f64,
    pub c_t1_0: f64,
    pub c_t12_t1: f64,
    pub c_t12_0: f64,
    pub l_value: f64,
    pub bound: f64,
}

impl LgPoint {
    fn new(tau: f64, t2: f64, coupling: f64, c: [f64; 3], bound: f64) -> Self {
        Self {
            tau,
            t2,
            tau_scaled: tau * coupling / TAU,
            c_t1_0: c[0],
            c_t12_t1: c[1],
            c_t12_0: c[2],
            l_value: c[0] + c[1] - c[2],
            bound,
        }
    }

    pub fn violates(&self) -> bool {
        self.l_value > self.bound * VIOLATION_THRESHOLD
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViolationSummary {
    pub max_l: f64,
    pub argmax_tau: f64,
    pub argmax_tau_scaled: f64,
    /// Maximal runs of consecutive violating grid points, as `(first, last)`
    /// delays.
    pub intervals: Vec<(f64, f64)>,
}

impl ViolationSummary {
    pub fn violated(&self) -> bool {
        !self.intervals.is_empty()
    }
}

/// A swept LG functional.
#[derive(Debug, Clone, PartialEq)]
pub struct LgCurve {
    pub points: Vec<LgPoint>,
    pub observable_tag: ObservableTag,
    pub params_snapshot: Option<(ModelParams, DisplacementSolution)>,
}

impl LgCurve {
    pub fn l_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.l_value).collect()
    }

    pub fn summary(&self) -> ViolationSummary {
        let mut best = &self.points[0];
        for p in &self.points {
            if p.l_value > best.l_value {
                best = p;
            }
        }
        let mut intervals = Vec::new();
        let mut open: Option<(f64, f64)> = None;
        for p in &self.points {
            if p.violates() {
                open = Some(match open {
                    Some((start, _)) => (start, p.tau),
                    None => (p.tau, p.tau),
                });
            } else if let Some(run) = open.take() {
                intervals.push(run);
            }
        }
        intervals.extend(open);
        ViolationSummary {
            max_l: best.l_value,
            argmax_tau: best.tau,
            argmax_tau_scaled: best.tau_scaled,
            intervals,
        }
    }
}

fn check_delay(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

/// Checks that a delay grid is non-empty, non-negative and strictly
/// increasing.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if let Some(t) = grid.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::InvalidGrid(format!("delay {t} is negative or not finite")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("delays must be strictly increasing".into()));
    }
    Ok(())
}

/// `count` evenly spaced delays from `start` to `stop` inclusive.
pub fn uniform_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::InvalidGrid(format!("count must be at least 2, got {count}")));
    }
    if !(start >= 0.0) || !(stop > start) {
        return Err(Error::InvalidGrid(format!(
            "need 0 <= start < stop, got start {start}, stop {stop}"
        )));
    }
    let h = (stop - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|k| if k == count - 1 { stop } else { start + k as f64 * h })
        .collect())
}

/// Returns `(start, step)` when the grid is evenly spaced.
fn uniform_spacing(grid: &[f64]) -> Option<(f64, f64)> {
    if grid.len() < 2 {
        return None;
    }
    let start = grid[0];
    let step = (grid[grid.len() - 1] - start) / (grid.len() - 1) as f64;
    let tol = 1e-12 * grid[grid.len() - 1].abs().max(1.0);
    grid.iter()
        .enumerate()
        .all(|(k, &t)| (t - (start + k as f64 * step)).abs() <= tol)
        .then_some((start, step))
}

/// Generator, observable and initial state of one LG experiment.
#[derive(Debug, Clone)]
pub struct LgProblem {
    liouvillian: Superoperator,
    observable: OperatorMatrix,
    rho0: DensityMatrix,
    /// `|G|`, used only to scale delays.
    coupling: f64,
    bound: f64,
    tag: ObservableTag,
}

impl LgProblem {
    /// Sets up a problem with unit bound; `coupling` is the `|G|` used for
    /// the dimensionless delay axis.
    pub fn new(
        liouvillian: Superoperator,
        observable: OperatorMatrix,
        rho0: DensityMatrix,
        coupling: f64,
    ) -> Result<Self> {
        for dims in [observable.dims(), rho0.dims()] {
            if dims != liouvillian.dims() {
                return Err(Error::DimensionMismatch {
                    expected: liouvillian.dims().as_slice().to_vec(),
                    found: dims.as_slice().to_vec(),
                });
            }
        }
        Ok(Self {
            liouvillian,
            observable,
            rho0,
            coupling,
            bound: 1.0,
            tag: ObservableTag::Custom,
        })
    }

    pub fn with_tag(mut self, tag: ObservableTag) -> Self {
        self.tag = tag;
        self
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = bound;
        self
    }

    pub fn liouvillian(&self) -> &Superoperator {
        &self.liouvillian
    }

    pub fn observable(&self) -> &OperatorMatrix {
        &self.observable
    }

    pub fn rho0(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn tag(&self) -> ObservableTag {
        self.tag
    }

    /// The same experiment under populations-only (fully dephased) dynamics.
    pub fn dephased(&self) -> Self {
        Self {
            liouvillian: self.liouvillian.dephased(),
            ..self.clone()
        }
    }

    /// `2⟨Q(τ)Q(0)⟩ - ⟨Q(2τ)Q(0)⟩`.
    pub fn equal_time(&self, tau: f64) -> Result<LgPoint> {
        check_delay(tau)?;
        let q_row = trace_functional(&self.observable);
        let sigma = symmetrized_insertion(&self.observable, &vectorize(self.rho0.data()));
        let e = self.liouvillian.exp(tau);
        let a = e.apply_vec(&sigma);
        let c1 = q_row.dot(&a).re;
        let c2 = q_row.dot(&e.apply_vec(&a)).re;
        Ok(LgPoint::new(tau, tau, self.coupling, [c1, c1, c2], self.bound))
    }

    /// The three-term functional at independent delays.
    pub fn general(&self, t1: f64, t2: f64) -> Result<LgPoint> {
        check_delay(t1)?;
        check_delay(t2)?;
        let q = &self.observable;
        let q_row = trace_functional(q);
        let rho_vec = vectorize(self.rho0.data());
        let e1 = self.liouvillian.exp(t1);
        let e2 = if t2 == t1 {
            e1.clone()
        } else {
            self.liouvillian.exp(t2)
        };
        let a = e1.apply_vec(&symmetrized_insertion(q, &rho_vec));
        let c_t1_0 = q_row.dot(&a).re;
        let c_t12_0 = q_row.dot(&e2.apply_vec(&a)).re;
        let inserted = symmetrized_insertion(q, &e1.apply_vec(&rho_vec));
        let c_t12_t1 = q_row.dot(&e2.apply_vec(&inserted)).re;
        Ok(LgPoint::new(
            t1,
            t2,
            self.coupling,
            [c_t1_0, c_t12_t1, c_t12_0],
            self.bound,
        ))
    }

    pub fn point(&self, tau: f64, form: LgForm) -> Result<LgPoint> {
        match form {
            LgForm::EqualTime => self.equal_time(tau),
            LgForm::General => self.general(tau, tau),
            LgForm::FixedSecondDelay(t2) => self.general(tau, t2),
        }
    }

    /// Evaluates the functional on every delay of `grid`.
    ///
    /// Evenly spaced grids step a single cached `exp(L h)`; other grids
    /// evaluate each point independently in parallel.
    pub fn sweep(&self, grid: &[f64], form: LgForm) -> Result<LgCurve> {
        validate_grid(grid)?;
        if let LgForm::FixedSecondDelay(t2) = form {
            if !(t2 >= 0.0) {
                return Err(Error::NegativeTime(t2));
            }
        }
        let points = match uniform_spacing(grid) {
            Some((start, step)) => self.sweep_uniform(start, step, grid.len(), form),
            None => grid
                .par_iter()
                .map(|&tau| self.point(tau, form))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(LgCurve {
            points,
            observable_tag: self.tag,
            params_snapshot: None,
        })
    }

    fn sweep_uniform(&self, start: f64, step: f64, count: usize, form: LgForm) -> Vec<LgPoint> {
        let l = &self.liouvillian;
        let q = &self.observable;
        let q_row = trace_functional(q);
        let rho_vec = vectorize(self.rho0.data());
        let sigma = symmetrized_insertion(q, &rho_vec);

        let step_prop = l.exp(step);
        let step2_prop = step_prop.compose(&step_prop).expect("same dims");
        let (at_start, at_twice_start) = if start > 0.0 {
            (Some(l.exp(start)), Some(l.exp(2.0 * start)))
        } else {
            (None, None)
        };
        let shift = |s: &Option<Superoperator>, v: &Array1<C64>| match s {
            Some(p) => p.apply_vec(v),
            None => v.clone(),
        };

        // Q inserted at 0, evolved to τ_k and to 2τ_k (or τ_k + t2)
        let mut a = shift(&at_start, &sigma);
        let mut b = match form {
            LgForm::FixedSecondDelay(t2) => l.exp(t2).apply_vec(&a),
            _ => shift(&at_twice_start, &sigma),
        };
        // state at τ_k and the Heisenberg-evolved Q over the second delay
        let mut state = shift(&at_start, &rho_vec);
        let mut functional = match form {
            LgForm::FixedSecondDelay(t2) => q_row.dot(l.exp(t2).data()),
            _ => match &at_start {
                Some(p) => q_row.dot(p.data()),
                None => q_row.clone(),
            },
        };

        let mut points = Vec::with_capacity(count);
        for k in 0..count {
            let tau = start + k as f64 * step;
            let c1 = q_row.dot(&a).re;
            let c3 = q_row.dot(&b).re;
            let (t2, c2) = match form {
                LgForm::EqualTime => (tau, c1),
                LgForm::General => (tau, functional.dot(&symmetrized_insertion(q, &state)).re),
                LgForm::FixedSecondDelay(t2) => {
                    (t2, functional.dot(&symmetrized_insertion(q, &state)).re)
                }
            };
            points.push(LgPoint::new(tau, t2, self.coupling, [c1, c2, c3], self.bound));

            if k + 1 < count {
                a = step_prop.apply_vec(&a);
                b = match form {
                    LgForm::FixedSecondDelay(_) => step_prop.apply_vec(&b),
                    _ => step2_prop.apply_vec(&b),
                };
                if !matches!(form, LgForm::EqualTime) {
                    state = step_prop.apply_vec(&state);
                }
                if matches!(form, LgForm::General) {
                    functional = functional.dot(step_prop.data());
                }
            }
        }
        points
    }

    /// Golden-section search for the largest `L` on `[lo, hi]`.
    pub fn refine_maximum(&self, lo: f64, hi: f64, form: LgForm, tol: f64) -> Result<LgPoint> {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (lo, hi);
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = self.point(x1, form)?;
        let mut f2 = self.point(x2, form)?;
        while b - a > tol {
            if f1.l_value > f2.l_value {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = self.point(x1, form)?;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = self.point(x2, form)?;
            }
        }
        Ok(if f1.l_value > f2.l_value { f1 } else { f2 })
    }
}

/// Initial state of the model experiments.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum InitialState {
    /// `|1_c, 0_m⟩`.
    #[default]
    SinglePhotonGround,
    /// One photon with the mechanics thermal at the bath occupation.
    SinglePhotonThermal,
}

impl InitialState {
    pub fn build(&self, p: &ModelParams) -> Result<DensityMatrix> {
        match self {
            InitialState::SinglePhotonGround => DensityMatrix::fock(&p.dims(), &[1, 0]),
            InitialState::SinglePhotonThermal => DensityMatrix::product(&[
                DensityMatrix::fock(&HilbertDims::single(p.n_c)?, &[1])?,
                DensityMatrix::thermal(p.n_m, p.n_bar)?,
            ]),
        }
    }
}

/// Builds the model Liouvillian and the dichotomic observable on the
/// requested mode.
pub fn model_problem(
    p: &ModelParams,
    tag: ObservableTag,
    initial: InitialState,
) -> Result<(OptomechModel, LgProblem)> {
    let model = OptomechModel::new(p)?;
    let which = match tag {
        ObservableTag::Cavity => CAVITY,
        ObservableTag::Mechanical => MECHANICAL,
        ObservableTag::Custom => {
            return Err(Error::InvalidParameter {
                name: "observable",
                reason: "model problems use the cavity or mechanical observable".into(),
            })
        }
    };
    let q = dichotomic_observable(&model.dims(), which)?;
    let problem = LgProblem::new(
        model.liouvillian.clone(),
        q,
        initial.build(p)?,
        model.coupling(),
    )?
    .with_tag(tag);
    Ok((model, problem))
}

/// Sweeps a model problem and attaches the parameter snapshot.
pub fn model_sweep(
    p: &ModelParams,
    tag: ObservableTag,
    initial: InitialState,
    grid: &[f64],
    form: LgForm,
) -> Result<LgCurve> {
    let (model, problem) = model_problem(p, tag, initial)?;
    let mut curve = problem.sweep(grid, form)?;
    curve.params_snapshot = Some((model.params, model.displacement));
    Ok(curve)
}

/// One delay of an unbound-observable study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnboundRow {
    pub tau: f64,
    pub c_tau_0: f64,
    pub c_2tau_0: f64,
    /// `2⟨Q(τ)Q(0)⟩ - ⟨Q(2τ)Q(0)⟩`.
    pub combination: f64,
    pub q2_at_tau: f64,
    pub q2_at_2tau: f64,
}

/// The LG combination of an unbound observable against two candidate
/// bounds. Neither bound is proven; exceeding them is reported, not
/// interpreted.
#[derive(Debug, Clone, PartialEq)]
pub struct UnboundReport {
    pub rows: Vec<UnboundRow>,
    /// `max_t ⟨Q(t)²⟩` over `t = 0` and every `τ`, `2τ` on the grid.
    pub max_second_moment: f64,
    /// `⟨Q(0)²⟩`.
    pub initial_second_moment: f64,
    pub exceeds_max_second_moment: Vec<f64>,
    pub exceeds_initial_second_moment: Vec<f64>,
}

fn exceeds(value: f64, bound: f64) -> bool {
    value > bound + 1e-9 * bound.abs().max(1.0)
}

pub fn unbound_lg_study(
    l: &Superoperator,
    q: &OperatorMatrix,
    rho0: &DensityMatrix,
    grid: &[f64],
) -> Result<UnboundReport> {
    validate_grid(grid)?;
    let herm = q.hermiticity_error();
    if herm > 1e-12 {
        return Err(Error::NotHermitian(herm));
    }
    if q.dims() != l.dims() || rho0.dims() != l.dims() {
        return Err(Error::DimensionMismatch {
            expected: l.dims().as_slice().to_vec(),
            found: q.dims().as_slice().to_vec(),
        });
    }
    let q_row = trace_functional(q);
    let q2_row = trace_functional(&(q * q));
    let rho_vec = vectorize(rho0.data());
    let sigma = symmetrized_insertion(q, &rho_vec);
    let initial = q2_row.dot(&rho_vec).re;

    let row = |tau: f64, s1: &Array1<C64>, s2: &Array1<C64>, r1: &Array1<C64>, r2: &Array1<C64>| {
        let c1 = q_row.dot(s1).re;
        let c2 = q_row.dot(s2).re;
        UnboundRow {
            tau,
            c_tau_0: c1,
            c_2tau_0: c2,
            combination: 2.0 * c1 - c2,
            q2_at_tau: q2_row.dot(r1).re,
            q2_at_2tau: q2_row.dot(r2).re,
        }
    };

    let rows = match uniform_spacing(grid) {
        Some((start, step)) => {
            let p1 = l.exp(step);
            let p2 = p1.compose(&p1).expect("same dims");
            let (e1, e2) = (l.exp(start), l.exp(2.0 * start));
            let (mut s1, mut s2) = (e1.apply_vec(&sigma), e2.apply_vec(&sigma));
            let (mut r1, mut r2) = (e1.apply_vec(&rho_vec), e2.apply_vec(&rho_vec));
            let mut rows = Vec::with_capacity(grid.len());
            for k in 0..grid.len() {
                rows.push(row(start + k as f64 * step, &s1, &s2, &r1, &r2));
                s1 = p1.apply_vec(&s1);
                r1 = p1.apply_vec(&r1);
                s2 = p2.apply_vec(&s2);
                r2 = p2.apply_vec(&r2);
            }
            rows
        }
        None => grid
            .par_iter()
            .map(|&tau| {
                let e = l.exp(tau);
                let s1 = e.apply_vec(&sigma);
                let r1 = e.apply_vec(&rho_vec);
                row(tau, &s1, &e.apply_vec(&s1), &r1, &e.apply_vec(&r1))
            })
            .collect::<Vec<_>>(),
    };

    let max_second_moment = rows
        .iter()
        .flat_map(|r| [r.q2_at_tau, r.q2_at_2tau])
        .fold(initial, f64::max);
    let over = |bound: f64| {
        rows.iter()
            .filter(|r| exceeds(r.combination, bound))
            .map(|r| r.tau)
            .collect::<Vec<_>>()
    };
    Ok(UnboundReport {
        exceeds_max_second_moment: over(max_second_moment),
        exceeds_initial_second_moment: over(initial),
        rows,
        max_second_moment,
        initial_second_moment: initial,
    })
}

/// Stationary autocorrelation `C(τ) = c0 e^{-γτ} cos(ωτ)` of a damped,
/// noise-driven classical oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalOscillator {
    pub omega: f64,
    pub gamma: f64,
    pub c0: f64,
}

impl ClassicalOscillator {
    pub fn new(omega: f64, gamma: f64, c0: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega",
                reason: format!("must be positive, got {omega}"),
            });
        }
        if !(gamma >= 0.0) {
            return Err(Error::NegativeRate(gamma));
        }
        Ok(Self { omega, gamma, c0 })
    }

    pub fn correlation(&self, tau: f64) -> f64 {
        self.c0 * (-self.gamma * tau).exp() * (self.omega * tau).cos()
    }

    /// `2C(τ) - C(2τ)`.
    pub fn combination(&self, tau: f64) -> f64 {
        2.0 * self.correlation(tau) - self.correlation(2.0 * tau)
    }

    fn combination_slope(&self, tau: f64) -> f64 {
        let (w, g) = (self.omega, self.gamma);
        let e1 = (-g * tau).exp();
        let e2 = (-2.0 * g * tau).exp();
        self.c0
            * (-2.0 * e1 * (g * (w * tau).cos() + w * (w * tau).sin())
                + 2.0 * e2 * (g * (2.0 * w * tau).cos() + w * (2.0 * w * tau).sin()))
    }

    /// Largest value of `2C(τ) - C(2τ)` over `τ >= 0` and where it occurs.
    ///
    /// Locates the first sign change of the closed-form derivative within
    /// one period and bisects it to machine precision; if the combination
    /// only decreases, the maximum is `c0` at `τ = 0`.
    pub fn peak(&self) -> (f64, f64) {
        let period = TAU / self.omega;
        let samples = 4096;
        let h = period / samples as f64;
        let mut best = (0.0, self.combination(0.0));
        let mut prev = self.combination_slope(h * 1e-3);
        let mut prev_t = h * 1e-3;
        for k in 1..=samples {
            let t = k as f64 * h;
            let s = self.combination_slope(t);
            if prev > 0.0 && s <= 0.0 {
                let (mut lo, mut hi) = (prev_t, t);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.combination_slope(mid) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let t_star = 0.5 * (lo + hi);
                let v = self.combination(t_star);
                if v > best.1 {
                    best = (t_star, v);
                }
                break;
            }
            prev = s;
            prev_t = t;
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalReport {
    pub oscillator: ClassicalOscillator,
    /// Rows in the LG layout: `c_t1_0 = c_t12_t1 = C(τ)`, `c_t12_0 = C(2τ)`,
    /// `bound = C(0)`, `tau_scaled = ωτ / 2π`.
    pub points: Vec<LgPoint>,
    pub peak_tau: f64,
    pub peak_value: f64,
    /// `peak_value - C(0)`.
    pub exceedance: f64,
    pub exceeding_taus: Vec<f64>,
}

/// Evaluates the classical stationary correlator against the `⟨Q(0)²⟩`
/// bound on a delay grid.
pub fn classical_harmonic_demo(
    omega: f64,
    gamma_c: f64,
    c0: f64,
    grid: &[f64],
) -> Result<ClassicalReport> {
    validate_grid(grid)?;
    let osc = ClassicalOscillator::new(omega, gamma_c, c0)?;
    let points: Vec<LgPoint> = grid
        .iter()
        .map(|&tau| {
            let c1 = osc.correlation(tau);
            let c2 = osc.correlation(2.0 * tau);
            LgPoint::new(tau, tau, omega, [c1, c1, c2], c0)
        })
        .collect();
    let (peak_tau, peak_value) = osc.peak();
    let exceeding_taus = points
        .iter()
        .filter(|p| exceeds(p.l_value, c0))
        .map(|p| p.tau)
        .collect();
    Ok(ClassicalReport {
        oscillator: osc,
        points,
        peak_tau,
        peak_value,
        exceedance: peak_value - c0,
        exceeding_taus,
    })
}

/// `ωτ` at which the undamped combination peaks.
pub const CLASSICAL_PEAK_PHASE: f64 = PI / 3.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(validate_grid(&[]).is_err());
        assert!(validate_grid(&[0.0, 0.0]).is_err());
        assert!(validate_grid(&[-1.0, 0.0]).is_err());
        assert!(validate_grid(&[0.0, 1.0, 0.5]).is_err());
        assert!(validate_grid(&[0.0, 0.5, 1.0]).is_ok());
        assert!(uniform_grid(1.0, 1.0, 5).is_err());
        assert!(uniform_grid(0.0, 1.0, 1).is_err());
        let g = uniform_grid(0.0, 1.0, 5).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(uniform_spacing(&g), Some((0.0, 0.25)));
        assert_eq!(uniform_spacing(&[0.0, 0.1, 0.3]), None);
    }

    #[test]
    fn summary_intervals() {
        let mk = |tau: f64, l: f64| LgPoint::new(tau, tau, 1.0, [l, 0.0, 0.0], 1.0);
        let curve = LgCurve {
            points: vec![
                mk(0.0, 1.0),
                mk(1.0, 1.2),
                mk(2.0, 1.3),
                mk(3.0, 0.9),
                mk(4.0, 1.1),
            ],
            observable_tag: ObservableTag::Custom,
            params_snapshot: None,
        };
        let s = curve.summary();
        assert_eq!(s.max_l, 1.3);
        assert_eq!(s.argmax_tau, 2.0);
        assert_eq!(s.intervals, vec![(1.0, 2.0), (4.0, 4.0)]);
        assert!(s.violated());
    }

    #[test]
    fn classical_peak_undamped() {
        let osc = ClassicalOscillator::new(2.0, 0.0, 0.7).unwrap();
        let (t, v) = osc.peak();
        assert!((2.0 * t - CLASSICAL_PEAK_PHASE).abs() < 1e-12);
        assert!((v - 1.5 * 0.7).abs() < 1e-14);
    }

    #[test]
    fn classical_at_zero_delay_is_at_bound() {
        let osc = ClassicalOscillator::new(1.0, 0.3, 2.0).unwrap();
        assert_eq!(osc.combination(0.0), 2.0);
    }

    #[test]
    fn classical_overdamped_has_no_exceedance() {
        let osc = ClassicalOscillator::new(1.0, 10.0, 1.0).unwrap();
        let (t, v) = osc.peak();
        assert_eq!(t, 0.0);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn classical_rejects_bad_parameters() {
        assert!(ClassicalOscillator::new(0.0, 0.1, 1.0).is_err());
        assert!(ClassicalOscillator::new(1.0, -0.1, 1.0).is_err());
    }
}
