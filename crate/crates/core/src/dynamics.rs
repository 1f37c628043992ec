//! Time evolution, steady states and two-time correlators.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, Lu, ONE};
use crate::liouville::{trace_functional, trace_row, unvectorize, vectorize, Superoperator};
use crate::ode::{self, Tolerances};
use crate::optomech::ModelParams;
use crate::qops::{DensityMatrix, OperatorMatrix};

pub const STEADY_STATE_RESIDUAL: f64 = 1e-10;
pub const CONVERGENCE_TOL: f64 = 1e-4;

/// How `exp(L t)` is applied.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Backend {
    /// Dense matrix exponential by scaling and squaring.
    #[default]
    Expm,
    /// Adaptive Dormand-Prince integration of `dρ/dt = L ρ`.
    Adaptive(Tolerances),
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

fn check_dims(l: &Superoperator, op: &OperatorMatrix) -> Result<()> {
    if l.dims() != op.dims() {
        return Err(Error::DimensionMismatch {
            expected: l.dims().as_slice().to_vec(),
            found: op.dims().as_slice().to_vec(),
        });
    }
    Ok(())
}

/// `exp(L t) v` for a vectorized operator.
pub fn evolve_vec(l: &Superoperator, v: &Array1<C64>, t: f64, backend: Backend) -> Result<Array1<C64>> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(v.clone());
    }
    match backend {
        Backend::Expm => Ok(l.exp(t).apply_vec(v)),
        Backend::Adaptive(tol) => ode::integrate(l.data(), v, t, tol),
    }
}

pub fn propagate(l: &Superoperator, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    propagate_with(l, rho0, t, Backend::Expm)
}

/// `ρ(t) = exp(L t) ρ(0)`.
pub fn propagate_with(
    l: &Superoperator,
    rho0: &DensityMatrix,
    t: f64,
    backend: Backend,
) -> Result<DensityMatrix> {
    check_dims(l, rho0.as_operator())?;
    check_time(t)?;
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let out = evolve_vec(l, &vectorize(rho0.data()), t, backend)?;
    let op = OperatorMatrix::new(l.dims().clone(), unvectorize(&out, l.hilbert_dim()))?;
    Ok(DensityMatrix::new_unchecked(op))
}

/// One cached `exp(L h)` for stepping along a uniform grid.
///
/// Read-only after construction, so a single cache can be shared between
/// threads evaluating different grid points.
#[derive(Debug, Clone)]
pub struct PropagatorCache {
    liouvillian: Superoperator,
    step: f64,
    step_propagator: Array2<C64>,
}

impl PropagatorCache {
    pub fn new(l: &Superoperator, step: f64) -> Result<Self> {
        check_time(step)?;
        Ok(Self {
            liouvillian: l.clone(),
            step,
            step_propagator: l.exp(step).data().clone(),
        })
    }

    pub fn liouvillian(&self) -> &Superoperator {
        &self.liouvillian
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn step_propagator(&self) -> &Array2<C64> {
        &self.step_propagator
    }

    /// Advances a vectorized operator by one step.
    pub fn advance(&self, v: &Array1<C64>) -> Array1<C64> {
        self.step_propagator.dot(v)
    }

    /// Advances a row functional by one step (`r -> r exp(L h)`), i.e. the
    /// Heisenberg-picture evolution of an observable.
    pub fn advance_functional(&self, r: &Array1<C64>) -> Array1<C64> {
        r.dot(&self.step_propagator)
    }

    pub fn advance_by(&self, v: &Array1<C64>, steps: usize) -> Array1<C64> {
        (0..steps).fold(v.clone(), |acc, _| self.advance(&acc))
    }
}

/// Stationary state of `L`, with one population equation replaced by the
/// unit-trace constraint.
pub fn steady_state(l: &Superoperator) -> Result<DensityMatrix> {
    let d = l.hilbert_dim();
    let n = d * d;
    let mut a = l.data().clone();
    a.row_mut(0).assign(&trace_row(d));
    let lu = Lu::factor(a);
    let ratio = lu.pivot_ratio();
    if ratio < 1e-13 {
        return Err(Error::DegenerateSteadyState(format!(
            "constrained system is singular (pivot ratio {ratio:e})"
        )));
    }
    let mut rhs = Array1::zeros(n);
    rhs[0] = ONE;
    let x = lu.solve_vec(&rhs);
    let residual = l.apply_vec(&x).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if residual > STEADY_STATE_RESIDUAL {
        return Err(Error::DegenerateSteadyState(format!(
            "residual {residual:e} exceeds {STEADY_STATE_RESIDUAL:e}"
        )));
    }
    let m = unvectorize(&x, d);
    let herm = (&m + &linalg::adjoint(&m)) * C64::from(0.5);
    Ok(DensityMatrix::new_unchecked(OperatorMatrix::new(
        l.dims().clone(),
        herm,
    )?))
}

/// `vec(½ (Q X + X Q))`.
///
/// For a dichotomic `Q` with eigenprojectors `Π±` this equals
/// `Π₊ X Π₊ - Π₋ X Π₋`: the post-measurement state weighted by the outcome.
pub fn symmetrized_insertion(q: &OperatorMatrix, v: &Array1<C64>) -> Array1<C64> {
    let d = q.dim();
    let x = unvectorize(v, d);
    let qx = q.data().dot(&x);
    let xq = x.dot(q.data());
    vectorize(&((qx + xq) * C64::from(0.5)))
}

/// `Tr[X]` of a vectorized operator.
pub fn vec_trace(v: &Array1<C64>, d: usize) -> C64 {
    (0..d).map(|i| v[i + i * d]).sum()
}

/// `⟨Q(t1 + t2) Q(t1)⟩` by the regression theorem: evolve to `t1`, insert
/// `Q` symmetrically, evolve by `t2`, close with `Tr[Q ·]`.
pub fn two_time_correlator(
    l: &Superoperator,
    q: &OperatorMatrix,
    rho0: &DensityMatrix,
    t1: f64,
    t2: f64,
) -> Result<f64> {
    two_time_correlator_with(l, q, rho0, t1, t2, Backend::Expm)
}

pub fn two_time_correlator_with(
    l: &Superoperator,
    q: &OperatorMatrix,
    rho0: &DensityMatrix,
    t1: f64,
    t2: f64,
    backend: Backend,
) -> Result<f64> {
    check_dims(l, q)?;
    check_dims(l, rho0.as_operator())?;
    check_time(t1)?;
    check_time(t2)?;
    let at_t1 = evolve_vec(l, &vectorize(rho0.data()), t1, backend)?;
    let inserted = symmetrized_insertion(q, &at_t1);
    let at_t2 = evolve_vec(l, &inserted, t2, backend)?;
    Ok(trace_functional(q).dot(&at_t2).re)
}

/// One rung of a truncation ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStep {
    pub n_c: usize,
    pub n_m: usize,
    /// Max absolute deviation between this truncation's curve and the next.
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub tolerance: f64,
    pub steps: Vec<ConvergenceStep>,
    /// First truncation whose curve agrees with the next one.
    pub first_pass: Option<(usize, usize)>,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.first_pass.is_some()
    }

    pub fn max_deviation(&self) -> f64 {
        self.steps.first().map_or(f64::NAN, |s| s.deviation)
    }
}

fn max_curve_deviation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "curves of different length");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Compares the curve at `(N_c, N_m)` with `(N_c + 1, N_m + 1)`.
pub fn truncation_convergence<F>(p: &ModelParams, curve: F) -> Result<ConvergenceReport>
where
    F: Fn(&ModelParams) -> Result<Vec<f64>>,
{
    convergence_ladder(p, curve, p.n_c.max(p.n_m) + 1)
}

/// Raises both truncations one level at a time, starting at `p`, until
/// two consecutive curves agree within [`CONVERGENCE_TOL`] or the larger
/// truncation would exceed `max_level`.
pub fn convergence_ladder<F>(p: &ModelParams, curve: F, max_level: usize) -> Result<ConvergenceReport>
where
    F: Fn(&ModelParams) -> Result<Vec<f64>>,
{
    let mut steps = Vec::new();
    let mut current = p.clone();
    let mut current_curve = curve(&current)?;
    let mut first_pass = None;
    while current.n_c.max(current.n_m) < max_level {
        let next = current.with_truncation(current.n_c + 1, current.n_m + 1);
        let next_curve = curve(&next)?;
        let deviation = max_curve_deviation(&current_curve, &next_curve);
        let passed = deviation < CONVERGENCE_TOL;
        steps.push(ConvergenceStep {
            n_c: current.n_c,
            n_m: current.n_m,
            deviation,
            passed,
        });
        if passed {
            first_pass = Some((current.n_c, current.n_m));
            break;
        }
        current = next;
        current_curve = next_curve;
    }
    Ok(ConvergenceReport {
        tolerance: CONVERGENCE_TOL,
        steps,
        first_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::{lindblad_dissipator, liouvillian};
    use crate::qops::{destroy, destroy_on, dichotomic_observable, expect, number, HilbertDims};

    fn decay(n: usize, kappa: f64) -> Superoperator {
        lindblad_dissipator(&destroy(n).unwrap(), kappa).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let l = decay(3, 0.4);
        let rho = DensityMatrix::fock(l.dims(), &[2]).unwrap();
        assert_eq!(propagate(&l, &rho, 0.0).unwrap(), rho);
        assert_eq!(propagate(&l, &rho, -1.0), Err(Error::NegativeTime(-1.0)));
    }

    #[test]
    fn single_mode_decay() {
        let kappa = 0.3;
        let l = decay(4, kappa);
        let rho = DensityMatrix::fock(l.dims(), &[1]).unwrap();
        let n = number(4).unwrap();
        for k in 0..=50 {
            let t = k as f64 * 0.1 / kappa;
            let out = propagate(&l, &rho, t).unwrap();
            let exact = (-kappa * t).exp();
            let got = expect(&n, &out).unwrap().re;
            assert!(((got - exact) / exact).abs() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn steady_state_detailed_balance() {
        let n = 30;
        let n_bar = 0.5;
        let gamma = 0.2;
        let a = destroy(n).unwrap();
        let l = liouvillian(
            &OperatorMatrix::zeros(a.dims().clone()),
            &[(a.clone(), gamma * (n_bar + 1.0)), (a.adjoint(), gamma * n_bar)],
        )
        .unwrap();
        let rho = steady_state(&l).unwrap();
        rho.check_invariants().unwrap();
        let occ = expect(&number(n).unwrap(), &rho).unwrap().re;
        assert!((occ - n_bar).abs() < 1e-10);
    }

    #[test]
    fn undriven_cavity_relaxes_to_vacuum() {
        let dims = HilbertDims::new(vec![3, 2]).unwrap();
        let c = destroy_on(&dims, 0).unwrap();
        let m = destroy_on(&dims, 1).unwrap();
        let h = &(&c.adjoint() * &c) + &(&m.adjoint() * &m);
        let l = liouvillian(&h, &[(c, 0.1), (m, 0.01)]).unwrap();
        let rho = steady_state(&l).unwrap();
        assert!((rho.data()[[0, 0]].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_system_has_no_unique_steady_state() {
        let h = number(3).unwrap();
        let l = liouvillian(&h, &[]).unwrap();
        assert!(matches!(
            steady_state(&l),
            Err(Error::DegenerateSteadyState(_))
        ));
    }

    #[test]
    fn correlator_trivial_cases() {
        let dims = HilbertDims::new(vec![3, 3]).unwrap();
        let c = destroy_on(&dims, 0).unwrap();
        let m = destroy_on(&dims, 1).unwrap();
        let h = &(&m.adjoint() * &c) + &(&c.adjoint() * &m);
        let l = liouvillian(&h, &[(c, 0.1)]).unwrap();
        let rho = DensityMatrix::fock(&dims, &[1, 0]).unwrap();
        let q = dichotomic_observable(&dims, 0).unwrap();
        let at_zero = two_time_correlator(&l, &q, &rho, 0.7, 0.0).unwrap();
        assert!((at_zero - 1.0).abs() < 1e-12);
        let id = OperatorMatrix::identity(dims.clone());
        for t in [0.0, 0.5, 3.0] {
            let v = two_time_correlator(&l, &id, &rho, t, 2.0 * t).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cache_matches_direct_exponential() {
        let l = decay(4, 0.25);
        let cache = PropagatorCache::new(&l, 0.3).unwrap();
        let rho = DensityMatrix::fock(l.dims(), &[3]).unwrap();
        let v = vectorize(rho.data());
        let stepped = cache.advance_by(&v, 7);
        let direct = l.exp(2.1).apply_vec(&v);
        let diff = (&stepped - &direct).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-13);
    }

    #[test]
    fn ladder_stops_at_first_pass() {
        let p = ModelParams::default().with_truncation(2, 2);
        let report = convergence_ladder(
            &p,
            |q| Ok(vec![1.0 / (q.n_c as f64).powi(6)]),
            10,
        )
        .unwrap();
        // 1/n^6 differences: n=5 -> 6 is 4.4e-5
        assert_eq!(report.first_pass, Some((5, 5)));
        assert_eq!(report.steps.len(), 4);
    }
}
