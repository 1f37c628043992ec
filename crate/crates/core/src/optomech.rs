//! The driven optomechanical model in the displaced, rotating frame.
//!
//! Starting from `Δ a†a + ω_m b†b + g ω_m (b + b†) a†a + Ω (a + a†)`, both
//! modes are shifted by their coherent amplitudes, `a -> c + α` and
//! `b -> d + β`. The remaining generator is time independent:
//!
//! ```text
//! H = (Δ + 2 g ω_m β) c†c + ω_m d†d
//!     + g ω_m (d + d†)(α* c + α c†) + g ω_m (d + d†) c†c
//! ```
//!
//! with cavity loss `κ` and a thermal mechanical bath `(Γ, N̄)`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::liouville::{linear_drift, liouvillian, Superoperator};
use crate::qops::{destroy_on, HilbertDims, OperatorMatrix, CAVITY, MECHANICAL};

pub const FIXED_POINT_DAMPING: f64 = 0.5;
pub const FIXED_POINT_MAX_ITER: usize = 10_000;
pub const FIXED_POINT_TOL: f64 = 1e-13;

/// Physical parameters and numerical truncations of the model.
///
/// Frequencies are angular; the engine is unit-agnostic but the defaults
/// and the command line work in units of `ω_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Cavity detuning Δ from the drive.
    pub delta: f64,
    pub omega_m: f64,
    /// Dimensionless single-photon coupling.
    pub g: f64,
    /// Drive amplitude Ω.
    pub drive_amplitude: f64,
    pub kappa: f64,
    pub gamma: f64,
    /// Thermal occupation of the mechanical bath.
    pub n_bar: f64,
    pub n_c: usize,
    pub n_m: usize,
    /// Keep only the excitation-conserving part of the bilinear coupling.
    pub rwa_only: bool,
    /// Keep `g ω_m (d + d†) c†c`.
    pub include_nonlinear_term: bool,
    /// Add the mechanical frame-shift dissipation term. Off by default.
    pub include_mechanical_linear_terms: bool,
}

impl Default for ModelParams {
    fn default() -> Self {
        default_figure2_params(Regime::Weak)
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        fn check(name: &'static str, ok: bool, reason: impl Into<String>) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: reason.into(),
                })
            }
        }
        let finite = [
            ("delta", self.delta),
            ("omega_m", self.omega_m),
            ("g", self.g),
            ("drive_amplitude", self.drive_amplitude),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("n_bar", self.n_bar),
        ];
        for (name, v) in finite {
            check(name, v.is_finite(), format!("must be finite, got {v}"))?;
        }
        check("omega_m", self.omega_m > 0.0, "must be positive")?;
        check("kappa", self.kappa >= 0.0, "must be non-negative")?;
        check("gamma", self.gamma >= 0.0, "must be non-negative")?;
        check("n_bar", self.n_bar >= 0.0, "must be non-negative")?;
        if self.n_c < 2 {
            return Err(Error::InvalidTruncation(self.n_c));
        }
        if self.n_m < 2 {
            return Err(Error::InvalidTruncation(self.n_m));
        }
        Ok(())
    }

    pub fn dims(&self) -> HilbertDims {
        HilbertDims::new(vec![self.n_c, self.n_m]).expect("validated truncations")
    }

    /// Resolved-sideband cooling conditions: red detuning and a cavity
    /// linewidth below the mechanical frequency.
    pub fn is_cooling_regime(&self) -> bool {
        self.delta > 0.0 && self.kappa < self.omega_m
    }

    /// Rescales every frequency by `ω_m`, so that `ω_m = 1`.
    pub fn normalized(&self) -> Self {
        let s = self.omega_m;
        Self {
            delta: self.delta / s,
            omega_m: 1.0,
            drive_amplitude: self.drive_amplitude / s,
            kappa: self.kappa / s,
            gamma: self.gamma / s,
            ..self.clone()
        }
    }

    pub fn with_truncation(&self, n_c: usize, n_m: usize) -> Self {
        Self {
            n_c,
            n_m,
            ..self.clone()
        }
    }

    /// Chooses the drive amplitude so that the self-consistent coupling
    /// has modulus `target`, keeping every other parameter.
    pub fn with_coupling(&self, target: f64) -> Result<Self> {
        Ok(Self {
            drive_amplitude: drive_for_coupling(self, target)?,
            ..self.clone()
        })
    }

    fn nonlinear_shift(&self) -> f64 {
        4.0 * self.omega_m * self.g * self.g
    }
}

/// Drive amplitude giving `|G| = target`.
///
/// With `a = |α| = target / (g ω_m)`, the displacement equation fixes
/// `Ω = a |Δ - 4 ω_m g² a² - iκ/2|` exactly.
pub fn drive_for_coupling(p: &ModelParams, target: f64) -> Result<f64> {
    if !(p.g > 0.0) {
        return Err(Error::InvalidParameter {
            name: "g",
            reason: "a positive coupling is needed to reach a target |G|".into(),
        });
    }
    if !(target >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "coupling",
            reason: format!("target |G| must be non-negative, got {target}"),
        });
    }
    let a = target / (p.g * p.omega_m);
    let den = C64::new(p.delta - p.nonlinear_shift() * a * a, -0.5 * p.kappa);
    Ok(a * den.norm())
}

/// Self-consistent coherent amplitudes of the driven modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementSolution {
    pub alpha: C64,
    /// `β = -g |α|²`.
    pub beta: C64,
    /// Effective coupling `G = g ω_m α`.
    pub g_eff: C64,
    pub iterations: usize,
    /// `|α Δ - 4 ω_m g² α |α|² + Ω - iκα/2|` at the returned α.
    pub residual: f64,
}

impl DisplacementSolution {
    pub fn coupling(&self) -> f64 {
        self.g_eff.norm()
    }
}

/// Residuals of the two displacement equations under both readings of the
/// cavity-loss term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementResiduals {
    /// Loss entering as `-iκα/2`, the reading the solver uses.
    pub cavity: f64,
    /// Loss entering as a bare `-iκ`.
    pub cavity_bare_kappa: f64,
    /// `ω_m β + ω_m g |α|²`.
    pub mechanical: f64,
}

pub fn displacement_residuals(p: &ModelParams, alpha: C64, beta: C64) -> DisplacementResiduals {
    let i = C64::i();
    let coupled = alpha * p.delta
        + alpha * (2.0 * p.omega_m * p.g) * (beta + beta.conj())
        + p.drive_amplitude;
    DisplacementResiduals {
        cavity: (coupled - i * (0.5 * p.kappa) * alpha).norm(),
        cavity_bare_kappa: (coupled - i * p.kappa).norm(),
        mechanical: (beta * p.omega_m + p.omega_m * p.g * alpha.norm_sqr()).norm(),
    }
}

/// `|α|²` at the lower turning point of the modulus equation, when the
/// response is bistable.
fn turning_point(p: &ModelParams) -> Option<f64> {
    let k = p.nonlinear_shift();
    let disc = p.delta * p.delta - 0.75 * p.kappa * p.kappa;
    if k == 0.0 || p.delta <= 0.0 || disc <= 0.0 {
        return None;
    }
    Some((2.0 * p.delta - disc.sqrt()) / (3.0 * k))
}

/// Estimate of the largest drive for which the low-amplitude branch exists.
///
/// Exact for bistable parameters (the local maximum of
/// `Ω² = x ((Δ - 4 ω_m g² x)² + κ²/4)`); otherwise the order-of-magnitude
/// scale `ω_m / g`.
pub fn critical_drive(p: &ModelParams) -> f64 {
    match turning_point(p) {
        Some(x) => {
            let u = p.delta - p.nonlinear_shift() * x;
            (x * (u * u + 0.25 * p.kappa * p.kappa)).sqrt()
        }
        None if p.g == 0.0 => f64::INFINITY,
        None => p.omega_m / p.g.abs(),
    }
}

/// Solves `α Δ - 4 ω_m g² α |α|² + Ω - iκα/2 = 0` with `β = -g |α|²`.
///
/// Damped fixed-point iteration `α <- -Ω / (Δ - 4 ω_m g² |α|² - iκ/2)`
/// seeded with the decoupled solution, then a short Newton polish. Only
/// the branch continuously connected to `g = 0` is accepted.
pub fn solve_displacements(p: &ModelParams) -> Result<DisplacementSolution> {
    p.validate()?;
    let k = p.nonlinear_shift();
    let omega = p.drive_amplitude;
    let half_kappa = 0.5 * p.kappa;
    let critical = || Error::CriticalDriving {
        iterations: FIXED_POINT_MAX_ITER,
        drive: omega,
        critical_drive: critical_drive(p),
    };
    let update = |alpha: C64| -omega / C64::new(p.delta - k * alpha.norm_sqr(), -half_kappa);

    let mut alpha = -omega / C64::new(p.delta, -half_kappa);
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: "Δ = 0 with κ = 0 gives no finite displacement".into(),
        });
    }
    let mut iterations = 0;
    let mut converged = k == 0.0 || omega == 0.0;
    while !converged {
        if iterations >= FIXED_POINT_MAX_ITER {
            return Err(critical());
        }
        let next = (1.0 - FIXED_POINT_DAMPING) * alpha + FIXED_POINT_DAMPING * update(alpha);
        iterations += 1;
        if !next.re.is_finite() || !next.im.is_finite() {
            return Err(critical());
        }
        converged = (next - alpha).norm() <= FIXED_POINT_TOL * alpha.norm().max(1.0);
        alpha = next;
    }

    if k != 0.0 && omega != 0.0 {
        alpha = newton_polish(p, alpha);
        if let Some(x_turn) = turning_point(p) {
            if alpha.norm_sqr() > x_turn {
                return Err(Error::CriticalDriving {
                    iterations,
                    drive: omega,
                    critical_drive: critical_drive(p),
                });
            }
        }
    }

    let beta = C64::from(-p.g * alpha.norm_sqr());
    let residual = displacement_residuals(p, alpha, beta).cavity;
    Ok(DisplacementSolution {
        alpha,
        beta,
        g_eff: alpha * (p.g * p.omega_m),
        iterations,
        residual,
    })
}

/// Newton steps on `F(α) = α (Δ - k|α|² - iκ/2) + Ω`, treating α and α*
/// as independent variables.
fn newton_polish(p: &ModelParams, mut alpha: C64) -> C64 {
    let k = p.nonlinear_shift();
    let f = |a: C64| a * C64::new(p.delta - k * a.norm_sqr(), -0.5 * p.kappa) + p.drive_amplitude;
    for _ in 0..4 {
        let fa = f(alpha);
        let d_alpha = C64::new(p.delta - 2.0 * k * alpha.norm_sqr(), -0.5 * p.kappa);
        let d_conj = -k * alpha * alpha;
        let det = d_alpha.norm_sqr() - d_conj.norm_sqr();
        if det.abs() < 1e-300 {
            break;
        }
        let step = (-fa * d_alpha.conj() + d_conj * fa.conj()) / det;
        let candidate = alpha + step;
        if f(candidate).norm() >= fa.norm() {
            break;
        }
        alpha = candidate;
    }
    alpha
}

/// Detuning of the displaced cavity mode, `Δ + 2 g ω_m β`.
pub fn effective_detuning(p: &ModelParams, d: &DisplacementSolution) -> f64 {
    p.delta + 2.0 * p.g * p.omega_m * d.beta.re
}

/// Linearized Hamiltonian on the cavity ⊗ mechanics space.
pub fn build_hamiltonian(p: &ModelParams, d: &DisplacementSolution) -> Result<OperatorMatrix> {
    p.validate()?;
    let dims = p.dims();
    let c = destroy_on(&dims, CAVITY)?;
    let m = destroy_on(&dims, MECHANICAL)?;
    let cd = c.adjoint();
    let md = m.adjoint();
    let n_c = &cd * &c;
    let n_m = &md * &m;
    let gw = p.g * p.omega_m;
    let detuning = p.delta + 2.0 * gw * d.beta;

    let mut h = &n_c.scale(detuning) + &(p.omega_m * &n_m);
    let coupling = if p.rwa_only {
        &(&md * &c).scale(d.alpha.conj()) + &(&m * &cd).scale(d.alpha)
    } else {
        let quad = &m + &md;
        &quad * &(&c.scale(d.alpha.conj()) + &cd.scale(d.alpha))
    };
    h = &h + &(gw * &coupling);
    if p.include_nonlinear_term {
        h = &h + &(gw * &(&(&m + &md) * &n_c));
    }
    Ok(h)
}

/// `[(c, κ), (d, Γ(N̄+1)), (d†, ΓN̄)]`; the heating channel is omitted
/// when `N̄ = 0`.
pub fn build_collapse_ops(
    p: &ModelParams,
    _d: &DisplacementSolution,
) -> Result<Vec<(OperatorMatrix, f64)>> {
    p.validate()?;
    let dims = p.dims();
    let c = destroy_on(&dims, CAVITY)?;
    let m = destroy_on(&dims, MECHANICAL)?;
    let mut ops = vec![(c, p.kappa), (m.clone(), p.gamma * (p.n_bar + 1.0))];
    if p.n_bar > 0.0 {
        ops.push((m.adjoint(), p.gamma * p.n_bar));
    }
    Ok(ops)
}

/// `(Γ/2)[(β* d - β d†) ρ + ρ (β d† - β* d)]`.
pub fn mechanical_linear_term(p: &ModelParams, d: &DisplacementSolution) -> Result<Superoperator> {
    let m = destroy_on(&p.dims(), MECHANICAL)?;
    let a = &m.scale(d.beta.conj()) - &m.adjoint().scale(d.beta);
    linear_drift(&a, p.gamma)
}

/// Which of the two illustrative parameter sets to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `|G| = 0.05 ω_m`: counter-rotating terms are a small correction.
    Weak,
    /// `|G| = 0.3 ω_m`: counter-rotating terms visibly modulate the curves.
    Strong,
}

pub const WEAK_COUPLING: f64 = 0.05;
pub const STRONG_COUPLING: f64 = 0.3;

/// Illustrative parameter sets in units of `ω_m`.
///
/// Both share `κ = 0.05`, `Γ = 1e-4`, `N̄ = 0` and `g = 0.01`, with Ω
/// chosen to hit the target `|G|`. The weak set uses `Δ = ω_m`. At
/// `|G| = 0.3` that detuning puts the required amplitude on the unstable
/// middle branch of the displacement equation, so the strong set instead
/// uses `Δ = ω_m + 2|G|²/ω_m`, which keeps the displaced cavity resonant
/// with the mechanics and the amplitude on the lower branch.
pub fn default_figure2_params(regime: Regime) -> ModelParams {
    let base = ModelParams {
        delta: 1.0,
        omega_m: 1.0,
        g: 0.01,
        drive_amplitude: 0.0,
        kappa: 0.05,
        gamma: 1e-4,
        n_bar: 0.0,
        n_c: 4,
        n_m: 4,
        rwa_only: false,
        include_nonlinear_term: true,
        include_mechanical_linear_terms: false,
    };
    let (p, target) = match regime {
        Regime::Weak => (base, WEAK_COUPLING),
        Regime::Strong => (
            ModelParams {
                delta: resonant_detuning(1.0, STRONG_COUPLING),
                n_c: 5,
                n_m: 5,
                ..base
            },
            STRONG_COUPLING,
        ),
    };
    p.with_coupling(target).expect("g > 0 in defaults")
}

/// Bare detuning for which the displaced cavity is resonant with the
/// mechanics at coupling `|G|`: `Δ + 2 g ω_m β = ω_m`.
pub fn resonant_detuning(omega_m: f64, coupling: f64) -> f64 {
    omega_m + 2.0 * coupling * coupling / omega_m
}

/// Everything needed to evolve the model: displacements, generator pieces
/// and the assembled Liouvillian.
#[derive(Debug, Clone)]
pub struct OptomechModel {
    pub params: ModelParams,
    pub displacement: DisplacementSolution,
    pub hamiltonian: OperatorMatrix,
    pub collapse: Vec<(OperatorMatrix, f64)>,
    pub liouvillian: Superoperator,
}

impl OptomechModel {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let displacement = solve_displacements(params)?;
        let hamiltonian = build_hamiltonian(params, &displacement)?;
        let collapse = build_collapse_ops(params, &displacement)?;
        let mut l = liouvillian(&hamiltonian, &collapse)?;
        if params.include_mechanical_linear_terms {
            l = l.try_add(&mechanical_linear_term(params, &displacement)?)?;
        }
        Ok(Self {
            params: params.clone(),
            displacement,
            hamiltonian,
            collapse,
            liouvillian: l,
        })
    }

    pub fn dims(&self) -> HilbertDims {
        self.params.dims()
    }

    pub fn coupling(&self) -> f64 {
        self.displacement.coupling()
    }
}
