//! Open-system simulation of a linearized, driven cavity coupled to a
//! mechanical oscillator, and Leggett-Garg tests on its dichotomic
//! occupation observables.
//!
//! All frequencies and rates are angular and usually expressed in units of
//! the mechanical frequency `ω_m`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;

pub mod dynamics;
pub mod leggett_garg;
pub mod linalg;
pub mod liouville;
pub mod ode;
pub mod optomech;
pub mod qnd;
pub mod qops;

pub use error::{Error, Result};

pub use dynamics::{
    propagate, propagate_with, steady_state, truncation_convergence, two_time_correlator,
    Backend, ConvergenceReport, PropagatorCache,
};
pub use leggett_garg::{
    classical_harmonic_demo, model_problem, model_sweep, unbound_lg_study, uniform_grid,
    InitialState, LgCurve, LgForm, LgPoint, LgProblem, ObservableTag, ViolationSummary,
};
pub use liouville::{lindblad_dissipator, liouvillian, Superoperator};
pub use ode::Tolerances;
pub use optomech::{
    default_figure2_params, solve_displacements, DisplacementSolution, ModelParams,
    OptomechModel, Regime,
};
pub use qnd::{compensation_drive, dispersive_report, frame_shifts, FeasibilityThresholds, ReadoutParams};
pub use qops::{
    dichotomic_observable, DensityMatrix, HilbertDims, OperatorMatrix, CAVITY, MECHANICAL,
};

pub use num_complex::Complex64 as C64;
