//! Acceptance checks for the engine. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; criterion 10 lives with the command line.

mod common;

use std::f64::consts::{FRAC_PI_3, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use optolg::dynamics::{steady_state, PropagatorCache};
use optolg::leggett_garg::{classical_harmonic_demo, VIOLATION_THRESHOLD};
use optolg::liouville::{lindblad_dissipator, trace_functional, vectorize};
use optolg::optomech::{critical_drive, solve_displacements};
use optolg::qops::{destroy, destroy_on, dichotomic_projectors, expect, number};
use optolg::{
    default_figure2_params, dichotomic_observable, model_problem, model_sweep, propagate,
    uniform_grid, DensityMatrix, Error, HilbertDims, InitialState, LgForm, ModelParams,
    ObservableTag, OperatorMatrix, Regime, MECHANICAL,
};

use common::{closed_rwa_params, hermitian_and_mode, open_system};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

/// Delays covering `τ|G|/2π ∈ [0, 2]`.
fn scaled_grid(coupling: f64, count: usize) -> Vec<f64> {
    uniform_grid(0.0, 2.0 * TAU / coupling, count).unwrap()
}

fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn single_mode_decay() -> Outcome {
    let start = Instant::now();
    let kappa = 0.2;
    let l = lindblad_dissipator(&destroy(2).unwrap(), kappa).unwrap();
    let dims = HilbertDims::single(2).unwrap();
    let n_row = trace_functional(&number(2).unwrap());
    let step = 0.01;
    let cache = PropagatorCache::new(&l, step).unwrap();
    let mut v = vectorize(DensityMatrix::fock(&dims, &[1]).unwrap().data());
    let mut worst: f64 = 0.0;
    for k in 0..=2500 {
        let t = k as f64 * step;
        let exact = (-kappa * t).exp();
        worst = worst.max((n_row.dot(&v).re - exact).abs() / exact);
        v = cache.advance(&v);
    }
    let elapsed = start.elapsed().as_secs_f64();
    (
        worst < 1e-6 && elapsed < 1.0,
        format!("max relative error {worst:.2e} over t in [0, 25], {elapsed:.3} s"),
    )
}

fn rabi_oracle() -> Outcome {
    let start = Instant::now();
    let coupling = 0.05;
    let p = closed_rwa_params(coupling, 3);
    let (_, problem) = model_problem(&p, ObservableTag::Cavity, InitialState::default()).unwrap();
    let grid = uniform_grid(0.0, PI / coupling, 241).unwrap();
    let curve = problem.sweep(&grid, LgForm::General).unwrap();
    let pointwise = curve
        .points
        .iter()
        .map(|pt| {
            let x = 2.0 * coupling * pt.tau;
            (pt.l_value - (2.0 * x.cos() - (2.0 * x).cos())).abs()
        })
        .fold(0.0, f64::max);
    let summary = curve.summary();
    let h = grid[1] - grid[0];
    let peak = problem
        .refine_maximum(summary.argmax_tau - h, summary.argmax_tau + h, LgForm::General, 1e-7)
        .unwrap();
    let phase = 2.0 * coupling * peak.tau;
    let elapsed = start.elapsed().as_secs_f64();
    let pass = pointwise < 1e-6
        && (peak.l_value - 1.5).abs() < 1e-3
        && (phase - FRAC_PI_3).abs() < 1e-3
        && elapsed < 5.0;
    (
        pass,
        format!(
            "pointwise error {pointwise:.2e}, max L {:.6} at 2|G|tau = {phase:.6} (pi/3 = {FRAC_PI_3:.6}), {elapsed:.2} s",
            peak.l_value
        ),
    )
}

fn violation_existence() -> Outcome {
    let start = Instant::now();
    let p = default_figure2_params(Regime::Weak);
    let mut peaks = Vec::new();
    for tag in [ObservableTag::Cavity, ObservableTag::Mechanical] {
        let (model, problem) = model_problem(&p, tag, InitialState::default()).unwrap();
        let grid = scaled_grid(model.coupling(), 401);
        let summary = problem.sweep(&grid, LgForm::General).unwrap().summary();
        let h = grid[1] - grid[0];
        let lo = (summary.argmax_tau - h).max(0.0);
        let peak = problem
            .refine_maximum(lo, summary.argmax_tau + h, LgForm::General, 1e-6)
            .unwrap();
        peaks.push(peak);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let (c, m) = (peaks[0], peaks[1]);
    let pass = c.l_value > 1.05 && m.l_value > 1.05 && m.tau > c.tau && elapsed < 60.0;
    (
        pass,
        format!(
            "Q_c max L {:.4} at tau|G|/2pi {:.4}; Q_m max L {:.4} at {:.4}; {elapsed:.1} s",
            c.l_value, c.tau_scaled, m.l_value, m.tau_scaled
        ),
    )
}

fn rwa_deviation(p: &ModelParams, tag: ObservableTag) -> f64 {
    let coupling = solve_displacements(p).unwrap().coupling();
    let grid = scaled_grid(coupling, 401);
    let full = model_sweep(p, tag, InitialState::default(), &grid, LgForm::General).unwrap();
    let rwa = ModelParams {
        rwa_only: true,
        ..p.clone()
    };
    let rwa = model_sweep(&rwa, tag, InitialState::default(), &grid, LgForm::General).unwrap();
    max_deviation(&full.l_values(), &rwa.l_values())
}

fn counter_rotating_modulation() -> Outcome {
    let strong = default_figure2_params(Regime::Strong);
    let weak = default_figure2_params(Regime::Weak).with_coupling(0.01).unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    for tag in [ObservableTag::Cavity, ObservableTag::Mechanical] {
        let s = rwa_deviation(&strong, tag);
        let w = rwa_deviation(&weak, tag);
        pass &= s > 0.05 && w < 0.02;
        detail.push(format!("{}: |G|=0.3 {s:.4}, |G|=0.01 {w:.4}", tag.as_str()));
    }
    (pass, format!("max |L_full - L_rwa| {}", detail.join("; ")))
}

fn macrorealist_foil() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for regime in [Regime::Weak, Regime::Strong] {
        let p = default_figure2_params(regime);
        for tag in [ObservableTag::Cavity, ObservableTag::Mechanical] {
            let (model, problem) = model_problem(&p, tag, InitialState::default()).unwrap();
            let foil = problem.dephased();
            let grid = scaled_grid(model.coupling(), 401);
            for form in [LgForm::General, LgForm::EqualTime] {
                worst = worst.max(foil.sweep(&grid, form).unwrap().summary().max_l);
            }
        }
    }
    (
        worst <= VIOLATION_THRESHOLD,
        format!("largest dephased L {worst:.12} (both observables, both regimes)"),
    )
}

fn cooled_occupation(kappa: f64) -> f64 {
    let p = ModelParams {
        kappa,
        gamma: 1e-3,
        n_bar: 2.0,
        n_c: 3,
        n_m: 8,
        ..default_figure2_params(Regime::Weak)
    }
    .with_coupling(0.05)
    .unwrap();
    let model = optolg::OptomechModel::new(&p).unwrap();
    let rho = steady_state(&model.liouvillian).unwrap();
    let m = destroy_on(&p.dims(), MECHANICAL).unwrap();
    expect(&(&m.adjoint() * &m), &rho).unwrap().re
}

fn sideband_cooling() -> Outcome {
    let good = cooled_occupation(0.05);
    let bad = cooled_occupation(2.0);
    (
        good < 1.0 && bad > good,
        format!("steady <d+d> with N_bar = 2: kappa = 0.05 -> {good:.4e}, kappa = 2 -> {bad:.4e}"),
    )
}

fn deterministic_runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_cases<S: Strategy>(
    name: &str,
    strategy: S,
    check: impl Fn(S::Value) -> std::result::Result<(), TestCaseError>,
) -> std::result::Result<(), String> {
    let mut runner = deterministic_runner(128);
    runner
        .run(&strategy, check)
        .map_err(|e| format!("{name}: {e}"))
}

fn structural_invariants() -> Outcome {
    let evolved = |sys: common::RandomOpenSystem| propagate(&sys.liouvillian, &sys.rho0, sys.time).unwrap();
    let results = [
        run_cases("trace", open_system(), |sys| {
            let rho = evolved(sys);
            let err = (rho.as_operator().trace() - C64::from(1.0)).norm();
            prop_assert!(err < 1e-9, "trace error {err}");
            Ok(())
        }),
        run_cases("hermiticity", open_system(), |sys| {
            let err = evolved(sys).as_operator().hermiticity_error();
            prop_assert!(err < 1e-10, "hermiticity error {err}");
            Ok(())
        }),
        run_cases("positivity", open_system(), |sys| {
            let min = evolved(sys).min_eigenvalue();
            prop_assert!(min >= -1e-8, "min eigenvalue {min}");
            Ok(())
        }),
        run_cases("projective identity", hermitian_and_mode(), |(rho, mode)| {
            let q = dichotomic_observable(rho.dims(), mode).unwrap();
            let (plus, minus) = dichotomic_projectors(&q);
            let projective = &(&(&plus * &rho) * &plus) - &(&(&minus * &rho) * &minus);
            let symmetrized = 0.5 * &(&(&q * &rho) + &(&rho * &q));
            let err = projective.max_abs_diff(&symmetrized);
            prop_assert!(err < 1e-14, "identity error {err}");
            Ok(())
        }),
        run_cases("dichotomy", hermitian_and_mode(), |(rho, mode)| {
            let q = dichotomic_observable(rho.dims(), mode).unwrap();
            let err = (&q * &q).max_abs_diff(&OperatorMatrix::identity(rho.dims().clone()));
            prop_assert!(err < 1e-14, "Q^2 - I = {err}");
            Ok(())
        }),
        run_cases("trace annihilation", open_system(), |sys| {
            let err = sys.liouvillian.trace_annihilation_error();
            prop_assert!(err < 1e-10, "trace annihilation error {err}");
            Ok(())
        }),
    ];
    let failures: Vec<String> = results.into_iter().filter_map(|r| r.err()).collect();
    if failures.is_empty() {
        (true, "6 invariants x 128 random cases".into())
    } else {
        (false, failures.join("; "))
    }
}

/// Lower-branch `α` from the companion-matrix eigenvalues of
/// `y³ - 2Δ y² + (Δ² + κ²/4) y - kΩ² = 0`, where `y = k|α|²` and
/// `k = 4 ω_m g²`.
fn cubic_root_alpha(p: &ModelParams) -> C64 {
    let k = 4.0 * p.omega_m * p.g * p.g;
    let c2 = -2.0 * p.delta;
    let c1 = p.delta * p.delta + 0.25 * p.kappa * p.kappa;
    let c0 = -k * p.drive_amplitude * p.drive_amplitude;
    let companion = Matrix3::new(0.0, 0.0, -c0, 1.0, 0.0, -c1, 0.0, 1.0, -c2);
    let y = companion
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-9 * z.re.abs().max(1.0) && z.re > 0.0)
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    -p.drive_amplitude / C64::new(p.delta - y, -0.5 * p.kappa)
}

fn displacement_solver() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let mut worst_decoupled: f64 = 0.0;
    for (omega, delta, kappa) in [(0.7, 1.3, 0.2), (5.0, 1.0, 0.05), (0.01, -0.4, 1.5)] {
        let p = ModelParams {
            g: 0.0,
            drive_amplitude: omega,
            delta,
            kappa,
            ..ModelParams::default()
        };
        let alpha = solve_displacements(&p).unwrap().alpha;
        let exact = -omega / C64::new(delta, -0.5 * kappa);
        worst_decoupled = worst_decoupled.max((alpha - exact).norm());
    }
    pass &= worst_decoupled < 1e-14;
    notes.push(format!("g = 0 error {worst_decoupled:.1e}"));

    let draws = (0.5f64..2.0, 0.01f64..0.5, 0.001f64..0.05, 0.05f64..0.9);
    let mut runner = deterministic_runner(20);
    let worst_oracle = std::cell::Cell::new(0.0f64);
    let oracle = runner.run(&draws, |(delta, kappa, g, fraction)| {
        let base = ModelParams {
            delta,
            kappa,
            g,
            ..ModelParams::default()
        };
        let p = ModelParams {
            drive_amplitude: fraction * critical_drive(&base),
            ..base
        };
        let alpha = solve_displacements(&p).unwrap().alpha;
        let expected = cubic_root_alpha(&p);
        let err = (alpha - expected).norm() / expected.norm().max(1.0);
        worst_oracle.set(worst_oracle.get().max(err));
        prop_assert!(err < 1e-10, "relative error {err} at {p:?}");
        Ok(())
    });
    pass &= oracle.is_ok();
    notes.push(match oracle {
        Ok(()) => format!("cubic oracle worst {:.1e} over 20 draws", worst_oracle.get()),
        Err(e) => format!("cubic oracle failed: {e}"),
    });

    let base = ModelParams {
        delta: 1.0,
        kappa: 0.05,
        g: 0.01,
        ..ModelParams::default()
    };
    let mut raised = 0;
    for factor in [1.01, 1.05, 1.5] {
        let p = ModelParams {
            drive_amplitude: factor * critical_drive(&base),
            ..base.clone()
        };
        if matches!(solve_displacements(&p), Err(Error::CriticalDriving { .. })) {
            raised += 1;
        }
    }
    pass &= raised == 3;
    notes.push(format!("critical driving raised {raised}/3"));
    (pass, notes.join("; "))
}

fn classical_counterexample() -> Outcome {
    let grid = uniform_grid(0.0, 2.0 * PI, 601).unwrap();
    let report = classical_harmonic_demo(1.0, 0.0, 1.0, &grid).unwrap();
    let pass = (report.peak_tau - FRAC_PI_3).abs() < 1e-9
        && (report.peak_value - 1.5).abs() < 1e-9
        && report.exceedance > 0.0;
    (
        pass,
        format!(
            "peak {:.12} at omega tau = {:.12} (pi/3 = {FRAC_PI_3:.12})",
            report.peak_value, report.peak_tau
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("single-mode decay oracle", single_mode_decay),
        ("closed Rabi LG oracle", rabi_oracle),
        ("violation existence", violation_existence),
        ("counter-rotating modulation", counter_rotating_modulation),
        ("macrorealist foil", macrorealist_foil),
        ("sideband cooling", sideband_cooling),
        ("structural invariants", structural_invariants),
        ("displacement solver", displacement_solver),
        ("classical counterexample", classical_counterexample),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(outcome) => outcome,
            Err(_) => (false, "panicked".to_string()),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
