#![allow(dead_code)]

use ndarray::Array2;
use optolg::liouville::{liouvillian, Superoperator};
use optolg::optomech::resonant_detuning;
use optolg::{DensityMatrix, HilbertDims, ModelParams, OperatorMatrix, C64};
use proptest::prelude::*;

/// Lossless, excitation-conserving model tuned so that the displaced
/// cavity is resonant with the mechanics at coupling `coupling`.
pub fn closed_rwa_params(coupling: f64, n: usize) -> ModelParams {
    ModelParams {
        delta: resonant_detuning(1.0, coupling),
        omega_m: 1.0,
        g: 0.01,
        drive_amplitude: 0.0,
        kappa: 0.0,
        gamma: 0.0,
        n_bar: 0.0,
        n_c: n,
        n_m: n,
        rwa_only: true,
        include_nonlinear_term: false,
        include_mechanical_linear_terms: false,
    }
    .with_coupling(coupling)
    .unwrap()
}

fn square(d: usize, entries: &[f64]) -> Array2<C64> {
    Array2::from_shape_fn((d, d), |(i, j)| {
        let k = 2 * (i * d + j);
        C64::new(entries[k], entries[k + 1])
    })
}

pub fn dims_strategy() -> impl Strategy<Value = HilbertDims> {
    (2usize..=3, 2usize..=3).prop_map(|(a, b)| HilbertDims::new(vec![a, b]).unwrap())
}

fn matrix_entries(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 2 * d * d)
}

pub fn hermitian(dims: &HilbertDims, entries: &[f64]) -> OperatorMatrix {
    let d = dims.total();
    let a = square(d, entries);
    let h = (&a + &a.t().mapv(|z| z.conj())) * C64::from(0.5);
    OperatorMatrix::new(dims.clone(), h).unwrap()
}

pub fn density(dims: &HilbertDims, entries: &[f64]) -> DensityMatrix {
    let d = dims.total();
    let a = square(d, entries);
    let mut rho = a.dot(&a.t().mapv(|z| z.conj()));
    let tr: C64 = (0..d).map(|i| rho[[i, i]]).sum();
    rho /= tr;
    let rho = (&rho + &rho.t().mapv(|z| z.conj())) * C64::from(0.5);
    DensityMatrix::new(OperatorMatrix::new(dims.clone(), rho).unwrap()).unwrap()
}

/// A random Lindblad generator with two collapse channels and a random
/// initial state.
#[derive(Debug, Clone)]
pub struct RandomOpenSystem {
    pub liouvillian: Superoperator,
    pub rho0: DensityMatrix,
    pub mode: usize,
    pub time: f64,
}

pub fn open_system() -> impl Strategy<Value = RandomOpenSystem> {
    dims_strategy().prop_flat_map(|dims| {
        let d = dims.total();
        (
            Just(dims),
            matrix_entries(d),
            matrix_entries(d),
            matrix_entries(d),
            matrix_entries(d),
            0.0f64..1.0,
            0.0f64..1.0,
            0usize..2,
            0.0f64..5.0,
        )
            .prop_map(|(dims, h, c1, c2, r, g1, g2, mode, time)| {
                let d = dims.total();
                let c = |e: &[f64]| OperatorMatrix::new(dims.clone(), square(d, e)).unwrap();
                let l = liouvillian(&hermitian(&dims, &h), &[(c(&c1), g1), (c(&c2), g2)]).unwrap();
                RandomOpenSystem {
                    liouvillian: l,
                    rho0: density(&dims, &r),
                    mode,
                    time,
                }
            })
    })
}

/// A random Hermitian (not necessarily positive) operator and a mode index.
pub fn hermitian_and_mode() -> impl Strategy<Value = (OperatorMatrix, usize)> {
    dims_strategy().prop_flat_map(|dims| {
        let d = dims.total();
        (Just(dims), matrix_entries(d), 0usize..2)
            .prop_map(|(dims, e, mode)| (hermitian(&dims, &e), mode))
    })
}

pub fn max_abs(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
