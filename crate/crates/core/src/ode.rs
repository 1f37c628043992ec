//! Adaptive Dormand-Prince 5(4) integrator for linear complex systems
//! `dv/dt = A v`.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            max_steps: 1_000_000,
        }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// difference between the 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combo(base: &Array1<C64>, h: f64, terms: &[(f64, &Array1<C64>)]) -> Array1<C64> {
    let mut out = base.clone();
    for &(w, k) in terms {
        if w != 0.0 {
            out.scaled_add(C64::from(h * w), k);
        }
    }
    out
}

/// Integrates `dv/dt = a v` from 0 to `t` and returns `v(t)`.
pub fn integrate(a: &Array2<C64>, v0: &Array1<C64>, t: f64, tol: Tolerances) -> Result<Array1<C64>> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(v0.clone());
    }
    let f = |v: &Array1<C64>| a.dot(v);

    let mut time = 0.0;
    let mut v = v0.clone();
    let mut k1 = f(&v);

    // initial step from the norm of the generator action
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max).max(tol.atol);
    let rate = k1.iter().map(|z| z.norm()).fold(0.0, f64::max) / scale;
    let mut h = if rate > 0.0 { (0.01 / rate).min(t) } else { t };
    let h_min = 1e-14 * t;

    for _ in 0..tol.max_steps {
        if time >= t {
            return Ok(v);
        }
        h = h.min(t - time);

        let k2 = f(&combo(&v, h, &[(A21, &k1)]));
        let k3 = f(&combo(&v, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(&combo(&v, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(&combo(&v, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(&combo(
            &v,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ));
        let next = combo(
            &v,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = f(&next);
        let err_vec = combo(
            &Array1::zeros(v.len()),
            h,
            &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
        );

        let err = err_vec
            .iter()
            .zip(v.iter().zip(next.iter()))
            .map(|(e, (a, b))| {
                let sc = tol.atol + tol.rtol * a.norm().max(b.norm());
                (e.norm() / sc).powi(2)
            })
            .sum::<f64>()
            / v.len() as f64;
        let err = err.sqrt();

        if err <= 1.0 {
            time += h;
            v = next;
            k1 = k7;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < h_min && time < t {
            return Err(Error::IntegratorFailure {
                t_reached: time,
                reason: format!("step size {h:e} underflow"),
            });
        }
    }
    if time >= t {
        return Ok(v);
    }
    Err(Error::IntegratorFailure {
        t_reached: time,
        reason: format!("exceeded {} steps", tol.max_steps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn scalar_decay() {
        let a = array![[C64::from(-0.7)]];
        let v = integrate(&a, &array![C64::from(1.0)], 3.0, Tolerances::default()).unwrap();
        assert!((v[0].re - (-2.1f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn oscillation() {
        let a = array![[C64::new(0.0, -2.0)]];
        let v = integrate(&a, &array![C64::from(1.0)], 5.0, Tolerances::default()).unwrap();
        assert!((v[0] - C64::new(0.0, -10.0).exp()).norm() < 1e-7);
    }

    #[test]
    fn step_budget_failure_reports_time() {
        let a = array![[C64::new(0.0, -50.0)]];
        let tol = Tolerances {
            max_steps: 3,
            ..Tolerances::default()
        };
        match integrate(&a, &array![C64::from(1.0)], 10.0, tol) {
            Err(Error::IntegratorFailure { t_reached, .. }) => assert!(t_reached < 10.0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
