//! Dense complex linear algebra: LU factorization and the matrix exponential.
//!
//! The exponential uses scaling and squaring with diagonal Padé approximants
//! of degree 3, 5, 7, 9 or 13, selected from the 1-norm (Higham 2005).

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64 as C64;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// LU factorization with partial pivoting, `P A = L U`, stored in place.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Array2<C64>,
    perm: Vec<usize>,
    min_pivot: f64,
    max_pivot: f64,
}

impl Lu {
    pub fn factor(mut a: Array2<C64>) -> Self {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU requires a square matrix");
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        let mut max_pivot: f64 = 0.0;

        for k in 0..n {
            let (mut p, mut best) = (k, a[[k, k]].norm());
            for i in (k + 1)..n {
                let v = a[[i, k]].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            min_pivot = min_pivot.min(best);
            max_pivot = max_pivot.max(best);
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    a.swap([p, j], [k, j]);
                }
            }
            let pivot = a[[k, k]];
            if pivot == ZERO {
                continue;
            }
            let inv = ONE / pivot;
            for i in (k + 1)..n {
                let f = a[[i, k]] * inv;
                if f == ZERO {
                    continue;
                }
                a[[i, k]] = f;
                for j in (k + 1)..n {
                    let u = a[[k, j]];
                    a[[i, j]] -= f * u;
                }
            }
        }

        Self {
            lu: a,
            perm,
            min_pivot,
            max_pivot,
        }
    }

    /// Ratio of the smallest to the largest pivot magnitude. A cheap
    /// singularity indicator; zero means exactly singular.
    pub fn pivot_ratio(&self) -> f64 {
        if self.max_pivot == 0.0 {
            0.0
        } else {
            self.min_pivot / self.max_pivot
        }
    }

    pub fn solve_vec(&self, b: &Array1<C64>) -> Array1<C64> {
        let n = self.lu.nrows();
        let mut x: Array1<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[[i, j]] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu[[i, j]] * x[j];
            }
            x[i] = s / self.lu[[i, i]];
        }
        x
    }

    pub fn solve_mat(&self, b: &Array2<C64>) -> Array2<C64> {
        let n = self.lu.nrows();
        let m = b.ncols();
        let mut x = b.select(Axis(0), &self.perm);
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[[i, j]];
                if l == ZERO {
                    continue;
                }
                for c in 0..m {
                    let v = x[[j, c]];
                    x[[i, c]] -= l * v;
                }
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let u = self.lu[[i, j]];
                if u == ZERO {
                    continue;
                }
                for c in 0..m {
                    let v = x[[j, c]];
                    x[[i, c]] -= u * v;
                }
            }
            let inv = ONE / self.lu[[i, i]];
            for c in 0..m {
                x[[i, c]] *= inv;
            }
        }
        x
    }
}

pub fn identity(n: usize) -> Array2<C64> {
    Array2::from_diag_elem(n, ONE)
}

pub fn one_norm(a: &Array2<C64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest elementwise modulus.
pub fn max_abs(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn adjoint(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential `exp(A)` of a square complex matrix.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return Array2::zeros((0, 0));
    }
    let norm = one_norm(a);
    if norm == 0.0 {
        return identity(n);
    }

    for &(m, theta) in &THETA {
        if norm <= theta {
            let (u, v) = pade_low(a, m);
            return pade_quotient(&u, &v);
        }
    }

    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.mapv(|z| z * 2f64.powi(-s));
    let (u, v) = pade13(&scaled);
    let mut r = pade_quotient(&u, &v);
    for _ in 0..s {
        r = r.dot(&r);
    }
    r
}

fn pade_low(a: &Array2<C64>, m: usize) -> (Array2<C64>, Array2<C64>) {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        9 => &B9,
        _ => unreachable!("unsupported Padé degree {m}"),
    };
    let n = a.nrows();
    let ident = identity(n);
    let a2 = a.dot(a);
    // powers[k] = A^(2k)
    let mut powers = vec![ident.clone(), a2.clone()];
    for _ in 2..=(m / 2) {
        let next = powers.last().unwrap().dot(&a2);
        powers.push(next);
    }
    let mut u_inner = Array2::<C64>::zeros((n, n));
    let mut v = Array2::<C64>::zeros((n, n));
    for (k, p) in powers.iter().enumerate() {
        u_inner.scaled_add(C64::from(b[2 * k + 1]), p);
        v.scaled_add(C64::from(b[2 * k]), p);
    }
    (a.dot(&u_inner), v)
}

fn pade13(a: &Array2<C64>) -> (Array2<C64>, Array2<C64>) {
    let b = B13.map(C64::from);
    let ident = identity(a.nrows());
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);

    let u_high = &a6 * b[13] + &a4 * b[11] + &a2 * b[9];
    let u_low = &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &ident * b[1];
    let u = a.dot(&(a6.dot(&u_high) + u_low));

    let v_high = &a6 * b[12] + &a4 * b[10] + &a2 * b[8];
    let v = a6.dot(&v_high) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &ident * b[0];
    (u, v)
}

/// Solves `(V - U) X = (V + U)`.
fn pade_quotient(u: &Array2<C64>, v: &Array2<C64>) -> Array2<C64> {
    let lu = Lu::factor(v - u);
    lu.solve_mat(&(v + u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn expm_of_diagonal() {
        let a = array![[c(1.0), ZERO], [ZERO, c(-2.5)]];
        let e = expm(&a);
        assert!((e[[0, 0]].re - 1f64.exp()).abs() < 1e-14);
        assert!((e[[1, 1]].re - (-2.5f64).exp()).abs() < 1e-15);
        assert_eq!(e[[0, 1]], ZERO);
    }

    #[test]
    fn expm_rotation_generator_large_norm() {
        // exp(theta * [[0, -1], [1, 0]]) is a rotation by theta
        for &theta in &[0.01, 0.7, 3.0, 40.0] {
            let a = array![[ZERO, c(-theta)], [c(theta), ZERO]];
            let e = expm(&a);
            assert!((e[[0, 0]].re - theta.cos()).abs() < 1e-12, "theta {theta}");
            assert!((e[[1, 0]].re - theta.sin()).abs() < 1e-12, "theta {theta}");
        }
    }

    #[test]
    fn expm_nilpotent() {
        let a = array![[ZERO, c(3.0)], [ZERO, ZERO]];
        let e = expm(&a);
        assert!((e[[0, 1]] - c(3.0)).norm() < 1e-14);
        assert!((e[[0, 0]] - ONE).norm() < 1e-14);
        assert!(e[[1, 0]].norm() < 1e-14);
    }

    #[test]
    fn expm_phase() {
        let a = array![[C64::new(0.0, 2.0)]];
        let e = expm(&a);
        assert!((e[[0, 0]] - C64::new(0.0, 2.0).exp()).norm() < 1e-14);
    }

    #[test]
    fn lu_solves_permuted_system() {
        let a = array![
            [ZERO, c(2.0), c(1.0)],
            [c(1.0), C64::new(0.0, 1.0), ZERO],
            [c(4.0), c(1.0), c(-1.0)]
        ];
        let x = array![c(1.0), C64::new(-2.0, 0.5), c(3.0)];
        let b = a.dot(&x);
        let lu = Lu::factor(a);
        let sol = lu.solve_vec(&b);
        for (s, t) in sol.iter().zip(x.iter()) {
            assert!((s - t).norm() < 1e-14);
        }
        assert!(lu.pivot_ratio() > 0.0);
    }

    #[test]
    fn lu_flags_singular_matrix() {
        let a = array![[c(1.0), c(2.0)], [c(2.0), c(4.0)]];
        assert!(Lu::factor(a).pivot_ratio() < 1e-15);
    }
}
