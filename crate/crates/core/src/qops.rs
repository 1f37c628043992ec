//! Operators on truncated bosonic Fock spaces.
//!
//! Composite spaces are ordered cavity factor first, mechanical factor
//! second. The `dims` metadata carried by every operator records this
//! ordering and is checked wherever two operators meet.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{linalg::kron, Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, ONE, ZERO};

/// Tensor-factor index of the cavity mode.
pub const CAVITY: usize = 0;
/// Tensor-factor index of the mechanical mode.
pub const MECHANICAL: usize = 1;

pub const TRACE_TOL: f64 = 1e-9;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Truncation of each tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertDims(Vec<usize>);

impl HilbertDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptyOperatorList);
        }
        if let Some(&bad) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidTruncation(bad));
        }
        Ok(Self(dims))
    }

    pub fn single(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn factors(&self) -> usize {
        self.0.len()
    }

    /// Product of the factor truncations.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    fn concat(&self, other: &HilbertDims) -> HilbertDims {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        HilbertDims(v)
    }
}

impl fmt::Display for HilbertDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Dense complex square matrix acting on a tensor-product Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dims: HilbertDims,
    data: Array2<C64>,
}

impl OperatorMatrix {
    pub fn new(dims: HilbertDims, data: Array2<C64>) -> Result<Self> {
        let d = dims.total();
        if data.nrows() != d || data.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: vec![d, d],
                found: vec![data.nrows(), data.ncols()],
            });
        }
        Ok(Self { dims, data })
    }

    pub(crate) fn from_parts(dims: HilbertDims, data: Array2<C64>) -> Self {
        debug_assert_eq!(data.nrows(), dims.total());
        Self { dims, data }
    }

    pub fn identity(dims: HilbertDims) -> Self {
        let d = dims.total();
        Self::from_parts(dims, linalg::identity(d))
    }

    pub fn zeros(dims: HilbertDims) -> Self {
        let d = dims.total();
        Self::from_parts(dims, Array2::zeros((d, d)))
    }

    /// Real diagonal operator on a single factor.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let dims = HilbertDims::single(values.len())?;
        let data = Array2::from_diag(&values.iter().map(|&v| C64::from(v)).collect::<Array1<C64>>());
        Ok(Self::from_parts(dims, data))
    }

    pub fn dims(&self) -> &HilbertDims {
        &self.dims
    }

    pub fn data(&self) -> &Array2<C64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<C64> {
        self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.dims.clone(), linalg::adjoint(&self.data))
    }

    pub fn trace(&self) -> C64 {
        self.data.diag().sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_parts(self.dims.clone(), &self.data * s)
    }

    /// Matrix product with dims checked.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dims(rhs)?;
        Ok(Self::from_parts(self.dims.clone(), self.data.dot(&rhs.data)))
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self * rhs - rhs * self
    }

    /// Largest elementwise deviation from Hermiticity, `max |A - A†|`.
    pub fn hermiticity_error(&self) -> f64 {
        linalg::max_abs(&(&self.data - &linalg::adjoint(&self.data)))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        linalg::max_abs(&(&self.data - &other.data))
    }

    /// Eigenvalues of a Hermitian operator in ascending order.
    ///
    /// The Hermitian matrix `A + iB` is mapped to the real symmetric
    /// `[[A, -B], [B, A]]`, whose spectrum is that of the original with
    /// every eigenvalue doubled.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim();
        let h = (&self.data + &linalg::adjoint(&self.data)) * C64::from(0.5);
        let real = DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
            let z = h[[i % n, j % n]];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let mut ev: Vec<f64> = SymmetricEigen::new(real).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev.into_iter().step_by(2).collect()
    }

    pub(crate) fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.as_slice().to_vec(),
                found: other.dims.as_slice().to_vec(),
            });
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&OperatorMatrix> for &OperatorMatrix {
            type Output = OperatorMatrix;

            /// Panics when the tensor structures differ.
            fn $method(self, rhs: &OperatorMatrix) -> OperatorMatrix {
                assert_eq!(self.dims, rhs.dims, "operator dims differ");
                OperatorMatrix::from_parts(self.dims.clone(), &self.data $op &rhs.data)
            }
        }

        impl $trait<OperatorMatrix> for OperatorMatrix {
            type Output = OperatorMatrix;

            fn $method(self, rhs: OperatorMatrix) -> OperatorMatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);

impl Mul<&OperatorMatrix> for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dims, rhs.dims, "operator dims differ");
        OperatorMatrix::from_parts(self.dims.clone(), self.data.dot(&rhs.data))
    }
}

impl Mul<OperatorMatrix> for OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: OperatorMatrix) -> OperatorMatrix {
        &self * &rhs
    }
}

impl Mul<&OperatorMatrix> for f64 {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        rhs.scale(C64::from(self))
    }
}

impl Mul<&OperatorMatrix> for C64 {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        rhs.scale(self)
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn neg(self) -> OperatorMatrix {
        self.scale(-ONE)
    }
}

/// Bosonic lowering operator truncated to `n` levels.
pub fn destroy(n: usize) -> Result<OperatorMatrix> {
    let dims = HilbertDims::single(n)?;
    let mut data = Array2::zeros((n, n));
    for k in 0..n - 1 {
        data[[k, k + 1]] = C64::from(((k + 1) as f64).sqrt());
    }
    Ok(OperatorMatrix::from_parts(dims, data))
}

pub fn create(n: usize) -> Result<OperatorMatrix> {
    Ok(destroy(n)?.adjoint())
}

pub fn number(n: usize) -> Result<OperatorMatrix> {
    let levels: Vec<f64> = (0..n).map(|k| k as f64).collect();
    if n < 2 {
        return Err(Error::InvalidTruncation(n));
    }
    OperatorMatrix::diagonal(&levels)
}

pub fn identity(n: usize) -> Result<OperatorMatrix> {
    Ok(OperatorMatrix::identity(HilbertDims::single(n)?))
}

/// `|k><k|` on an `n`-level mode.
pub fn fock_projector(n: usize, k: usize) -> Result<OperatorMatrix> {
    let dims = HilbertDims::single(n)?;
    if k >= n {
        return Err(Error::LevelOutOfRange { level: k, dim: n });
    }
    let mut data = Array2::zeros((n, n));
    data[[k, k]] = ONE;
    Ok(OperatorMatrix::from_parts(dims, data))
}

/// Kronecker product in list order.
pub fn tensor(ops: &[OperatorMatrix]) -> Result<OperatorMatrix> {
    let (first, rest) = ops.split_first().ok_or(Error::EmptyOperatorList)?;
    Ok(rest.iter().fold(first.clone(), |acc, op| {
        OperatorMatrix::from_parts(acc.dims.concat(&op.dims), kron(&acc.data, &op.data))
    }))
}

/// Places a single-factor operator at position `which`, with identities on
/// all other factors.
pub fn embed(op: &OperatorMatrix, dims: &HilbertDims, which: usize) -> Result<OperatorMatrix> {
    if which >= dims.factors() {
        return Err(Error::InvalidMode {
            index: which,
            factors: dims.factors(),
        });
    }
    let target = dims.as_slice()[which];
    if op.dims.as_slice() != [target] {
        return Err(Error::DimensionMismatch {
            expected: vec![target],
            found: op.dims.as_slice().to_vec(),
        });
    }
    let factors: Vec<OperatorMatrix> = dims
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            if i == which {
                Ok(op.clone())
            } else {
                identity(n)
            }
        })
        .collect::<Result<_>>()?;
    tensor(&factors)
}

/// Lowering operator of factor `which` on the composite space.
pub fn destroy_on(dims: &HilbertDims, which: usize) -> Result<OperatorMatrix> {
    let n = *dims.as_slice().get(which).ok_or(Error::InvalidMode {
        index: which,
        factors: dims.factors(),
    })?;
    embed(&destroy(n)?, dims, which)
}

/// `2|1><1| - 1` on factor `which`: +1 if exactly one quantum is present.
pub fn dichotomic_observable(dims: &HilbertDims, which: usize) -> Result<OperatorMatrix> {
    let n = *dims.as_slice().get(which).ok_or(Error::InvalidMode {
        index: which,
        factors: dims.factors(),
    })?;
    let single = &(2.0 * &fock_projector(n, 1)?) - &identity(n)?;
    embed(&single, dims, which)
}

/// Projectors onto the +1 and -1 eigenspaces of a dichotomic observable.
pub fn dichotomic_projectors(q: &OperatorMatrix) -> (OperatorMatrix, OperatorMatrix) {
    let ident = OperatorMatrix::identity(q.dims.clone());
    let plus = 0.5 * &(&ident + q);
    let minus = 0.5 * &(&ident - q);
    (plus, minus)
}

/// `Tr(op rho)`.
pub fn expect(op: &OperatorMatrix, rho: &DensityMatrix) -> Result<C64> {
    op.check_dims(rho.as_operator())?;
    let a = op.data();
    let r = rho.data();
    let d = op.dim();
    let mut acc = ZERO;
    for i in 0..d {
        for j in 0..d {
            acc += a[[i, j]] * r[[j, i]];
        }
    }
    Ok(acc)
}

/// Quantum state on a truncated Fock space: unit trace, Hermitian and
/// positive semidefinite within the module tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(OperatorMatrix);

impl DensityMatrix {
    /// Validates all three invariants.
    pub fn new(op: OperatorMatrix) -> Result<Self> {
        let rho = Self(op);
        rho.check_invariants()?;
        Ok(rho)
    }

    /// Wraps an operator without validation. Used for propagated states
    /// whose invariants are guaranteed by the generator.
    pub fn new_unchecked(op: OperatorMatrix) -> Self {
        Self(op)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let tr = self.0.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let herm = self.0.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity violated by {herm:e}"
            )));
        }
        let min = self.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    /// Pure state `|k_0, k_1, ...>` in the Fock basis.
    pub fn fock(dims: &HilbertDims, levels: &[usize]) -> Result<Self> {
        if levels.len() != dims.factors() {
            return Err(Error::DimensionMismatch {
                expected: dims.as_slice().to_vec(),
                found: levels.to_vec(),
            });
        }
        let factors: Vec<OperatorMatrix> = dims
            .as_slice()
            .iter()
            .zip(levels)
            .map(|(&n, &k)| fock_projector(n, k))
            .collect::<Result<_>>()?;
        Ok(Self(tensor(&factors)?))
    }

    /// Thermal state of a single truncated mode with mean occupation
    /// `n_bar` before truncation (populations renormalized).
    pub fn thermal(n: usize, n_bar: f64) -> Result<Self> {
        if !(n_bar >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "n_bar",
                reason: format!("must be non-negative, got {n_bar}"),
            });
        }
        let pops: Vec<f64> = if n_bar == 0.0 {
            (0..n).map(|k| if k == 0 { 1.0 } else { 0.0 }).collect()
        } else {
            let ratio = n_bar / (n_bar + 1.0);
            let raw: Vec<f64> = (0..n).map(|k| ratio.powi(k as i32)).collect();
            let z: f64 = raw.iter().sum();
            raw.into_iter().map(|p| p / z).collect()
        };
        Ok(Self(OperatorMatrix::diagonal(&pops)?))
    }

    /// Product state from single-factor density matrices.
    pub fn product(factors: &[DensityMatrix]) -> Result<Self> {
        let ops: Vec<OperatorMatrix> = factors.iter().map(|r| r.0.clone()).collect();
        Ok(Self(tensor(&ops)?))
    }

    pub fn dims(&self) -> &HilbertDims {
        self.0.dims()
    }

    pub fn data(&self) -> &Array2<C64> {
        self.0.data()
    }

    pub fn as_operator(&self) -> &OperatorMatrix {
        &self.0
    }

    pub fn into_operator(self) -> OperatorMatrix {
        self.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0
            .hermitian_eigenvalues()
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    pub fn populations(&self) -> Vec<f64> {
        self.0.data().diag().iter().map(|z| z.re).collect()
    }
}
