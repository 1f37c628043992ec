//! Superoperators on column-stacked density matrices.
//!
//! `vec(rho)[i + j*D] = rho[i, j]`, so `vec(A rho B) = (B^T ⊗ A) vec(rho)`.
//! Every formula in this module is written against that convention.

use ndarray::{linalg::kron, Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, ONE, ZERO};
use crate::qops::{DensityMatrix, HilbertDims, OperatorMatrix};

/// Column-stacking vectorization.
pub fn vectorize(m: &Array2<C64>) -> Array1<C64> {
    m.t().iter().copied().collect()
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &Array1<C64>, d: usize) -> Array2<C64> {
    assert_eq!(v.len(), d * d, "vector length is not a square");
    Array2::from_shape_fn((d, d), |(i, j)| v[i + j * d])
}

/// Row vector `t` with `t · vec(rho) = Tr(rho)`.
pub fn trace_row(d: usize) -> Array1<C64> {
    let mut t = Array1::zeros(d * d);
    for i in 0..d {
        t[i + i * d] = ONE;
    }
    t
}

/// Row vector `r` with `r · vec(X) = Tr(op X)`.
pub fn trace_functional(op: &OperatorMatrix) -> Array1<C64> {
    vectorize(&op.data().t().to_owned())
}

/// Dense `D² x D²` linear map on vectorized operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dims: HilbertDims,
    data: Array2<C64>,
}

impl Superoperator {
    pub fn new(dims: HilbertDims, data: Array2<C64>) -> Result<Self> {
        let d2 = dims.total().pow(2);
        if data.nrows() != d2 || data.ncols() != d2 {
            return Err(Error::DimensionMismatch {
                expected: vec![d2, d2],
                found: vec![data.nrows(), data.ncols()],
            });
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: HilbertDims) -> Self {
        let d2 = dims.total().pow(2);
        Self {
            dims,
            data: Array2::zeros((d2, d2)),
        }
    }

    pub fn identity(dims: HilbertDims) -> Self {
        let d2 = dims.total().pow(2);
        Self {
            dims,
            data: linalg::identity(d2),
        }
    }

    pub fn dims(&self) -> &HilbertDims {
        &self.dims
    }

    /// Hilbert-space dimension `D`.
    pub fn hilbert_dim(&self) -> usize {
        self.dims.total()
    }

    pub fn data(&self) -> &Array2<C64> {
        &self.data
    }

    pub fn apply_vec(&self, v: &Array1<C64>) -> Array1<C64> {
        self.data.dot(v)
    }

    pub fn apply(&self, op: &OperatorMatrix) -> Result<OperatorMatrix> {
        if op.dims() != &self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.as_slice().to_vec(),
                found: op.dims().as_slice().to_vec(),
            });
        }
        let out = self.apply_vec(&vectorize(op.data()));
        OperatorMatrix::new(self.dims.clone(), unvectorize(&out, self.hilbert_dim()))
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.check_dims(rhs)?;
        Ok(Self {
            dims: self.dims.clone(),
            data: self.data.dot(&rhs.data),
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_dims(rhs)?;
        Ok(Self {
            dims: self.dims.clone(),
            data: &self.data + &rhs.data,
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dims: self.dims.clone(),
            data: &self.data * s,
        }
    }

    /// `exp(self * t)`.
    pub fn exp(&self, t: f64) -> Self {
        Self {
            dims: self.dims.clone(),
            data: linalg::expm(&(&self.data * C64::from(t))),
        }
    }

    /// Largest modulus of `t · L` over the columns, i.e. how far the map is
    /// from annihilating the trace.
    pub fn trace_annihilation_error(&self) -> f64 {
        let t = trace_row(self.hilbert_dim());
        t.dot(&self.data).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Populations-only generator: all matrix elements that touch a
    /// coherence `rho[i, j]` with `i != j` (as a row or a column) are
    /// removed, leaving the classical rate equation between Fock-basis
    /// populations. Coherences are frozen at whatever value they start with.
    pub fn dephased(&self) -> Self {
        let d = self.hilbert_dim();
        let is_pop = |k: usize| k % d == k / d;
        let data = Array2::from_shape_fn(self.data.raw_dim(), |(r, c)| {
            if is_pop(r) && is_pop(c) {
                self.data[[r, c]]
            } else {
                ZERO
            }
        });
        Self {
            dims: self.dims.clone(),
            data,
        }
    }

    fn check_dims(&self, rhs: &Self) -> Result<()> {
        if self.dims != rhs.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.as_slice().to_vec(),
                found: rhs.dims.as_slice().to_vec(),
            });
        }
        Ok(())
    }
}

/// `rho -> op rho`.
pub fn left_mult(op: &OperatorMatrix) -> Superoperator {
    let d = op.dim();
    Superoperator {
        dims: op.dims().clone(),
        data: kron(&linalg::identity(d), op.data()),
    }
}

/// `rho -> rho op`.
pub fn right_mult(op: &OperatorMatrix) -> Superoperator {
    let d = op.dim();
    Superoperator {
        dims: op.dims().clone(),
        data: kron(&op.data().t().to_owned(), &linalg::identity(d)),
    }
}

/// `(rate/2) (2 c rho c† - c†c rho - rho c†c)`.
pub fn lindblad_dissipator(c: &OperatorMatrix, rate: f64) -> Result<Superoperator> {
    if !(rate >= 0.0) {
        return Err(Error::NegativeRate(rate));
    }
    let d = c.dim();
    if rate == 0.0 {
        return Ok(Superoperator::zeros(c.dims().clone()));
    }
    let cdc = linalg::adjoint(c.data()).dot(c.data());
    let ident = linalg::identity(d);
    let jump = kron(&c.data().mapv(|z| z.conj()), c.data());
    let anti = kron(&ident, &cdc) + kron(&cdc.t().to_owned(), &ident);
    let data = jump * C64::from(rate) - anti * C64::from(0.5 * rate);
    Ok(Superoperator {
        dims: c.dims().clone(),
        data,
    })
}

/// `-i[H, ·]` plus one dissipator per `(operator, rate)` pair.
pub fn liouvillian(h: &OperatorMatrix, collapse: &[(OperatorMatrix, f64)]) -> Result<Superoperator> {
    let mut data = (left_mult(h).data - right_mult(h).data) * C64::new(0.0, -1.0);
    for (c, rate) in collapse {
        h.check_dims(c)?;
        data += &lindblad_dissipator(c, *rate)?.data;
    }
    Ok(Superoperator {
        dims: h.dims().clone(),
        data,
    })
}

/// `(rate/2) (A rho - rho A)` for an anti-Hermitian drift operator `A`.
///
/// Models the frame-shift terms that appear when a damped mode is
/// displaced by a coherent amplitude; with `A = β* d - β d†` this is the
/// mechanical linear dissipation term.
pub fn linear_drift(a: &OperatorMatrix, rate: f64) -> Result<Superoperator> {
    if !(rate >= 0.0) {
        return Err(Error::NegativeRate(rate));
    }
    let data = (left_mult(a).data - right_mult(a).data) * C64::from(0.5 * rate);
    Ok(Superoperator {
        dims: a.dims().clone(),
        data,
    })
}

/// Applies `L` to a density matrix without re-validating the output.
pub fn apply_to_state(l: &Superoperator, rho: &DensityMatrix) -> Result<OperatorMatrix> {
    l.apply(rho.as_operator())
}
