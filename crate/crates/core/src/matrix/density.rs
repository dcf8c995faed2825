use num_complex::Complex;

use super::{eigen, ComplexMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};
use crate::scalar::Real;

const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    mat: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(mat: ComplexMatrix<T>) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let dev = mat.hermiticity_deviation();
        if dev > T::tol(HERMITIAN_TOL) {
            return Err(Error::NonHermitian {
                deviation: dev.to_f64_lossy(),
            });
        }
        let tr = mat.trace().re;
        if (tr - T::one()).abs() > T::tol(TRACE_TOL) {
            return Err(Error::NotAState(format!("trace {} != 1", tr.to_f64_lossy())));
        }
        let min = eigen::jacobi(&mat, false).values.first().copied().unwrap_or(T::zero());
        if min < -T::tol(PSD_TOL) {
            return Err(Error::NotAState(format!(
                "negative eigenvalue {}",
                min.to_f64_lossy()
            )));
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix known to be a state up to roundoff.
    pub(crate) fn new_unchecked(mat: ComplexMatrix<T>) -> Self {
        Self { mat }
    }

    /// Normalizes a nonzero PSD matrix to unit trace.
    pub fn from_unnormalized(mat: ComplexMatrix<T>) -> Result<Self> {
        let tr = mat.trace().re;
        if tr <= T::zero() {
            return Err(Error::NotAState("zero trace".into()));
        }
        Self::new(mat.hermitian_part().scale(T::one() / tr))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let w = T::one() / T::from_usize_lossy(d);
        Self {
            mat: ComplexMatrix::identity(d).scale(w),
        }
    }

    /// `|k⟩⟨k|` in dimension `d`.
    pub fn basis_state(d: usize, k: usize) -> Self {
        Self {
            mat: ComplexMatrix::unit(d, d, k, k),
        }
    }

    /// `|ψ⟩⟨ψ|/⟨ψ|ψ⟩`.
    pub fn from_pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm: T = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm <= T::zero() {
            return Err(Error::NotAState("zero vector".into()));
        }
        Ok(Self {
            mat: ComplexMatrix::outer(psi, psi).scale(T::one() / norm),
        })
    }

    /// Diagonal state from a probability vector.
    pub fn from_probabilities(p: &[T]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diagonal(p))
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        (&self.mat * &self.mat).trace().re
    }

    /// Convex mixture `p·self + (1−p)·other`.
    pub fn mix(&self, p: T, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot mix states of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Self {
            mat: &self.mat.scale(p) + &other.mat.scale(T::one() - p),
        })
    }
}

impl<T: Real> AsRef<ComplexMatrix<T>> for DensityMatrix<T> {
    fn as_ref(&self) -> &ComplexMatrix<T> {
        &self.mat
    }
}
