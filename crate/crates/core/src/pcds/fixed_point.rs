//! Fixed points from the eigenvalue-1 eigenspace of the transfer matrix.

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, DensityMatrix, Svd};
use crate::scalar::Real;

/// Singular values of `T − I` below this (relative to `max(1, σ_max)`) span the fixed space.
const KERNEL_TOL: f64 = 1e-9;
const PURITY_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum FixedPoint<T> {
    Unique { state: DensityMatrix<T>, pure: bool },
    /// The fixed space has this dimension (> 1).
    NonUnique { dimension: usize },
}

pub fn fixed_point<T: Real>(ch: &KrausChannel<T>) -> Result<FixedPoint<T>> {
    let d = ch.dim_in();
    if ch.dim_out() != d {
        return Err(Error::DimensionMismatch(format!(
            "fixed points need a channel on one space, got {d} -> {}",
            ch.dim_out()
        )));
    }
    let report = ch.validate_cpt();
    if !report.is_tp {
        return Err(Error::NotTracePreserving {
            residual: report.residual.to_f64_lossy(),
        });
    }
    let shifted = &ch.transfer_matrix() - &ComplexMatrix::identity(d * d);
    let svd = Svd::new(&shifted);
    let cut = T::tol(KERNEL_TOL) * svd.max_singular_value().max(T::one());
    let kernel = svd.null_space(cut);
    match kernel.len() {
        0 => Err(Error::NumericalFailure("transfer matrix has no eigenvalue 1".into())),
        1 => {
            let x = ComplexMatrix::unvec(&kernel[0], d, d)?;
            let tr = x.trace();
            if tr.norm() <= T::tol(KERNEL_TOL) {
                return Err(Error::NumericalFailure("fixed operator is traceless".into()));
            }
            let rho = x.scale_complex(tr.inv()).hermitian_part();
            let residual = ch.apply_unchecked(&rho).frobenius_distance(&rho);
            if residual > T::tol(RESIDUAL_TOL) {
                return Err(Error::NumericalFailure(format!(
                    "fixed point residual {:e}",
                    residual.to_f64_lossy()
                )));
            }
            let state = DensityMatrix::new(rho)?;
            let pure = state.purity() >= T::one() - T::tol(PURITY_TOL);
            Ok(FixedPoint::Unique { state, pure })
        }
        n => Ok(FixedPoint::NonUnique { dimension: n }),
    }
}
