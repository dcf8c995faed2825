//! Entropies in bits.

use super::{eigen, ComplexMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigenvalues below this contribute nothing to an entropy.
const EIGEN_CLAMP: f64 = 1e-12;
const DOMAIN_SLACK: f64 = 1e-12;

#[inline]
fn eta<T: Real>(x: T) -> T {
    if x < T::tol(EIGEN_CLAMP) {
        T::zero()
    } else {
        -x * x.log2()
    }
}

/// `−Σ pᵢ log₂ pᵢ` with `0·log 0 = 0` and tiny/negative entries ignored.
pub fn shannon_entropy<T: Real>(probs: &[T]) -> T {
    probs.iter().map(|&p| eta(p)).sum()
}

/// `H₂(p) = −p log₂ p − (1−p) log₂(1−p)`.
pub fn binary_entropy<T: Real>(p: T) -> Result<T> {
    let slack = T::tol(DOMAIN_SLACK);
    if !(p >= -slack && p <= T::one() + slack) {
        return Err(Error::DomainError(format!(
            "binary entropy argument {} outside [0, 1]",
            p.to_f64_lossy()
        )));
    }
    let p = p.max(T::zero()).min(T::one());
    Ok(binary_entropy_unchecked(p))
}

pub(crate) fn binary_entropy_unchecked<T: Real>(p: T) -> T {
    // Both terms derive from the larger probability; `1 − big` is exact for
    // big ∈ [½, 1], so H₂(p) and H₂(1−p) evaluate identically.
    let half = T::lit(0.5);
    let big = if p >= half { p } else { T::one() - p };
    let small = T::one() - big;
    let term = |x: T| if x <= T::zero() { T::zero() } else { -x * x.log2() };
    term(small) + term(big)
}

/// Von Neumann entropy `S(ρ) = −Tr ρ log₂ ρ`.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    entropy_of_hermitian(rho.as_matrix())
}

/// Entropy of the spectrum of a Hermitian matrix, skipping state validation.
///
/// Used on intermediate channel outputs that are states up to roundoff.
pub fn entropy_of_hermitian<T: Real>(m: &ComplexMatrix<T>) -> T {
    match m.rows() {
        0 => T::zero(),
        1 => eta(m[(0, 0)].re),
        2 => {
            // closed form avoids a Jacobi pass in the hot optimization loops
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = m[(0, 1)];
            let half_tr = (a + d) * T::lit(0.5);
            let half_gap = (((a - d) * T::lit(0.5)).powi(2) + b.norm_sqr()).sqrt();
            eta(half_tr + half_gap) + eta(half_tr - half_gap)
        }
        _ => eigen::jacobi(m, false).values.into_iter().map(eta).sum(),
    }
}
