//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use num_complex::Complex;

use super::{c, ComplexMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Eigen-decomposition `M = V diag(λ) V†` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let d = self.values.len();
        let scaled = ComplexMatrix::from_fn(d, d, |i, j| self.vectors[(i, j)] * self.values[j]);
        &scaled * &self.vectors.adjoint()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }
}

fn check_input<T: Real>(m: &ComplexMatrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenproblem needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let dev = m.hermiticity_deviation();
    if dev > T::tol(HERMITIAN_TOL) {
        return Err(Error::NonHermitian {
            deviation: dev.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    check_input(m)?;
    Ok(jacobi(m, false).values)
}

/// Full eigen-decomposition of a Hermitian matrix.
pub fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    check_input(m)?;
    Ok(jacobi(m, true))
}

/// Jacobi sweeps on the Hermitian part of `m`. Input must already be validated.
pub(crate) fn jacobi<T: Real>(m: &ComplexMatrix<T>, want_vectors: bool) -> HermitianEigen<T> {
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = T::tol(OFF_DIAGONAL_TOL) * scale;

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= threshold || scale == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, apq, mag, want_vectors);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag = a.real_diagonal();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = if want_vectors {
        ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])])
    } else {
        ComplexMatrix::zeros(0, 0)
    };
    HermitianEigen { values, vectors }
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Applies the unitary `J` that zeroes `a[p][q]`: `A ← J† A J`, `V ← V J`.
///
/// With `e = a_pq/|a_pq|`, `J` acts on the `(p, q)` plane as
/// `[[c, s], [−s·e*, c·e*]]`, i.e. a phase that makes the pivot real followed
/// by a real Jacobi rotation.
fn rotate<T: Real>(
    a: &mut ComplexMatrix<T>,
    v: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    apq: Complex<T>,
    mag: T,
    want_vectors: bool,
) {
    let n = a.rows();
    let two = T::lit(2.0);
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (two * mag);
    let t = {
        let sign = if theta >= T::zero() { T::one() } else { -T::one() };
        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let cs = T::one() / (t * t + T::one()).sqrt();
    let sn = t * cs;
    let e = apq / mag;
    let ec = e.conj();

    let j_pp = c(cs);
    let j_pq = c(sn);
    let j_qp = ec * (-sn);
    let j_qq = ec * cs;

    // A ← A J (columns p, q)
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * j_pp + aiq * j_qp;
        a[(i, q)] = aip * j_pq + aiq * j_qq;
    }
    // A ← J† A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = c(T::zero());
    a[(q, p)] = c(T::zero());
    a[(p, p)] = c(a[(p, p)].re);
    a[(q, q)] = c(a[(q, q)].re);

    if want_vectors {
        for i in 0..n {
            let vip = v[(i, p)];
            let viq = v[(i, q)];
            v[(i, p)] = vip * j_pp + viq * j_qp;
            v[(i, q)] = vip * j_pq + viq * j_qq;
        }
    }
}
